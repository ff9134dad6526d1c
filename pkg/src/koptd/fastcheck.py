"""Compiled scan over all spanning trees of a small planar graph.

For every spanning tree T the kernel computes vr, er and fr and the widths
of the decompositions built by td_from_vr_er and td_from_er_fr (same bags,
same endpoint rule, same per-vertex frames), so exhaustive bound checks over
millions of (graph, tree) pairs fit in minutes.  Edge and vertex sets are
int64 bitmasks, so graphs need m <= 62.

The reference implementations stay in remember.py and treedec.py; the test
suite checks the kernel against them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .graph import Graph
from .planarity import PlanarEmbedding, face_layer_numbers
from .treedec import degeneracy_coloring, endpoint_rule, vertex_frame


@dataclass(frozen=True)
class ScanInput:
    n: int
    eu: np.ndarray          # edge endpoints, canonical order
    ev: np.ndarray
    rep: np.ndarray         # representative endpoint of each edge
    faces: np.ndarray       # boundary edge masks of the non-outer faces
    deg: np.ndarray
    pos: np.ndarray         # pos[v, e] = index of e in v's frame, or -1


def prepare(g: Graph, emb: PlanarEmbedding) -> ScanInput:
    index = {e: i for i, e in enumerate(g.edges)}
    rep_map = endpoint_rule(g, degeneracy_coloring(g))
    ln = face_layer_numbers(emb)
    pos = -np.ones((g.n, max(g.m, 1)), dtype=np.int64)
    deg = np.zeros(g.n, dtype=np.int64)
    vid = {v: i for i, v in enumerate(g.vertices)}
    for v in g.vertices:
        fr = vertex_frame(emb, v, ln)
        deg[vid[v]] = fr.d
        for j, e in enumerate(fr.edges):
            pos[vid[v], index[e]] = j
    faces = [sum(1 << index[e] for e in f.boundary_edges)
             for f in emb.faces if f.id != emb.outer_face]
    return ScanInput(
        g.n,
        np.array([vid[u] for u, _ in g.edges], dtype=np.int64),
        np.array([vid[v] for _, v in g.edges], dtype=np.int64),
        np.array([vid[rep_map[e]] for e in g.edges], dtype=np.int64),
        np.array(faces, dtype=np.int64),
        deg, pos)


@numba.njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@numba.njit(cache=True)
def _find(p, x):
    while p[x] != x:
        p[x] = p[p[x]]
        x = p[x]
    return x


@numba.njit(cache=True)
def _evaluate(n, m, eu, ev, rep, faces, deg, pos, inc, mask, out_vals):
    """vr, er, fr, width1, width2 of the tree with edge set ``mask``."""
    # root the tree at vertex 0
    par = -np.ones(n, dtype=np.int64)
    pedge = -np.ones(n, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    seen = np.zeros(n, dtype=np.bool_)
    queue = np.zeros(n, dtype=np.int64)
    queue[0] = 0
    seen[0] = True
    head, tail = 0, 1
    while head < tail:
        x = queue[head]
        head += 1
        es = mask & inc[x]
        while es:
            low = es & -es
            e = 0
            while (low >> e) != 1:
                e += 1
            es ^= low
            y = eu[e] if ev[e] == x else ev[e]
            if not seen[y]:
                seen[y] = True
                par[y] = x
                pedge[y] = e
                depth[y] = depth[x] + 1
                queue[tail] = y
                tail += 1
    # fundamental cycles of the non-tree edges
    nc = 0
    cmask = np.zeros(m, dtype=np.int64)
    vmask = np.zeros(m, dtype=np.int64)
    crep = np.zeros(m, dtype=np.int64)
    for j in range(m):
        if (mask >> j) & 1:
            continue
        a, b = eu[j], ev[j]
        em = np.int64(1) << j
        vm = (np.int64(1) << a) | (np.int64(1) << b)
        while a != b:
            if depth[a] >= depth[b]:
                em |= np.int64(1) << pedge[a]
                a = par[a]
            else:
                em |= np.int64(1) << pedge[b]
                b = par[b]
            vm |= np.int64(1) << a
            vm |= np.int64(1) << b
        cmask[nc] = em
        vmask[nc] = vm
        crep[nc] = rep[j]
        nc += 1
    vr = 0
    w = 0
    w2 = 0
    for v in range(n):
        cnt = 0
        bag = np.int64(1) << v
        for c in range(nc):
            if (vmask[c] >> v) & 1:
                cnt += 1
                bag |= np.int64(1) << crep[c]
        vr = max(vr, cnt)
        w = max(w, _popcount(bag))
        # path bags of v in the frame order
        d = deg[v]
        nb = d - 2 if d > 2 else 1
        pb = np.zeros(nb, dtype=np.int64)
        for p in range(nb):
            pb[p] = np.int64(1) << v
        for c in range(nc):
            if not (vmask[c] >> v) & 1:
                continue
            at = cmask[c] & inc[v]
            lo = -1
            hi = -1
            while at:
                low = at & -at
                e = 0
                while (low >> e) != 1:
                    e += 1
                at ^= low
                if lo == -1:
                    lo = pos[v, e]
                else:
                    hi = pos[v, e]
            if hi < lo:
                lo, hi = hi, lo
            if d > 2:
                s0 = min(max(lo, 1), d - 2) - 1
                s1 = min(max(hi, 1), d - 2) - 1
            else:
                s0 = 0
                s1 = 0
            for p in range(s0, s1 + 1):
                pb[p] |= np.int64(1) << crep[c]
        for p in range(nb):
            w2 = max(w2, _popcount(pb[p]))
    er = 0
    for e in range(m):
        if not (mask >> e) & 1:
            continue
        cnt = 0
        bag = (np.int64(1) << eu[e]) | (np.int64(1) << ev[e])
        for c in range(nc):
            if (cmask[c] >> e) & 1:
                cnt += 1
                bag |= np.int64(1) << crep[c]
        er = max(er, cnt)
        w = max(w, _popcount(bag))
        w2 = max(w2, _popcount(bag))
    fr = 0
    for f in range(faces.shape[0]):
        cnt = 0
        for c in range(nc):
            if cmask[c] & faces[f]:
                cnt += 1
        fr = max(fr, cnt)
    out_vals[0] = vr
    out_vals[1] = er
    out_vals[2] = fr
    out_vals[3] = w - 1
    out_vals[4] = w2 - 1


@numba.njit(cache=True)
def _scan(n, eu, ev, rep, faces, deg, pos, k):
    m = eu.shape[0]
    res = np.zeros(11, dtype=np.int64)
    res[5] = res[6] = res[7] = 1 << 30
    res[9] = res[10] = -1
    inc = np.zeros(n, dtype=np.int64)
    for e in range(m):
        inc[eu[e]] |= np.int64(1) << e
        inc[ev[e]] |= np.int64(1) << e
    vals = np.zeros(5, dtype=np.int64)
    if n == 1:
        res[0] = 1
        res[5] = res[6] = res[7] = 0
        res[8] = 1
        return res
    # depth-first include/exclude over the canonical edge order
    stack_i = np.zeros(m + 2, dtype=np.int64)
    stack_m = np.zeros(m + 2, dtype=np.int64)
    top = 0
    stack_i[0] = 0
    stack_m[0] = 0
    top = 1
    p = np.zeros(n, dtype=np.int64)
    while top > 0:
        top -= 1
        i = stack_i[top]
        mask = stack_m[top]
        if _popcount(mask) == n - 1:
            _evaluate(n, m, eu, ev, rep, faces, deg, pos, inc, mask, vals)
            vr, er, fr, w1, w2 = vals[0], vals[1], vals[2], vals[3], vals[4]
            res[0] += 1
            if w1 > max(vr, er + 1):
                res[1] += 1
                if res[9] == -1:
                    res[9] = mask
            if w2 > max(er + 1, 3 * fr):
                res[2] += 1
                if res[10] == -1:
                    res[10] = mask
            res[3] = max(res[3], w1)
            res[4] = max(res[4], w2)
            res[5] = min(res[5], vr)
            res[6] = min(res[6], er)
            res[7] = min(res[7], fr)
            if er <= 2 * k and fr <= k:
                res[8] = 1
            continue
        if i == m:
            continue
        # prune: mask plus the remaining edges must still connect the graph
        for v in range(n):
            p[v] = v
        comps = n
        for e in range(m):
            if e >= i or (mask >> e) & 1:
                a = _find(p, eu[e])
                b = _find(p, ev[e])
                if a != b:
                    p[max(a, b)] = min(a, b)
                    comps -= 1
        if comps != 1:
            continue
        # exclude edge i (explored second)
        stack_i[top] = i + 1
        stack_m[top] = mask
        top += 1
        for v in range(n):
            p[v] = v
        for e in range(i):
            if (mask >> e) & 1:
                a = _find(p, eu[e])
                b = _find(p, ev[e])
                p[max(a, b)] = min(a, b)
        if _find(p, eu[i]) != _find(p, ev[i]):
            stack_i[top] = i + 1
            stack_m[top] = mask | (np.int64(1) << i)
            top += 1
    return res


@dataclass(frozen=True)
class ScanResult:
    n_trees: int
    viol_vr_er: int          # trees with td_from_vr_er width > max{vr, er+1}
    viol_er_fr: int          # trees with td_from_er_fr width > max{er+1, 3 fr}
    max_width_vr_er: int
    max_width_er_fr: int
    min_vr: int
    min_er: int
    min_fr: int
    both_ok: bool            # some tree has er <= 2k and fr <= k
    first_bad_vr_er: int     # edge mask of a violating tree, or -1
    first_bad_er_fr: int


def scan_spanning_trees(g: Graph, emb: PlanarEmbedding, k: int = 0) -> ScanResult:
    """Enumerate every spanning tree of a connected graph (stack depth m)."""
    if g.m > 62:
        raise ValueError("kernel supports at most 62 edges")
    s = prepare(g, emb)
    faces = s.faces if len(s.faces) else np.zeros(0, dtype=np.int64)
    r = _scan(s.n, s.eu, s.ev, s.rep, faces, s.deg, s.pos, k)
    return ScanResult(int(r[0]), int(r[1]), int(r[2]), int(r[3]), int(r[4]),
                      int(r[5]), int(r[6]), int(r[7]), bool(r[8]), int(r[9]), int(r[10]))


def tree_values(g: Graph, emb: PlanarEmbedding, tree_edges) -> tuple[int, int, int, int, int]:
    """(vr, er, fr, width of td_from_vr_er, width of td_from_er_fr) for one tree."""
    s = prepare(g, emb)
    index = {e: i for i, e in enumerate(g.edges)}
    mask = 0
    for e in tree_edges:
        mask |= 1 << index[e]
    inc = np.zeros(s.n, dtype=np.int64)
    for e in range(g.m):
        inc[s.eu[e]] |= 1 << e
        inc[s.ev[e]] |= 1 << e
    vals = np.zeros(5, dtype=np.int64)
    faces = s.faces if len(s.faces) else np.zeros(0, dtype=np.int64)
    _evaluate(s.n, g.m, s.eu, s.ev, s.rep, faces, s.deg, s.pos, inc, np.int64(mask), vals)
    return tuple(int(x) for x in vals)
