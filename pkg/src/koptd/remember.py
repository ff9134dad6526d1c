"""Vertex, edge and face remember numbers of spanning forests.

For a spanning forest T of G every non-tree edge e closes a fundamental cycle
C_e.  The remember number of a vertex (tree edge, face) counts the cycles
passing through it (using it, sharing a boundary edge with it); the remember
number of (G, T) is the maximum over all vertices (tree edges, non-outer
faces).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from .errors import Disconnected, TooLarge
from .graph import (Edge, Graph, SpanningForest, _DSU, components,
                    fundamental_cycle, is_connected, spanning_forest)
from .planarity import PlanarEmbedding, face_layer_numbers

EXACT_VERTEX_LIMIT = 10
EXACT_TREE_LIMIT = 10 ** 6


def fundamental_cycles(g: Graph, t: SpanningForest) -> dict[Edge, tuple[frozenset[int], frozenset[Edge]]]:
    return {e: fundamental_cycle(g, t, e) for e in t.non_tree_edges}


@dataclass(frozen=True)
class Witness:
    at: object                  # vertex, tree edge or face id achieving the maximum
    cycles: tuple[Edge, ...]    # non-tree edges whose cycles are counted there


@dataclass(frozen=True)
class RememberReport:
    vr: int
    er: int
    fr: int
    witnesses: dict[str, Witness] = field(compare=False, default_factory=dict)

    def as_dict(self) -> dict:
        return {"vr": self.vr, "er": self.er, "fr": self.fr,
                "witnesses": {k: {"at": w.at, "cycles": [list(e) for e in w.cycles]}
                              for k, w in self.witnesses.items()}}


def _best(counts: dict) -> tuple[object, tuple[Edge, ...]] | None:
    if not counts:
        return None
    key = max(counts, key=lambda x: (len(counts[x]), _neg(x)))
    return key, tuple(sorted(counts[key]))


def _neg(x):
    # prefer the smallest key among equal counts
    if isinstance(x, tuple):
        return tuple(-a for a in x)
    return -x


def _vertex_counts(g: Graph, cyc) -> dict[int, list[Edge]]:
    out: dict[int, list[Edge]] = {v: [] for v in g.vertices}
    for e, (vs, _) in cyc.items():
        for v in vs:
            out[v].append(e)
    return out


def _edge_counts(t: SpanningForest, cyc) -> dict[Edge, list[Edge]]:
    out: dict[Edge, list[Edge]] = {e: [] for e in sorted(t.tree_edges)}
    for e, (_, es) in cyc.items():
        for f in es:
            if f != e:
                out[f].append(e)
    return out


def _face_counts(emb: PlanarEmbedding, cyc) -> dict[int, list[Edge]]:
    out: dict[int, list[Edge]] = {}
    for f in emb.faces:
        if f.id == emb.outer_face:
            continue
        out[f.id] = [e for e, (_, es) in cyc.items() if es & f.boundary_edges]
    return out


def vertex_remember(g: Graph, t: SpanningForest) -> int:
    counts = _vertex_counts(g, fundamental_cycles(g, t))
    return max((len(c) for c in counts.values()), default=0)


def edge_remember(g: Graph, t: SpanningForest) -> int:
    counts = _edge_counts(t, fundamental_cycles(g, t))
    return max((len(c) for c in counts.values()), default=0)


def face_remember(g: Graph, t: SpanningForest, emb: PlanarEmbedding) -> int:
    counts = _face_counts(emb, fundamental_cycles(g, t))
    return max((len(c) for c in counts.values()), default=0)


def remember_report(g: Graph, t: SpanningForest, emb: PlanarEmbedding | None = None) -> RememberReport:
    cyc = fundamental_cycles(g, t)
    wit = {}
    nums = {}
    for name, counts in (("vr", _vertex_counts(g, cyc)), ("er", _edge_counts(t, cyc)),
                         ("fr", _face_counts(emb, cyc) if emb is not None else {})):
        best = _best(counts)
        nums[name] = len(best[1]) if best else 0
        if best:
            wit[name] = Witness(best[0], best[1])
    return RememberReport(nums["vr"], nums["er"], nums["fr"], wit)


# --------------------------------------------------------------------------
# spanning tree enumeration

def iter_spanning_trees(g: Graph) -> Iterator[frozenset[Edge]]:
    """All maximal spanning forests of ``g``, in lexicographic edge order.

    Backtracking over the canonical edge order: an edge is skipped only if the
    remaining edges can still complete the forest.
    """
    edges = list(g.edges)
    target = g.n - len(components(g))
    m = len(edges)
    chosen: list[Edge] = []

    def reachable(start: int, dsu_p: dict[int, int]) -> int:
        # number of merges still possible using edges[start:]
        d = _DSU(g.vertices)
        d.p = dict(dsu_p)
        return sum(1 for e in edges[start:] if d.union(*e))

    def rec(i: int, dsu_p: dict[int, int]) -> Iterator[frozenset[Edge]]:
        if len(chosen) == target:
            yield frozenset(chosen)
            return
        if i == m or len(chosen) + reachable(i, dsu_p) < target:
            return
        d = _DSU(g.vertices)
        d.p = dict(dsu_p)
        if d.union(*edges[i]):
            chosen.append(edges[i])
            yield from rec(i + 1, d.p)
            chosen.pop()
        yield from rec(i + 1, dsu_p)

    yield from rec(0, {v: v for v in g.vertices})


def count_spanning_trees(g: Graph) -> int:
    """Kirchhoff's theorem per component (exact integer arithmetic)."""
    from fractions import Fraction
    total = 1
    for comp in components(g):
        vs = sorted(comp)
        if len(vs) == 1:
            continue
        idx = {v: i for i, v in enumerate(vs[1:])}
        k = len(idx)
        mat = [[Fraction(0)] * k for _ in range(k)]
        for u, v in g.edges:
            if u not in comp:
                continue
            for a, b in ((u, v), (v, u)):
                if a in idx:
                    mat[idx[a]][idx[a]] += 1
                    if b in idx:
                        mat[idx[a]][idx[b]] -= 1
        det = Fraction(1)
        for c in range(k):
            piv = next((r for r in range(c, k) if mat[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                det = -det
            det *= mat[c][c]
            for r in range(c + 1, k):
                if mat[r][c]:
                    fac = mat[r][c] / mat[c][c]
                    for j in range(c, k):
                        mat[r][j] -= fac * mat[c][j]
        total *= int(det)
    return total


OBJECTIVES: dict[str, Callable[[RememberReport], int]] = {
    "vr": lambda r: r.vr,
    "er": lambda r: r.er,
    "fr": lambda r: r.fr,
    "max(er+1,3fr)": lambda r: max(r.er + 1, 3 * r.fr),
}


def exact_min_remember(g: Graph, emb: PlanarEmbedding | None, objective: str = "fr") -> tuple[SpanningForest, int]:
    """Exact optimum of ``objective`` over all spanning forests.

    Ties go to the lexicographically smallest tree edge list.
    """
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if objective in ("fr", "max(er+1,3fr)") and emb is None:
        raise ValueError("face remember numbers need an embedding")
    if g.n > EXACT_VERTEX_LIMIT and count_spanning_trees(g) > EXACT_TREE_LIMIT:
        raise TooLarge(f"too many spanning trees to enumerate (n={g.n})")
    score = OBJECTIVES[objective]
    best = None
    for edges in iter_spanning_trees(g):
        t = SpanningForest(g, edges)
        val = score(remember_report(g, t, emb))
        key = (val, sorted(edges))
        if best is None or key < best[0]:
            best = (key, t)
    return best[1], best[0][0]


# --------------------------------------------------------------------------
# synthesis

def _score(g: Graph, t: SpanningForest, emb: PlanarEmbedding) -> tuple[int, int, int]:
    r = remember_report(g, t, emb)
    return (r.fr, r.er, r.vr)


def layered_priority(g: Graph, emb: PlanarEmbedding) -> list[Edge]:
    """Edge order for the greedy start: edges on low-layer faces first, and
    among those edges joining consecutive layers before edges inside a layer."""
    fl = face_layer_numbers(emb)
    low = {}
    for f in emb.faces:
        for e in f.boundary_edges:
            low[e] = min(low.get(e, 1 << 30), fl[f.id])
    from .planarity import vertex_layers
    vl = vertex_layers(emb)
    return sorted(g.edges, key=lambda e: (low[e], vl[e[0]] == vl[e[1]], e))


def local_search(g: Graph, t: SpanningForest, emb: PlanarEmbedding, max_rounds: int = 50) -> SpanningForest:
    """First-improvement edge swaps on (fr, er, vr)."""
    cur = t
    cur_score = _score(g, cur, emb)
    for _ in range(max_rounds):
        improved = False
        for e in cur.non_tree_edges:
            _, path = fundamental_cycle(g, cur, e)
            for f in sorted(path - {e}):
                cand = SpanningForest(g, (cur.tree_edges - {f}) | {e})
                s = _score(g, cand, emb)
                if s < cur_score:
                    cur, cur_score, improved = cand, s, True
                    break
            if improved:
                break
        if not improved:
            break
    return cur


def synthesize_spanning_tree(g: Graph, k: int, emb: PlanarEmbedding,
                             exact_limit: int = 2000) -> tuple[SpanningForest, RememberReport]:
    """Spanning tree with small face remember number, then small edge
    remember number.

    Greedy on :func:`layered_priority`, improved by local search; if the
    graph has at most ``exact_limit`` spanning trees the exact optimum is
    returned instead.  ``k`` is accepted for symmetry with the bound
    fr <= k, er <= 2k; the report lets callers check it.
    """
    if not is_connected(g):
        raise Disconnected("graph is not connected")
    t = spanning_forest(g, layered_priority(g, emb))
    if not t.non_tree_edges:
        return t, remember_report(g, t, emb)
    t = local_search(g, t, emb)
    if count_spanning_trees(g) <= exact_limit:
        best = None
        for edges in iter_spanning_trees(g):
            cand = SpanningForest(g, edges)
            key = (_score(g, cand, emb), sorted(edges))
            if best is None or key < best[0]:
                best = (key, cand)
        if best[0][0] < _score(g, t, emb):
            t = best[1]
    return t, remember_report(g, t, emb)
