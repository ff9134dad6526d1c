"""Gluing per-3-block decompositions into one rooted tree decomposition.

Pipeline: blocks (1-cuts) -> Tutte decomposition of every 2-connected block
(2-cuts) -> one decomposition per 3-block (3-connected: td_3connected_kop on
the 3-block graph; cycle: a fan of triangles; bridge: a single bag) -> cut
bags wired between them -> child structures augmented with the cut vertices
they hang under.

Width accounting: a bag of a 3-block decomposition gains at most the two
vertices of its parent 2-cut and the one vertex of its block's parent 1-cut,
so the result has width at most (max 3-block width) + 3.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .errors import AmbiguousOrientation, Disconnected, RootNotOnCycle
from .graph import Graph, SpanningForest, edge, is_connected, root_orient
from .planarity import (best_outer_face, outerplanarity_index, require_embedding,
                        stripping_layers)
from .remember import synthesize_spanning_tree
from .treedec import (BLOCK, CUT, CYC, Label, TreeDecomposition, ValidationReport,
                      td_3connected_kop, validate, width)
from .tutte import (CYCLE, TutteDecomposition, block_decomposition,
                    derive_spanning_sets, three_block_graph, tutte_decomposition)


# --------------------------------------------------------------------------
# root

def cut_memberships(g: Graph) -> dict[int, int]:
    """Number of 1-cuts and Tutte 2-cuts each vertex belongs to."""
    bd = block_decomposition(g)
    count = {v: 0 for v in g.vertices}
    for c in bd.cut_vertices:
        count[c] += 1
    for i, blk in enumerate(bd.blocks):
        if len(blk) < 3:
            continue
        for cut in tutte_decomposition(bd.block_graph(i)).cut_bags:
            for v in cut:
                count[v] += 1
    return count


def choose_root(g: Graph) -> int:
    """Smallest vertex in no 1-cut and no 2-cut; else the smallest vertex
    with the fewest cut memberships."""
    if not is_connected(g):
        raise Disconnected("graph is not connected")
    count = cut_memberships(g)
    return min(g.vertices, key=lambda v: (count[v], v))


# --------------------------------------------------------------------------
# cycle 3-blocks

def cycle_order(c: Graph, r: int, first: int | None = None) -> list[int]:
    """Vertices of the cycle ``c`` walked from ``r``; ``first`` is the
    neighbour visited first (default: the smaller one)."""
    if r not in c.vertex_set:
        raise RootNotOnCycle(f"{r} is not on the cycle")
    if c.m != c.n or any(c.degree(v) != 2 for v in c.vertices) or not is_connected(c):
        raise RootNotOnCycle("graph is not a simple cycle")
    nbrs = sorted(c.adj[r])
    if first is None:
        first = nbrs[0]
    if first not in nbrs:
        raise RootNotOnCycle(f"{first} is not a neighbour of {r}")
    walk = [r, first]
    while len(walk) < c.n:
        a, b = walk[-2], walk[-1]
        walk.append(next(x for x in c.adj[b] if x != a))
    return walk


def cycle_block_td(c: Graph, r_c: int, orientation: int | None = None) -> TreeDecomposition:
    """Bags {r_c, v, w} for the cycle edges {v, w} away from r_c, chained in
    the order of the walk that leaves r_c towards ``orientation``."""
    walk = cycle_order(c, r_c, orientation)
    bags = [frozenset({r_c, walk[i], walk[i + 1]}) for i in range(1, len(walk) - 1)]
    labels = {i: Label(CYC, edge(walk[i + 1], walk[i + 2])) for i in range(len(bags))}
    tedges = frozenset((i, i + 1) for i in range(len(bags) - 1))
    parent = {i + 1: i for i in range(len(bags) - 1)}
    return TreeDecomposition(tuple(bags), tedges, parent, labels)


# --------------------------------------------------------------------------
# cut orientation by path-prefix tests

def _ancestors(t: SpanningForest, v: int) -> set[int]:
    out = {v}
    p = t.parent_of(v)
    while p is not None:
        out.add(p)
        p = t.parent_of(p)
    return out


def orient_cut_block(cut, neighbors, g: Graph, t: SpanningForest) -> tuple[frozenset[int], frozenset[int]]:
    """(parent side, child side) among the two 3-blocks around a 2-cut.

    With P_v the tree path from the root to v, a 3-block is on the child side
    if for all of its vertices v outside the cut P_x or P_y is a prefix of
    P_v, and on the parent side if some such v has P_v a prefix of P_x or
    P_y.  Exactly one block must pass each test.
    """
    x, y = sorted(cut)
    a, b = (frozenset(n) for n in neighbors)
    anc_x, anc_y = _ancestors(t, x), _ancestors(t, y)

    def child_side(w):
        return all({x, y} & _ancestors(t, v) for v in w - {x, y})

    def parent_side(w):
        return any(v in anc_x or v in anc_y for v in w - {x, y})

    ca, cb = child_side(a), child_side(b)
    pa, pb = parent_side(a), parent_side(b)
    if pa and cb and not pb and not ca:
        return a, b
    if pb and ca and not pa and not cb:
        return b, a
    raise AmbiguousOrientation(f"cut {sorted(cut)}: child={ca, cb} parent={pa, pb}")


# --------------------------------------------------------------------------
# assembly

@dataclass(frozen=True)
class BlockStage:
    block: int                      # index in the block decomposition
    three_block: int                # index in its Tutte decomposition (-1: bridge)
    vertices: tuple[int, ...]
    kind: str                       # three_connected | cycle | edge
    width: int                      # before augmentation
    augmented_by: tuple[int, ...]   # parent 2-cut and 1-cut vertices added
    nodes: tuple[int, ...]          # node ids in the assembled decomposition
    er: int | None = None
    fr: int | None = None
    tree_source: str = ""           # derived | synthesized (3-connected only)


@dataclass(frozen=True)
class AssemblyPlan:
    root: int
    thetas: Mapping[tuple[int, int], TreeDecomposition] = field(compare=False)
    cut_parent: Mapping[int, int] = field(compare=False)      # cut node -> parent node
    block_parent: Mapping[int, int] = field(compare=False)    # structure root node -> parent node


@dataclass(frozen=True)
class AssemblyReport:
    k: int
    root: int
    root_deviation: bool            # the root lies in some 1-cut or 2-cut
    width: int
    max_block_width: int
    stages: tuple[BlockStage, ...]
    orientation_checks: tuple[tuple[tuple[int, int], str], ...]
    validation: ValidationReport

    @property
    def within_3k(self) -> bool:
        """Every 3-connected 3-block decomposition has width <= 3k."""
        return all(s.width <= 3 * self.k for s in self.stages if s.kind == "three_connected")

    def as_dict(self) -> dict:
        return {"k": self.k, "root": self.root, "root_deviation": self.root_deviation,
                "width": self.width, "max_block_width": self.max_block_width,
                "bound": 3 * self.k + 3, "within_3k": self.within_3k,
                "valid": self.validation.valid,
                "stages": [{"block": s.block, "three_block": s.three_block,
                            "vertices": list(s.vertices), "kind": s.kind, "width": s.width,
                            "augmented_by": list(s.augmented_by), "er": s.er, "fr": s.fr,
                            "tree_source": s.tree_source} for s in self.stages],
                "orientation_checks": [[list(c), r] for c, r in self.orientation_checks]}


@dataclass(frozen=True)
class Assembly:
    td: TreeDecomposition
    plan: AssemblyPlan
    report: AssemblyReport


class _Builder:
    def __init__(self):
        self.bags: list[set[int]] = []
        self.labels: dict[int, Label] = {}
        self.parent: dict[int, int] = {}

    def add(self, bag, label: Label) -> int:
        self.bags.append(set(bag))
        self.labels[len(self.bags) - 1] = label
        return len(self.bags) - 1

    def graft(self, td: TreeDecomposition) -> tuple[list[int], int]:
        """Copy a rooted decomposition; return its node ids and root id."""
        ids = [self.add(b, td.labels[i] if td.labels else Label(BLOCK)) for i, b in enumerate(td.bags)]
        par = td.parent or {}
        for c, p in par.items():
            self.parent[ids[c]] = ids[p]
        roots = [i for i in td.nodes if i not in par]
        return ids, ids[roots[0]]

    def depth(self, i: int) -> int:
        d = 0
        while i in self.parent:
            i = self.parent[i]
            d += 1
        return d

    def closest(self, nodes, need: set[int]) -> int:
        """𝒳*: the node holding ``need`` nearest to the root, ties by id."""
        cands = [i for i in nodes if need <= self.bags[i]]
        return min(cands, key=lambda i: (self.depth(i), i))


def _three_connected_theta(h: Graph, k: int, tree: SpanningForest | None):
    """td_3connected_kop on a 3-block graph with the derived tree; if that
    tree misses er <= 2k or fr <= k, a tree synthesized on the 3-block graph
    is tried too and the narrower result kept."""
    emb = best_outer_face(require_embedding(h))
    res = None
    if tree is not None and len(tree.tree_edges) == h.n - 1:
        res = td_3connected_kop(h, k, t=tree, emb=emb)
        if res.er <= 2 * k and res.fr <= k:
            return res, "derived"
    alt = td_3connected_kop(h, k, emb=emb)
    if res is None or width(alt.td) < width(res.td):
        return alt, "synthesized"
    return res, "derived"


def assemble(g: Graph, k: int | None = None, t: SpanningForest | None = None) -> Assembly:
    """Rooted tree decomposition of a connected planar graph, with a report.

    ``k`` defaults to the number of stripping layers; ``t`` to a synthesized
    spanning tree of small face remember number, rooted at
    :func:`choose_root`.
    """
    if not is_connected(g):
        raise Disconnected("graph is not connected")
    emb = best_outer_face(require_embedding(g))
    if k is None:
        k = stripping_layers(g, emb).k if g.n else 0
    counts = cut_memberships(g)
    r = choose_root(g)
    if t is None:
        t, _ = synthesize_spanning_tree(g, k, emb)
    t = root_orient(t, r)
    bd = block_decomposition(g)
    td3s = {i: tutte_decomposition(bd.block_graph(i))
            for i, blk in enumerate(bd.blocks) if len(blk) >= 3}
    ss = derive_spanning_sets(g, t, td3s) if td3s else None

    out = _Builder()
    thetas: dict[tuple[int, int], TreeDecomposition] = {}
    stages: list[BlockStage] = []
    checks: list[tuple[tuple[int, int], str]] = []
    cut_parent: dict[int, int] = {}
    block_parent: dict[int, int] = {}

    def build_block(bi: int, entry: int, one_cut: set[int]) -> tuple[list[int], int]:
        blk = bd.blocks[bi]
        if len(blk) <= 2:
            node = out.add(blk | one_cut, Label(BLOCK, tuple(sorted(blk))))
            stages.append(BlockStage(bi, -1, tuple(sorted(blk)), "edge", len(blk) - 1,
                                     tuple(sorted(one_cut)), (node,)))
            return [node], node
        td3 = td3s[bi]
        nb3 = len(td3.block_bags)
        cuts_at: dict[int, list[int]] = {j: [] for j in range(nb3)}
        blocks_at: dict[int, list[int]] = {c: [] for c in range(len(td3.cut_bags))}
        for c, j in sorted(td3.links):
            cuts_at[j].append(c)
            blocks_at[c].append(j)
        start = min(j for j in range(nb3) if entry in td3.block_bags[j])
        all_nodes: list[int] = []
        cut_node: dict[int, int] = {}
        theta_nodes: dict[int, list[int]] = {}
        seen_b, seen_c = {start}, set()
        queue = deque([(start, None)])
        root_node = None
        while queue:
            j, via = queue.popleft()
            w = td3.block_bags[j]
            h = three_block_graph(td3, j)
            aug = set(one_cut)
            if via is None:
                r_c, first = entry, None
            else:
                x, y = sorted(td3.cut_bags[via])
                aug |= {x, y}
                r_c = min((x, y), key=lambda v: (t.depth(v), v))
                first = y if r_c == x else x
            er = fr = None
            source = ""
            if td3.kinds[j] == CYCLE:
                theta = cycle_block_td(h, r_c, first)
                kind = "cycle"
            else:
                tree = ss.trees.get((bi, w)) if ss is not None else None
                res, source = _three_connected_theta(h, k, tree)
                theta, er, fr = res.td, res.er, res.fr
                kind = "three_connected"
            thetas[(bi, j)] = theta
            ids, top = out.graft(theta)
            for i in ids:
                out.bags[i] |= aug
            theta_nodes[j] = ids
            all_nodes.extend(ids)
            stages.append(BlockStage(bi, j, tuple(sorted(w)), kind, width(theta),
                                     tuple(sorted(aug)), tuple(ids), er, fr, source))
            if via is None:
                root_node = top
            else:
                out.parent[top] = cut_node[via]
                block_parent[top] = cut_node[via]
            for c in cuts_at[j]:
                if c in seen_c:
                    continue
                seen_c.add(c)
                cut = td3.cut_bags[c]
                node = out.add(set(cut) | one_cut, Label(CUT, tuple(sorted(cut))))
                host = out.closest(ids, set(cut))
                out.parent[node] = host
                cut_parent[node] = host
                cut_node[c] = node
                all_nodes.append(node)
                kids = [jj for jj in blocks_at[c] if jj not in seen_b]
                if len(blocks_at[c]) == 2:
                    checks.append((tuple(sorted(cut)), _check(cut, j, kids, td3, g, t)))
                for jj in kids:
                    seen_b.add(jj)
                    queue.append((jj, c))
        return all_nodes, root_node

    # block-cut tree from the block holding the root
    first = min(i for i, b in enumerate(bd.blocks) if r in b)
    done = {first}
    nodes0, root0 = build_block(first, r, set())
    queue = deque([(first, nodes0)])
    while queue:
        bi, nodes = queue.popleft()
        for c in sorted(bd.blocks[bi] & set(bd.cut_vertices)):
            for bj, blk in enumerate(bd.blocks):
                if bj in done or c not in blk:
                    continue
                done.add(bj)
                sub, top = build_block(bj, c, {c})
                host = out.closest(nodes, {c})
                out.parent[top] = host
                block_parent[top] = host
                queue.append((bj, sub))

    bags = tuple(frozenset(b) for b in out.bags)
    tedges = frozenset((p, c) for c, p in out.parent.items())
    td = TreeDecomposition(bags, tedges, dict(out.parent), out.labels)
    rep = validate(g, td)
    plan = AssemblyPlan(r, thetas, cut_parent, block_parent)
    mbw = max((s.width for s in stages), default=0)
    report = AssemblyReport(k, r, counts[r] > 0, width(td), mbw, tuple(stages),
                            tuple(checks), rep)
    return Assembly(td, plan, report)


def _check(cut, j: int, kids: list[int], td3: TutteDecomposition, g: Graph, t: SpanningForest) -> str:
    """Compare the traversal direction at a cut with the prefix tests."""
    if len(kids) != 1:
        return "skipped"
    a, b = td3.block_bags[j], td3.block_bags[kids[0]]
    try:
        par, _ = orient_cut_block(cut, (a, b), g, t)
    except AmbiguousOrientation:
        return "ambiguous"
    return "agree" if par == a else "disagree"


def full_td(g: Graph, k: int | None = None) -> TreeDecomposition:
    return assemble(g, k).td
