"""Block decomposition and Tutte decomposition into 2-cuts and 3-blocks.

The Tutte decomposition is computed by naive recursive splitting at
separation pairs (multigraph split components with virtual edges), followed
by merging adjacent bonds and adjacent polygons.  The result is presented as
a tree decomposition whose bags are 2-cuts ("cut bags") and vertex sets of
3-blocks ("block bags").  A 2-cut {x, y} whose removal leaves c >= 2
components becomes a single cut bag adjacent to the c block bags around it.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import networkx as nx

from .errors import Disconnected, NotRooted, NotTwoConnected, UnknownBag
from .graph import (Edge, Graph, SpanningForest, _DSU, articulation_points,
                    components, edge, induced_subgraph, is_connected,
                    is_l_connected)
from .treedec import (BLOCK, CUT, Label, TreeDecomposition, ValidationReport,
                      adhesion, width)

CYCLE, THREE_CONNECTED = "cycle", "three_connected"


# --------------------------------------------------------------------------
# blocks

@dataclass(frozen=True)
class BlockDecomposition:
    host: Graph
    blocks: tuple[frozenset[int], ...]
    cut_vertices: tuple[int, ...]
    tree: frozenset[tuple[int, int]]    # (cut vertex, block index)

    @property
    def edge_blocks(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.blocks) if len(b) == 2)

    def block_graph(self, i: int) -> Graph:
        return induced_subgraph(self.host, self.blocks[i])


def block_decomposition(g: Graph) -> BlockDecomposition:
    if not is_connected(g):
        raise Disconnected("graph is not connected")
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    blocks = sorted((frozenset(b) for b in nx.biconnected_components(h)), key=sorted)
    if not blocks and g.n == 1:
        blocks = [frozenset(g.vertices)]
    cuts = tuple(sorted(articulation_points(g)))
    tree = frozenset((c, i) for c in cuts for i, b in enumerate(blocks) if c in b)
    return BlockDecomposition(g, tuple(blocks), cuts, tree)


# --------------------------------------------------------------------------
# split components

# an edge of a split component: (u, v, id); id >= 0 is a host edge index,
# id < 0 a virtual edge shared by exactly two components
SplitEdge = tuple[int, int, int]


def _split_pair(es: list[SplitEdge]) -> tuple[int, int, list[SplitEdge]] | None:
    verts = sorted({x for u, v, _ in es for x in (u, v)})
    if len(verts) < 3 and len(es) <= 3:
        return None
    for x, y in combinations(verts, 2):
        dsu = _DSU(range(len(es)))
        first: dict[int, int] = {}
        for i, (u, v, _) in enumerate(es):
            for w in (u, v):
                if w == x or w == y:
                    continue
                if w in first:
                    dsu.union(first[w], i)
                else:
                    first[w] = i
        classes: dict[int, list[SplitEdge]] = defaultdict(list)
        for i, e in enumerate(es):
            classes[dsu.find(i)].append(e)
        if len(classes) < 2:
            continue
        groups = sorted(classes.values(), key=lambda c: (-len(c), c))
        for c in groups:
            if len(c) >= 2 and len(es) - len(c) >= 2:
                return x, y, c
        if all(len(c) == 1 for c in groups) and len(groups) >= 4:
            return x, y, groups[0] + groups[1]
    return None


def _kind(es: list[SplitEdge]) -> str:
    verts = {x for u, v, _ in es for x in (u, v)}
    if len(verts) == 2:
        return "P"
    deg: dict[int, int] = defaultdict(int)
    for u, v, _ in es:
        deg[u] += 1
        deg[v] += 1
    if all(d == 2 for d in deg.values()) and len(es) == len(verts):
        return "S"
    return "R"


def split_components(b: Graph) -> list[tuple[str, list[SplitEdge]]]:
    """Triconnected components (bonds P, polygons S, rigid R) of a
    2-connected graph, with virtual edges linking them."""
    todo = [[(u, v, i) for i, (u, v) in enumerate(b.edges)]]
    done: list[list[SplitEdge]] = []
    next_id = -1
    while todo:
        es = todo.pop()
        sp = _split_pair(es)
        if sp is None:
            done.append(es)
            continue
        x, y, part = sp
        rest = [e for e in es if e not in part]
        todo.append(sorted(part) + [(x, y, next_id)])
        todo.append(sorted(rest) + [(x, y, next_id)])
        next_id -= 1
    comps = [(_kind(es), es) for es in done]
    merged = True
    while merged:
        merged = False
        owner: dict[int, list[int]] = defaultdict(list)
        for ci, (_, es) in enumerate(comps):
            for _, _, i in es:
                if i < 0:
                    owner[i].append(ci)
        for vid in sorted(owner, reverse=True):
            a, c = owner[vid]
            if comps[a][0] == comps[c][0] and comps[a][0] in ("P", "S"):
                es = [e for e in comps[a][1] + comps[c][1] if e[2] != vid]
                kind = comps[a][0]
                comps = [x for i, x in enumerate(comps) if i not in (a, c)] + [(kind, es)]
                merged = True
                break
    return comps


# --------------------------------------------------------------------------
# Tutte decomposition

@dataclass(frozen=True)
class TutteDecomposition:
    host: Graph
    cut_bags: tuple[frozenset[int], ...]
    block_bags: tuple[frozenset[int], ...]
    kinds: tuple[str, ...]                       # per block bag: cycle | three_connected
    links: frozenset[tuple[int, int]]            # (cut index, block index)

    @property
    def virtual_edges(self) -> frozenset[Edge]:
        return frozenset(edge(*c) for c in map(sorted, self.cut_bags)
                         if not self.host.has_edge(*c))

    def cuts_of(self, block: int) -> list[frozenset[int]]:
        return [self.cut_bags[c] for c, bi in sorted(self.links) if bi == block]

    def block_index(self, bag) -> int:
        if isinstance(bag, int):
            if 0 <= bag < len(self.block_bags):
                return bag
            raise UnknownBag(bag)
        fs = frozenset(bag)
        if fs not in self.block_bags:
            raise UnknownBag(sorted(fs))
        return self.block_bags.index(fs)

    def as_tree_decomposition(self) -> TreeDecomposition:
        """Block bags first, then cut bags; labels carry the kind."""
        nb = len(self.block_bags)
        bags = list(self.block_bags) + list(self.cut_bags)
        labels = {i: Label(BLOCK, self.kinds[i]) for i in range(nb)}
        labels.update({nb + j: Label(CUT, tuple(sorted(c))) for j, c in enumerate(self.cut_bags)})
        edges = frozenset((bi, nb + c) for c, bi in self.links)
        return TreeDecomposition(tuple(bags), edges, None, labels)


def is_two_connected(g: Graph) -> bool:
    return g.n >= 3 and is_connected(g) and not articulation_points(g)


def tutte_decomposition(b: Graph) -> TutteDecomposition:
    if not is_two_connected(b):
        raise NotTwoConnected("Tutte decomposition needs a 2-connected graph")
    comps = split_components(b)
    blocks: list[tuple[frozenset[int], str, list[int]]] = []
    cuts: dict[frozenset[int], set[int]] = defaultdict(set)
    vid_owner: dict[int, list[tuple[str, int]]] = defaultdict(list)
    bonds = []
    for kind, es in comps:
        verts = frozenset(x for u, v, _ in es for x in (u, v))
        vids = [i for _, _, i in es if i < 0]
        if kind == "P":
            bonds.append((verts, vids))
            for i in vids:
                vid_owner[i].append(("P", len(bonds) - 1))
        else:
            blocks.append((verts, CYCLE if kind == "S" else THREE_CONNECTED, vids))
            for i in vids:
                vid_owner[i].append(("B", len(blocks) - 1))
    order = sorted(range(len(blocks)), key=lambda i: (sorted(blocks[i][0]), blocks[i][1]))
    rank = {old: new for new, old in enumerate(order)}
    for verts, vids in bonds:
        for i in vids:
            for kind, idx in vid_owner[i]:
                if kind == "B":
                    cuts[verts].add(rank[idx])
    for i, owners in vid_owner.items():
        if all(k == "B" for k, _ in owners):
            (_, a), (_, c) = owners
            pair = blocks[a][0] & blocks[c][0]
            cuts[pair].update((rank[a], rank[c]))
    cut_list = sorted(cuts, key=sorted)
    links = frozenset((ci, bi) for ci, c in enumerate(cut_list) for bi in cuts[c])
    return TutteDecomposition(b, tuple(cut_list), tuple(blocks[i][0] for i in order),
                              tuple(blocks[i][1] for i in order), links)


def three_block_graph(td3: TutteDecomposition, bag) -> Graph:
    """Induced subgraph on the bag plus an edge inside every incident 2-cut."""
    bi = td3.block_index(bag)
    w = td3.block_bags[bi]
    sub = induced_subgraph(td3.host, w)
    extra = {edge(*sorted(c)) for c in td3.cuts_of(bi)}
    return Graph(sub.vertices, tuple(sorted(set(sub.edges) | extra)))


def _is_cycle(h: Graph) -> bool:
    return h.n >= 3 and h.m == h.n and is_connected(h) and all(h.degree(v) == 2 for v in h.vertices)


def validate_tutte(b: Graph, td3: TutteDecomposition) -> ValidationReport:
    """Axioms of a Tutte decomposition plus tree-decomposition validity of b
    augmented with the virtual edges.

    (i) cut bags are 2-cuts of b, block bags induce cycles or 3-connected
    3-block graphs; (ii) every tree edge joins a cut bag and a block bag;
    (iii) a cut bag {x, y} is adjacent to exactly as many block bags as
    b - {x, y} has components (two for a plain 2-cut); (iv) a cut bag is
    adjacent to every block bag containing it.
    """
    from .treedec import validate
    bad: list[tuple[str, object]] = []
    for c in td3.cut_bags:
        if len(c) != 2 or is_connected(b, c):
            bad.append(("i", sorted(c)))
    for bi, w in enumerate(td3.block_bags):
        h = three_block_graph(td3, bi)
        ok = _is_cycle(h) if td3.kinds[bi] == CYCLE else (h.n >= 4 and is_l_connected(h, 3))
        if not ok:
            bad.append(("i", sorted(w)))
    nbrs: dict[int, set[int]] = defaultdict(set)
    for c, bi in td3.links:
        if not (0 <= c < len(td3.cut_bags) and 0 <= bi < len(td3.block_bags)):
            bad.append(("ii", (c, bi)))
        nbrs[c].add(bi)
    for c, cut in enumerate(td3.cut_bags):
        want = len(components(b, cut)) if cut <= b.vertex_set else 2
        if len(nbrs[c]) != want or want < 2:
            bad.append(("iii", sorted(cut)))
        holders = {bi for bi, w in enumerate(td3.block_bags) if cut < w}
        if holders != nbrs[c]:
            bad.append(("iv", sorted(cut)))
    aug = Graph(b.vertices, tuple(sorted(set(b.edges) | td3.virtual_edges)))
    td = td3.as_tree_decomposition()
    rep = validate(aug, td)
    bad.extend(rep.violations)
    if td3.cut_bags and rep.adhesion != 2:
        bad.append(("adhesion", rep.adhesion))
    return ValidationReport(not bad, width(td), adhesion(td), tuple(bad))


# --------------------------------------------------------------------------
# class preservation

@dataclass(frozen=True)
class BlockMeasurement:
    block: int
    vertices: tuple[int, ...]
    kind: str
    value: object
    ok: bool


@dataclass(frozen=True)
class ClassReport:
    prop: str
    bound: object
    blocks: tuple[BlockMeasurement, ...]

    @property
    def ok(self) -> bool:
        return all(b.ok for b in self.blocks)


def all_three_blocks(g: Graph) -> list[tuple[TutteDecomposition, int]]:
    """(Tutte decomposition, block index) for every 3-block of every
    2-connected block of g."""
    out = []
    bd = block_decomposition(g)
    for i, blk in enumerate(bd.blocks):
        if len(blk) < 3:
            continue
        td3 = tutte_decomposition(bd.block_graph(i))
        out.extend((td3, j) for j in range(len(td3.block_bags)))
    return out


def check_3block_class_preservation(g: Graph, prop: str, k: int | None = None) -> ClassReport:
    """Measure ``prop`` on every 3-block graph (with virtual edges).

    ``prop``: "outerplanarity" (index <= k, 3-connected blocks only; cycle
    blocks are listed with index 1), "planar", or "K4-minor-free".
    """
    from .minors import K4, has_minor
    from .planarity import outerplanarity_index
    if prop not in ("outerplanarity", "planar", "K4-minor-free"):
        raise ValueError(f"unknown property {prop!r}")
    if prop == "outerplanarity" and k is None:
        k = outerplanarity_index(g)
    rows = []
    for n, (td3, j) in enumerate(all_three_blocks(g)):
        h = three_block_graph(td3, j)
        kind = td3.kinds[j]
        if prop == "outerplanarity":
            val = 1 if kind == CYCLE else outerplanarity_index(h, exhaustive=True)
            ok = val <= k
        elif prop == "planar":
            hx = nx.Graph(list(h.edges))
            val = nx.check_planarity(hx)[0]
            ok = val
        else:
            val = not has_minor(h, K4)
            ok = val
        rows.append(BlockMeasurement(n, h.vertices, kind, val, ok))
    return ClassReport(prop, k, tuple(rows))


def w_paths(g: Graph, w: frozenset[int], limit: int = 10 ** 5) -> list[tuple[int, ...]]:
    """All W-paths of g with at least one internal vertex (by DFS)."""
    out: list[tuple[int, ...]] = []
    for s in sorted(w):
        stack = [(s, (s,))]
        while stack:
            x, path = stack.pop()
            for y in g.adj[x]:
                if y in path:
                    continue
                if y in w:
                    if len(path) >= 2 and y > s:
                        out.append(path + (y,))
                elif len(out) < limit:
                    stack.append((y, path + (y,)))
    return out


# --------------------------------------------------------------------------
# spanning sets

@dataclass(frozen=True)
class SpanningSets:
    s_edges: frozenset[tuple[int, int]]                     # oriented (child, parent)
    roots: Mapping[tuple[int, frozenset[int]], int]         # (block id, 3-block) -> root
    trees: Mapping[tuple[int, frozenset[int]], SpanningForest] = field(compare=False)
    added: frozenset[Edge] = frozenset()                    # F': cut edges added
    conflicts: tuple = ()

    @property
    def root_set(self) -> frozenset[int]:
        return frozenset(self.roots.values())


def derive_spanning_sets(g: Graph, t: SpanningForest,
                         td3s: Mapping[int, TutteDecomposition] | None = None) -> SpanningSets:
    """Carve a rooted spanning tree for every 3-connected 3-block out of the
    rooted global tree ``t``.

    Global tree edges inside the 3-block are kept with their orientation.
    Remaining components are joined by edges {x, y} of incident 2-cuts, each
    pointing from the top vertex of a not yet attached component into the
    part already reached from the block's root.  The root is the vertex of
    the 3-block closest to the global root.
    """
    if t.parent is None:
        raise NotRooted("global tree needs a parent map")
    bd = block_decomposition(g)
    if td3s is None:
        td3s = {i: tutte_decomposition(bd.block_graph(i))
                for i, blk in enumerate(bd.blocks) if len(blk) >= 3}
    s_edges: set[tuple[int, int]] = set()
    for e in t.tree_edges:
        u, v = e
        s_edges.add((u, v) if t.parent_of(u) == v else (v, u))
    roots: dict = {}
    trees: dict = {}
    added: set[Edge] = set()
    conflicts = []
    for bi, td3 in sorted(td3s.items()):
        for j, w in enumerate(td3.block_bags):
            if td3.kinds[j] != THREE_CONNECTED:
                continue
            h = three_block_graph(td3, j)
            inside = [e for e in t.tree_edges if e[0] in w and e[1] in w]
            dsu = _DSU(w)
            for e in inside:
                dsu.union(*e)
            top = {}
            for v in sorted(w, key=lambda x: (t.depth(x), x)):
                top.setdefault(dsu.find(v), v)
            root = min(w, key=lambda x: (t.depth(x), x))
            reached = {dsu.find(root)}
            par = {}
            for e in inside:
                u, v = e
                c, p = (u, v) if t.parent_of(u) == v else (v, u)
                par[c] = p
            cut_edges = [edge(*sorted(c)) for c in td3.cuts_of(j)]
            progress = True
            while progress and len(reached) < len(set(top)):
                progress = False
                for x, y in cut_edges:
                    for a, bb in ((x, y), (y, x)):
                        ca, cb = dsu.find(a), dsu.find(bb)
                        if ca not in reached and cb in reached and top[ca] == a:
                            par[a] = bb
                            reached.add(ca)
                            added.add(edge(a, bb))
                            s_edges.add((a, bb))
                            progress = True
            if len(reached) < len(set(top)):
                conflicts.append((bi, sorted(w)))
            key = (bi, w)
            roots[key] = root
            tedges = frozenset(edge(c, p) for c, p in par.items())
            tr = SpanningForest(h, tedges, root, dict(par))
            trees[key] = tr
    return SpanningSets(frozenset(s_edges), roots, trees, frozenset(added), tuple(conflicts))
