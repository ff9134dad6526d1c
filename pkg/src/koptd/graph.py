"""Simple undirected graphs, cuts, spanning forests and fundamental cycles.

Vertices are integers and edges are stored canonically as ``(u, v)`` with
``u < v``.  Every iteration in this module runs in ascending vertex/edge order
so that all results are reproducible.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (CrossComponent, Disconnected, DuplicateEdge, EdgeInForest,
                     SelfLoop, UnknownEndpoint, UnknownVertex)

Edge = tuple[int, int]


def edge(u: int, v: int) -> Edge:
    """Canonical form of the undirected edge {u, v}."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    @cached_property
    def adj(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return edge(u, v) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def incident(self, v: int) -> list[Edge]:
        return [edge(v, w) for w in self.adj[v]]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, edges={list(self.edges)})"


def build_graph(vertex_ids: Iterable[int], edge_pairs: Iterable[Sequence[int]]) -> Graph:
    verts = sorted(set(int(v) for v in vertex_ids))
    vset = set(verts)
    seen: set[Edge] = set()
    for pair in edge_pairs:
        u, v = (int(x) for x in pair)
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if u not in vset or v not in vset:
            raise UnknownEndpoint(f"edge ({u}, {v}) has an undeclared endpoint")
        e = edge(u, v)
        if e in seen:
            raise DuplicateEdge(f"duplicate edge {e}")
        seen.add(e)
    return Graph(tuple(verts), tuple(sorted(seen)))


def from_edges(edge_pairs: Iterable[Sequence[int]], vertices: Iterable[int] = ()) -> Graph:
    """Build a graph whose vertex set is ``vertices`` plus all edge endpoints."""
    pairs = [tuple(p) for p in edge_pairs]
    verts = set(vertices)
    for u, v in pairs:
        verts.update((u, v))
    return build_graph(verts, pairs)


def induced_subgraph(g: Graph, w: Iterable[int]) -> Graph:
    ws = set(w)
    missing = ws - g.vertex_set
    if missing:
        raise UnknownVertex(f"vertices {sorted(missing)} not in graph")
    return Graph(tuple(sorted(ws)),
                 tuple(e for e in g.edges if e[0] in ws and e[1] in ws))


def components(g: Graph, removed: Iterable[int] = ()) -> list[frozenset[int]]:
    """Connected components of ``g`` minus ``removed``, ordered by minimum vertex."""
    gone = set(removed)
    seen: set[int] = set(gone)
    out = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        out.append(frozenset(comp))
    return out


def is_connected(g: Graph, removed: Iterable[int] = ()) -> bool:
    # Empty and single-vertex remainders count as connected.
    return len(components(g, removed)) <= 1


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise Disconnected("graph is not connected")


def enumerate_cuts(g: Graph, l: int) -> list[frozenset[int]]:
    """All vertex sets of size exactly ``l`` whose removal disconnects ``g``."""
    _require_connected(g)
    return [frozenset(c) for c in combinations(g.vertices, l)
            if not is_connected(g, c)]


def is_l_connected(g: Graph, l: int) -> bool:
    """True iff ``g`` has no cut of size at most ``l - 1``.

    Complete graphs have no cuts at all, so K4 is 3-connected (and K3 is too).
    """
    _require_connected(g)
    if l < 1:
        raise ValueError("l must be positive")
    for j in range(1, l):
        for c in combinations(g.vertices, j):
            if not is_connected(g, c):
                return False
    return True


def articulation_points(g: Graph) -> list[int]:
    base = len(components(g))
    return [v for v in g.vertices if len(components(g, (v,))) > base]


# --------------------------------------------------------------------------
# spanning forests

@dataclass(frozen=True)
class SpanningForest:
    host: Graph
    tree_edges: frozenset[Edge]
    root: int | None = None
    parent: Mapping[int, int] | None = field(default=None, compare=False)

    @cached_property
    def tree_adj(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in self.host.vertices}
        for u, v in self.tree_edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in nbrs.items()}

    @cached_property
    def non_tree_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.host.edges if e not in self.tree_edges)

    @cached_property
    def component_of(self) -> dict[int, int]:
        """Map each vertex to the minimum vertex of its tree."""
        comp: dict[int, int] = {}
        for s in self.host.vertices:
            if s in comp:
                continue
            comp[s] = s
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self.tree_adj[x]:
                    if y not in comp:
                        comp[y] = s
                        stack.append(y)
        return comp

    @cached_property
    def _rooted(self) -> tuple[dict[int, int | None], dict[int, int]]:
        """Parent pointers and depths, using ``parent`` if set else min-id roots."""
        par: dict[int, int | None] = {}
        depth: dict[int, int] = {}
        if self.parent is not None:
            roots = [v for v in self.host.vertices if v not in self.parent]
        else:
            roots = sorted(set(self.component_of.values()))
        for r in roots:
            par[r] = None
            depth[r] = 0
            queue = deque([r])
            while queue:
                x = queue.popleft()
                for y in self.tree_adj[x]:
                    if y not in depth:
                        par[y] = x
                        depth[y] = depth[x] + 1
                        queue.append(y)
        return par, depth

    def parent_of(self, v: int) -> int | None:
        return self._rooted[0][v]

    def depth(self, v: int) -> int:
        return self._rooted[1][v]

    def children(self, v: int) -> list[int]:
        return [w for w in self.tree_adj[v] if self.parent_of(w) == v]

    def __repr__(self) -> str:
        return f"SpanningForest(root={self.root}, tree_edges={sorted(self.tree_edges)})"


class _DSU:
    def __init__(self, items: Iterable[int]):
        self.p = {x: x for x in items}

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[max(ra, rb)] = min(ra, rb)
        return True


def spanning_forest(g: Graph, edge_priority: Sequence[Sequence[int]] | None = None) -> SpanningForest:
    """Greedy maximal spanning forest.

    Edges listed in ``edge_priority`` are tried first, in that order; the
    remaining edges follow in canonical order.
    """
    order: list[Edge] = []
    if edge_priority is not None:
        for p in edge_priority:
            e = edge(*p)
            if e in g.edge_set and e not in order:
                order.append(e)
    listed = set(order)
    order.extend(e for e in g.edges if e not in listed)
    dsu = _DSU(g.vertices)
    chosen = [e for e in order if dsu.union(*e)]
    return SpanningForest(g, frozenset(chosen))


def forest_from_edges(g: Graph, tree_edges: Iterable[Sequence[int]], root: int | None = None) -> SpanningForest:
    t = SpanningForest(g, frozenset(edge(*e) for e in tree_edges))
    return root_orient(t, root) if root is not None else t


def is_spanning_forest(t: SpanningForest) -> bool:
    g = t.host
    dsu = _DSU(g.vertices)
    for e in t.tree_edges:
        if e not in g.edge_set or not dsu.union(*e):
            return False
    return len(t.tree_edges) == g.n - len(components(g))


def root_orient(t: SpanningForest, r: int) -> SpanningForest:
    """Return ``t`` with an explicit parent map, rooted at ``r``.

    Components not containing ``r`` are rooted at their minimum vertex.
    """
    g = t.host
    if r not in g.vertex_set:
        raise UnknownVertex(f"root {r} not in graph")
    parent: dict[int, int] = {}
    seen = set()
    roots = [r] + sorted(set(t.component_of.values()) - {t.component_of[r]})
    for s in roots:
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in t.tree_adj[x]:
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    queue.append(y)
    return SpanningForest(g, t.tree_edges, r, parent)


def tree_path(t: SpanningForest, x: int, y: int) -> list[Edge]:
    """Edges of the unique forest path from ``x`` to ``y``, in walking order."""
    if t.component_of[x] != t.component_of[y]:
        raise CrossComponent(f"{x} and {y} lie in different trees")
    if x == y:
        return []
    # climb to the lowest common ancestor from both ends
    par, depth = t._rooted
    a, b = x, y
    left, right = [x], [y]
    while depth[a] > depth[b]:
        a = par[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = par[b]
        right.append(b)
    while a != b:
        a, b = par[a], par[b]
        left.append(a)
        right.append(b)
    walk = left + right[-2::-1]
    return [edge(p, q) for p, q in zip(walk, walk[1:])]


def tree_path_vertices(t: SpanningForest, x: int, y: int) -> list[int]:
    path = tree_path(t, x, y)
    verts = [x]
    for a, b in path:
        verts.append(b if a == verts[-1] else a)
    return verts


def fundamental_cycle(g: Graph, t: SpanningForest, e: Sequence[int]) -> tuple[frozenset[int], frozenset[Edge]]:
    ce = edge(*e)
    if ce not in g.edge_set:
        raise UnknownEndpoint(f"{ce} is not an edge of the graph")
    if ce in t.tree_edges:
        raise EdgeInForest(f"{ce} is a tree edge")
    path = tree_path(t, ce[0], ce[1])
    edges = frozenset(path) | {ce}
    verts = frozenset(v for p in edges for v in p)
    return verts, edges
