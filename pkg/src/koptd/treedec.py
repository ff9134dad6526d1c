"""Tree decompositions: data model, validation and three constructions.

* :func:`td_from_vr_er` -- one bag per vertex and per tree edge, each holding
  one endpoint of every fundamental cycle through it.
* :func:`td_from_er_fr` -- the vertex of degree d is replaced by a path of
  d-2 bags indexed by its incident edges, read in rotation order starting
  after a lowest-layer face; tree-edge bags hang off these paths.
* :func:`td_3connected_kop` -- the same skeleton for 3-connected graphs,
  rooted, with typed bags (sigma for tree edges, sigma_H/sigma_T for the
  per-vertex path bags) and maximum node degree 3.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import NotThreeConnected, OuterFaceForbidden, UnknownVertex
from .graph import (Edge, Graph, SpanningForest, edge, fundamental_cycle,
                    is_connected, is_l_connected, root_orient)
from .planarity import (Face, PlanarEmbedding, face_layer_numbers,
                        lowest_layer_face, require_embedding)

# bag kinds
SIGMA, SIGMA_H, SIGMA_T = "sigma", "sigma_H", "sigma_T"
VERTEX_BAG, EDGE_BAG, PATH_BAG = "vertex-bag", "edge-bag", "path-bag"
CUT, BLOCK, CYC = "cut", "block", "cyc"


@dataclass(frozen=True)
class Label:
    kind: str
    witness: object = None   # vertex, edge or (vertex, edge)


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree_edges: frozenset[tuple[int, int]]
    parent: Mapping[int, int] | None = field(default=None, compare=False)
    labels: Mapping[int, Label] | None = field(default=None, compare=False)

    @property
    def nodes(self) -> range:
        return range(len(self.bags))

    def neighbours(self) -> dict[int, list[int]]:
        nb: dict[int, list[int]] = {i: [] for i in self.nodes}
        for a, b in sorted(self.tree_edges):
            nb[a].append(b)
            nb[b].append(a)
        return nb

    def root(self) -> int | None:
        if self.parent is None:
            return None
        roots = [i for i in self.nodes if i not in self.parent]
        return roots[0] if len(roots) == 1 else None

    def max_degree(self) -> int:
        return max((len(v) for v in self.neighbours().values()), default=0)


def width(td: TreeDecomposition) -> int:
    return max((len(b) for b in td.bags), default=0) - 1


def adhesion(td: TreeDecomposition) -> int:
    return max((len(td.bags[a] & td.bags[b]) for a, b in td.tree_edges), default=0)


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    width: int
    adhesion: int
    violations: tuple[tuple[str, object], ...] = ()

    def as_dict(self) -> dict:
        return {"valid": self.valid, "width": self.width, "adhesion": self.adhesion,
                "violations": [[a, repr(w)] for a, w in self.violations]}


def _is_tree(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    edges = list(edges)
    if n == 0:
        return not edges
    if len(edges) != n - 1:
        return False
    nb: dict[int, list[int]] = {i: [] for i in range(n)}
    for a, b in edges:
        if a not in nb or b not in nb or a == b:
            return False
        nb[a].append(b)
        nb[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in nb[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == n


def validate(g: Graph, td: TreeDecomposition) -> ValidationReport:
    """Check the three axioms, tree shape and (if present) the parent map.

    Axiom (i): every vertex in a bag; (ii): every edge inside a bag;
    (iii): the bags containing a vertex induce a connected subtree.
    """
    bad: list[tuple[str, object]] = []
    if not _is_tree(len(td.bags), td.tree_edges):
        bad.append(("tree", sorted(td.tree_edges)))
    holders: dict[int, list[int]] = {v: [] for v in g.vertices}
    for i, bag in enumerate(td.bags):
        for v in bag:
            if v not in holders:
                bad.append(("bag", (i, v)))
            else:
                holders[v].append(i)
    for v in g.vertices:
        if not holders[v]:
            bad.append(("i", v))
    for u, v in g.edges:
        if not any(u in td.bags[i] for i in holders[v]):
            bad.append(("ii", (u, v)))
    nb = td.neighbours()
    for v in g.vertices:
        hs = set(holders[v])
        if not hs:
            continue
        start = min(hs)
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in nb[x]:
                if y in hs and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != hs:
            bad.append(("iii", v))
    if td.parent is not None:
        pairs = {tuple(sorted((c, p))) for c, p in td.parent.items()}
        roots = [i for i in td.nodes if i not in td.parent]
        if pairs != {tuple(sorted(e)) for e in td.tree_edges} or len(roots) != 1:
            bad.append(("parent", roots))
    return ValidationReport(not bad, width(td), adhesion(td), tuple(bad))


def orient_from(td: TreeDecomposition, root: int) -> dict[int, int]:
    nb = td.neighbours()
    parent: dict[int, int] = {}
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in nb[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                queue.append(y)
    return parent


# --------------------------------------------------------------------------
# endpoint choice

def degeneracy_coloring(g: Graph) -> dict[int, int]:
    """Greedy proper coloring in reverse degeneracy order (smallest-last)."""
    deg = {v: g.degree(v) for v in g.vertices}
    removed: set[int] = set()
    order = []
    while len(order) < g.n:
        v = min((x for x in g.vertices if x not in removed), key=lambda x: (deg[x], x))
        order.append(v)
        removed.add(v)
        for w in g.adj[v]:
            if w not in removed:
                deg[w] -= 1
    color: dict[int, int] = {}
    for v in reversed(order):
        used = {color[w] for w in g.adj[v] if w in color}
        color[v] = next(c for c in range(g.n + 1) if c not in used)
    return color


def endpoint_rule(g: Graph, coloring: Mapping[int, int] | None = None) -> dict[Edge, int]:
    """The endpoint representing each edge: smaller color, then smaller id."""
    if coloring is None:
        coloring = degeneracy_coloring(g)
    return {e: min(e, key=lambda x: (coloring[x], x)) for e in g.edges}


@dataclass
class _Cycles:
    g: Graph
    t: SpanningForest
    rep: dict[Edge, int]

    def __post_init__(self):
        self.cyc = {e: fundamental_cycle(self.g, self.t, e) for e in self.t.non_tree_edges}

    def through_vertex(self, v: int) -> list[Edge]:
        return [e for e, (vs, _) in self.cyc.items() if v in vs]

    def through_edge(self, f: Edge) -> list[Edge]:
        return [e for e, (_, es) in self.cyc.items() if f in es and f != e]

    def touching(self, boundary: frozenset[Edge], v: int | None = None) -> list[Edge]:
        return [e for e, (vs, es) in self.cyc.items()
                if es & boundary and (v is None or v in vs)]


# --------------------------------------------------------------------------
# construction 1

def td_from_vr_er(g: Graph, t: SpanningForest, coloring: Mapping[int, int] | None = None) -> TreeDecomposition:
    """Vertex bags and tree-edge bags; the tree is T subdivided at every edge.

    Rooted at t's root (or the minimum vertex): a vertex bag is the parent of
    the bags of the tree edges to its children.
    """
    cyc = _Cycles(g, t, endpoint_rule(g, coloring))
    if t.parent is None:
        t = root_orient(t, min(g.vertices)) if g.n else t
    bags: list[frozenset[int]] = []
    labels: dict[int, Label] = {}
    vid: dict[int, int] = {}
    for v in g.vertices:
        vid[v] = len(bags)
        labels[len(bags)] = Label(VERTEX_BAG, v)
        bags.append(frozenset({v} | {cyc.rep[e] for e in cyc.through_vertex(v)}))
    tedges = set()
    parent: dict[int, int] = {}
    for e in sorted(t.tree_edges):
        i = len(bags)
        labels[i] = Label(EDGE_BAG, e)
        bags.append(frozenset(set(e) | {cyc.rep[f] for f in cyc.through_edge(e)}))
        child = e[0] if t.parent_of(e[0]) == e[1] else e[1]
        par = e[1] if child == e[0] else e[0]
        tedges.add((vid[par], i))
        tedges.add((vid[child], i))
        parent[i] = vid[par]
        parent[vid[child]] = i
    _join_forest(bags, tedges, parent, labels)
    return TreeDecomposition(tuple(bags), frozenset(tedges), parent, labels)


def _join_forest(bags, tedges, parent, labels) -> None:
    """Link the roots of a decomposition forest into one tree (disconnected hosts)."""
    roots = [i for i in range(len(bags)) if i not in parent]
    for r in roots[1:]:
        tedges.add((roots[0], r))
        parent[r] = roots[0]


# --------------------------------------------------------------------------
# per-vertex rotation from a lowest-layer face

@dataclass(frozen=True)
class VertexFrame:
    """Edges at v in rotation order e_1..e_d, with f_1 between e_d and e_1.

    ``faces[j]`` is f_{j+1}, the face between e_j and e_{j+1} (1-based in the
    docstrings, 0-based here): faces[0] = f_1, and edge e_i (index i-1) has
    the faces faces[i-1] and faces[i % d].
    """
    v: int
    edges: tuple[Edge, ...]
    faces: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.edges)

    def slot(self, i: int) -> int:
        """Path position (0-based among the d-2 path bags) serving edge index i."""
        if self.d <= 2:
            return 0
        return min(max(i, 1), self.d - 2) - 1

    def edge_faces(self, i: int) -> tuple[int, int]:
        return self.faces[i], self.faces[(i + 1) % self.d]


def vertex_frame(emb: PlanarEmbedding, v: int, layer_numbers=None,
                 incoming: Edge | None = None) -> VertexFrame:
    rot = emb.rotation[v]
    d = len(rot)
    if d == 0:
        return VertexFrame(v, (), ())
    f1 = lowest_layer_face(emb, v, incoming, layer_numbers).id
    sectors = emb.sector_faces(v)      # sectors[s] lies between rot[s] and rot[s+1]
    s = sectors.index(f1)
    order = [rot[(s + 1 + j) % d] for j in range(d)]
    # face between order[j-1] and order[j] is the sector ending at order[j]
    faces = tuple(sectors[(s + j) % d] for j in range(d))
    return VertexFrame(v, tuple(edge(v, w) for w in order), faces)


def cycle_endpoint_set(g: Graph, t: SpanningForest, emb: PlanarEmbedding, f: Face | int,
                       v: int | None = None, rep: Mapping[Edge, int] | None = None) -> frozenset[int]:
    """One endpoint of each non-tree edge whose cycle shares an edge with bd(f)
    (and, if ``v`` is given, passes through v)."""
    fc = emb.faces[f] if isinstance(f, int) else f
    if fc.id == emb.outer_face:
        raise OuterFaceForbidden("C(f) is not bounded for the outer face")
    cyc = _Cycles(g, t, rep if rep is not None else endpoint_rule(g))
    return frozenset(cyc.rep[e] for e in cyc.touching(fc.boundary_edges, v))


def _path_bags(cyc: _Cycles, emb: PlanarEmbedding, fr: VertexFrame, scheme: str) -> list[set[int]]:
    """Contents (without v) of the d-2 path bags of ``fr.v``.

    ``scheme``:
      "face"   -- C(f_1) u C(f_i) u C(f_{i+1}) with the global C-sets;
      "vface"  -- the same with C(v, f): cycles through v only;
      "span"   -- cycles through v whose two edges at v enclose the slot;
      "both"   -- union of "vface" and "span".
    """
    v = fr.v
    nb = max(fr.d - 2, 1)
    out: list[set[int]] = [set() for _ in range(nb)]
    if scheme in ("face", "vface", "both"):
        scope = v if scheme != "face" else None
        cset = {}
        for f in set(fr.faces):
            if f == emb.outer_face and scheme == "face":
                cset[f] = [cyc.rep[e] for e in cyc.touching(emb.faces[f].boundary_edges, None)]
            else:
                cset[f] = [cyc.rep[e] for e in cyc.touching(emb.faces[f].boundary_edges, scope)]
        for p in range(nb):
            i = p + 1        # edge index served by path bag p
            fs = {fr.faces[0]} | set(fr.edge_faces(i)) if fr.d > 2 else set(fr.faces)
            for f in fs:
                out[p].update(cset[f])
    if scheme in ("span", "both"):
        pos = {e: i for i, e in enumerate(fr.edges)}
        for e in cyc.through_vertex(v):
            _, es = cyc.cyc[e]
            a, b = sorted(pos[x] for x in es if v in x)
            for p in range(fr.slot(a), fr.slot(b) + 1):
                out[p].add(cyc.rep[e])
    return out


DEFAULT_SCHEME = "span"  # the only scheme that is valid on every host tried


def td_from_er_fr(g: Graph, t: SpanningForest, emb: PlanarEmbedding,
                  coloring: Mapping[int, int] | None = None,
                  scheme: str = DEFAULT_SCHEME) -> TreeDecomposition:
    """Per-vertex bag paths plus tree-edge bags.

    Every vertex v of degree d gets bags B_2..B_{d-1} (one bag if d <= 2),
    B_i serving the edge e_i (B_2 also e_1, B_{d-1} also e_d).  A tree edge
    bag holds both endpoints and one endpoint of each cycle through the edge,
    and is joined to the serving bag at each endpoint.
    """
    cyc = _Cycles(g, t, endpoint_rule(g, coloring))
    ln = face_layer_numbers(emb)
    bags: list[frozenset[int]] = []
    labels: dict[int, Label] = {}
    tedges: set[tuple[int, int]] = set()
    serve: dict[tuple[int, Edge], int] = {}
    for v in g.vertices:
        fr = vertex_frame(emb, v, ln)
        contents = _path_bags(cyc, emb, fr, scheme)
        ids = []
        for p, c in enumerate(contents):
            ids.append(len(bags))
            labels[len(bags)] = Label(PATH_BAG, (v, fr.edges[p + 1] if fr.d > 2 else None))
            bags.append(frozenset(c | {v}))
        tedges.update(zip(ids, ids[1:]))
        for i, e in enumerate(fr.edges):
            serve[(v, e)] = ids[fr.slot(i)]
    for e in sorted(t.tree_edges):
        i = len(bags)
        labels[i] = Label(EDGE_BAG, e)
        bags.append(frozenset(set(e) | {cyc.rep[f] for f in cyc.through_edge(e)}))
        tedges.add((serve[(e[0], e)], i))
        tedges.add((serve[(e[1], e)], i))
    if len(tedges) < len(bags) - 1:
        # disconnected host: one tree per component, chained together
        parent = _forest_parent(len(bags), tedges)
        _join_forest(bags, tedges, parent, labels)
    return TreeDecomposition(tuple(bags), frozenset(tedges), None, labels)


def _forest_parent(n: int, tedges) -> dict[int, int]:
    nb: dict[int, list[int]] = {i: [] for i in range(n)}
    for a, b in tedges:
        nb[a].append(b)
        nb[b].append(a)
    parent: dict[int, int] = {}
    seen: set[int] = set()
    for r in range(n):
        if r in seen:
            continue
        seen.add(r)
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for y in nb[x]:
                if y not in seen:
                    seen.add(y)
                    parent[y] = x
                    queue.append(y)
    return parent


# --------------------------------------------------------------------------
# construction 3: 3-connected hosts

@dataclass(frozen=True)
class KopResult:
    td: TreeDecomposition
    tree: SpanningForest
    k: int
    er: int
    fr: int

    @property
    def bound(self) -> int:
        """3k when the tree meets er <= 2k and fr <= k, else max{er+1, 3fr}."""
        if self.er <= 2 * self.k and self.fr <= self.k:
            return 3 * self.k
        return max(self.er + 1, 3 * self.fr)


def edge_orientation(t: SpanningForest, e: Edge) -> tuple[int, int]:
    """(tail, head): tree edges point from child to parent, other edges from
    the smaller to the larger id."""
    if e in t.tree_edges:
        u, v = e
        return (u, v) if t.parent_of(u) == v else (v, u)
    return e


def td_3connected_kop(g: Graph, k: int | None = None, t: SpanningForest | None = None,
                      emb: PlanarEmbedding | None = None,
                      coloring: Mapping[int, int] | None = None) -> KopResult:
    """Rooted decomposition of a 3-connected planar graph with node degree <= 3.

    Bags: sigma(e) for each tree edge e; for each vertex v and each edge e_i
    at v other than the two anchors bounding the chosen lowest-layer face,
    one bag typed sigma_H (v is the head of e_i) or sigma_T (v is the tail).
    The anchors' sigma bags attach to the neighbouring path bag.  The root is
    the first path bag of the tree root.
    """
    from .planarity import best_outer_face, outerplanarity_index
    from .remember import remember_report, synthesize_spanning_tree
    if g.n < 4 or not is_connected(g) or not is_l_connected(g, 3):
        raise NotThreeConnected("graph is not 3-connected")
    if emb is None:
        emb = best_outer_face(require_embedding(g))
    if k is None:
        k = outerplanarity_index(g, emb, exhaustive=g.n <= 12)
    if t is None:
        t, _ = synthesize_spanning_tree(g, k, emb)
    if t.parent is None:
        t = root_orient(t, min(g.vertices))
    r = t.root if t.root is not None else min(g.vertices)
    rep = remember_report(g, t, emb)
    cyc = _Cycles(g, t, endpoint_rule(g, coloring if coloring is not None else degeneracy_coloring(g)))
    ln = face_layer_numbers(emb)
    bags: list[frozenset[int]] = []
    labels: dict[int, Label] = {}
    tedges: set[tuple[int, int]] = set()
    serve: dict[tuple[int, Edge], int] = {}
    root_bag = None
    for v in g.vertices:
        p = t.parent_of(v)
        incoming = edge(v, p) if p is not None else None
        fr = vertex_frame(emb, v, ln, incoming)
        contents = _path_bags(cyc, emb, fr, "span")
        ids = []
        for slot, c in enumerate(contents):
            e_i = fr.edges[slot + 1]
            tail, head = edge_orientation(t, e_i)
            ids.append(len(bags))
            labels[len(bags)] = Label(SIGMA_H if v == head else SIGMA_T, (v, e_i))
            bags.append(frozenset(c | {v}))
        tedges.update(zip(ids, ids[1:]))
        for i, e in enumerate(fr.edges):
            serve[(v, e)] = ids[fr.slot(i)]
        if v == r:
            root_bag = ids[0]
    for e in sorted(t.tree_edges):
        i = len(bags)
        labels[i] = Label(SIGMA, e)
        bags.append(frozenset(set(e) | {cyc.rep[f] for f in cyc.through_edge(e)}))
        tedges.add((serve[(e[0], e)], i))
        tedges.add((serve[(e[1], e)], i))
    td = TreeDecomposition(tuple(bags), frozenset(tedges), None, labels)
    td = TreeDecomposition(td.bags, td.tree_edges, orient_from(td, root_bag), labels)
    return KopResult(td, t, k, rep.er, rep.fr)
