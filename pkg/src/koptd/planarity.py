"""Planar embeddings as rotation systems.

Faces, face layer numbers, stripping layers, the outerplanarity index,
non-separating induced cycles, face adjacency of edges and the rotational
ordering of the edges around a vertex.

An embedding stores, for every vertex, its neighbours in clockwise order.
Faces are traced with the rule "arrive at ``v`` from ``u``, leave towards the
clockwise successor of ``u`` at ``v``", so the face containing dart ``(u, v)``
occupies the angular sector at ``v`` between ``u`` and its successor.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import (NoCommonVertex, NotAPartition, NotFaceAdjacentAnchors,
                     NotPlanar, NotThreeConnected, UnknownVertex)
from .graph import (Edge, Graph, components, edge, induced_subgraph,
                    is_connected, is_l_connected)
from .minors import is_outerplanar

EXHAUSTIVE_OUTER_FACE_LIMIT = 12


@dataclass(frozen=True)
class Face:
    id: int
    walk: tuple[int, ...]
    boundary_edges: frozenset[Edge]
    boundary_vertices: frozenset[int]

    def __len__(self) -> int:
        return len(self.walk)


@dataclass(frozen=True)
class PlanarEmbedding:
    host: Graph
    rotation: Mapping[int, tuple[int, ...]] = field(compare=False)
    outer_face: int = 0

    @cached_property
    def _traced(self) -> tuple[tuple[Face, ...], dict[tuple[int, int], int]]:
        rot = self.rotation
        pos = {v: {w: i for i, w in enumerate(ns)} for v, ns in rot.items()}
        walks = []
        seen: set[tuple[int, int]] = set()
        for u in self.host.vertices:
            for v in rot[u]:
                if (u, v) in seen:
                    continue
                darts = []
                a, b = u, v
                while (a, b) not in seen:
                    seen.add((a, b))
                    darts.append((a, b))
                    nb = rot[b]
                    a, b = b, nb[(pos[b][a] + 1) % len(nb)]
                walks.append(darts)
        for v in self.host.vertices:
            if not rot[v]:
                walks.append([(v, v)])
        walks.sort(key=lambda ds: _canonical_walk(ds))
        faces = []
        dart_face: dict[tuple[int, int], int] = {}
        for i, darts in enumerate(walks):
            if darts[0][0] == darts[0][1]:
                faces.append(Face(i, (darts[0][0],), frozenset(), frozenset(darts[0][:1])))
                continue
            for d in darts:
                dart_face[d] = i
            faces.append(Face(i, tuple(a for a, _ in _rotate_min(darts)),
                              frozenset(edge(a, b) for a, b in darts),
                              frozenset(a for a, _ in darts)))
        return tuple(faces), dart_face

    @property
    def faces(self) -> tuple[Face, ...]:
        return self._traced[0]

    @property
    def dart_face(self) -> dict[tuple[int, int], int]:
        return self._traced[1]

    def with_outer_face(self, face_id: int) -> "PlanarEmbedding":
        emb = PlanarEmbedding(self.host, self.rotation, face_id)
        emb.__dict__["_traced"] = self._traced
        return emb

    def sector_faces(self, v: int) -> list[int]:
        """Face ids around ``v``: entry ``i`` lies between rotation[v][i] and rotation[v][i+1]."""
        return [self.dart_face[(w, v)] for w in self.rotation[v]]

    def edge_faces(self, e: Edge) -> tuple[int, int]:
        u, v = e
        return self.dart_face[(u, v)], self.dart_face[(v, u)]

    @cached_property
    def faces_at(self) -> dict[int, frozenset[int]]:
        out: dict[int, set[int]] = {v: set() for v in self.host.vertices}
        for f in self.faces:
            for v in f.boundary_vertices:
                out[v].add(f.id)
        return {v: frozenset(s) for v, s in out.items()}

    def is_valid(self) -> bool:
        """Euler check per connected host: n - m + f = 2."""
        g = self.host
        if not is_connected(g):
            return len(self.faces) == g.m - g.n + 2 * len(components(g))
        return g.n - g.m + len(self.faces) == 2


def _rotate_min(darts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    i = min(range(len(darts)), key=lambda j: darts[j])
    return darts[i:] + darts[:i]


def _canonical_walk(darts: list[tuple[int, int]]) -> tuple:
    return tuple(_rotate_min(darts))


@dataclass(frozen=True)
class NonPlanar:
    """Result of ``embed`` for a nonplanar graph; carries a Kuratowski witness."""
    host: Graph
    witness_edges: tuple[Edge, ...]

    def __bool__(self) -> bool:
        return False


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def embed(g: Graph, rotation_hint: Mapping[int, Sequence[int]] | None = None) -> PlanarEmbedding | NonPlanar:
    """Planar embedding of ``g`` or a ``NonPlanar`` witness.

    A supplied rotation hint is used verbatim if it passes the Euler check.
    The outer face defaults to the longest face (ties: lexicographically
    largest boundary vertex tuple).
    """
    if rotation_hint is not None:
        rot = {v: tuple(rotation_hint.get(v, ())) for v in g.vertices}
        if all(sorted(rot[v]) == list(g.adj[v]) for v in g.vertices):
            emb = PlanarEmbedding(g, rot, 0)
            if emb.is_valid():
                return emb.with_outer_face(default_outer_face(emb))
    if g.n > 3 and is_outerplanar(g):
        return _apex_embedding(g)
    ok, cert = nx.check_planarity(_to_nx(g), counterexample=True)
    if not ok:
        return NonPlanar(g, tuple(sorted(edge(a, b) for a, b in cert.edges())))
    rot = {v: tuple(cert.neighbors_cw_order(v)) for v in g.vertices}
    emb = PlanarEmbedding(g, rot, 0)
    return emb.with_outer_face(default_outer_face(emb))


def _apex_embedding(g: Graph) -> PlanarEmbedding:
    """Embedding of an outerplanar graph with every vertex on one face.

    Embed g plus an apex joined to all vertices and delete the apex: the
    faces around it merge into a face through every vertex, which becomes
    the outer face (for a connected g; otherwise one such face per component).
    """
    h = _to_nx(g)
    apex = max(g.vertices) + 1
    h.add_edges_from((apex, v) for v in g.vertices)
    ok, cert = nx.check_planarity(h)
    assert ok
    rot = {v: tuple(w for w in cert.neighbors_cw_order(v) if w != apex) for v in g.vertices}
    emb = PlanarEmbedding(g, rot, 0)
    full = [f for f in emb.faces if f.boundary_vertices == g.vertex_set]
    fid = max(full, key=_face_preference).id if full else default_outer_face(emb)
    return emb.with_outer_face(fid)


def require_embedding(g: Graph, rotation_hint=None) -> PlanarEmbedding:
    emb = embed(g, rotation_hint)
    if isinstance(emb, NonPlanar):
        raise NotPlanar("graph is not planar")
    return emb


def _face_preference(f: Face) -> tuple:
    return (len(f.walk), tuple(sorted(f.boundary_vertices)))


def default_outer_face(emb: PlanarEmbedding) -> int:
    return max(emb.faces, key=_face_preference).id


def faces(emb: PlanarEmbedding) -> tuple[Face, ...]:
    return emb.faces


# --------------------------------------------------------------------------
# layers

def _radial_distances(emb: PlanarEmbedding) -> tuple[dict[int, int], dict[int, int]]:
    """BFS in the vertex-face incidence graph from the outer face."""
    fdist = {emb.outer_face: 0}
    vdist: dict[int, int] = {}
    queue = deque([("f", emb.outer_face)])
    fv = {f.id: sorted(f.boundary_vertices) for f in emb.faces}
    while queue:
        kind, x = queue.popleft()
        if kind == "f":
            for v in fv[x]:
                if v not in vdist:
                    vdist[v] = fdist[x] + 1
                    queue.append(("v", v))
        else:
            for f in sorted(emb.faces_at[x]):
                if f not in fdist:
                    fdist[f] = vdist[x] + 1
                    queue.append(("f", f))
    return fdist, vdist


def face_layer_numbers(emb: PlanarEmbedding) -> dict[int, int]:
    """Outer face gets 0; every other face is one more than its lowest
    vertex-sharing neighbour face."""
    fdist, _ = _radial_distances(emb)
    return {f: d // 2 for f, d in fdist.items()}


def vertex_layers(emb: PlanarEmbedding) -> dict[int, int]:
    """1-based stripping layer of each vertex under ``emb``'s outer face."""
    _, vdist = _radial_distances(emb)
    return {v: (d + 1) // 2 for v, d in vdist.items()}


@dataclass(frozen=True)
class LayerPartition:
    layers: tuple[frozenset[int], ...]
    outer_face: int | None = None

    @property
    def k(self) -> int:
        return len(self.layers)

    def layer_of(self) -> dict[int, int]:
        return {v: i + 1 for i, layer in enumerate(self.layers) for v in layer}


def _partition_for(emb: PlanarEmbedding) -> LayerPartition:
    vl = vertex_layers(emb)
    k = max(vl.values(), default=0)
    return LayerPartition(tuple(frozenset(v for v, l in vl.items() if l == i)
                                for i in range(1, k + 1)), emb.outer_face)


def best_outer_face(emb: PlanarEmbedding, exhaustive: bool | None = None) -> PlanarEmbedding:
    """Re-root ``emb`` at the face giving the fewest stripping layers.

    Ties prefer longer faces, then the lexicographically largest boundary.
    Without exhaustive search the longest face is used.
    """
    if exhaustive is None:
        exhaustive = emb.host.n <= EXHAUSTIVE_OUTER_FACE_LIMIT
    if not exhaustive:
        return emb.with_outer_face(default_outer_face(emb))
    best = None
    for f in emb.faces:
        cand = emb.with_outer_face(f.id)
        key = (_partition_for(cand).k, tuple(-x for x in (len(f.walk),)),
               tuple(-v for v in sorted(f.boundary_vertices)))
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def stripping_layers(g: Graph, emb: PlanarEmbedding | None = None,
                     exhaustive: bool | None = None) -> LayerPartition:
    """Partition into stripping layers.

    With ``emb`` given its outer face is used as is; otherwise an embedding is
    computed and the outer face chosen by :func:`best_outer_face`.
    """
    if emb is None:
        emb = best_outer_face(require_embedding(g), exhaustive)
    return _partition_for(emb)


def outerplanarity_index(g: Graph, emb: PlanarEmbedding | None = None,
                         exhaustive: bool = True) -> int:
    if g.n == 0:
        return 0
    if emb is None:
        emb = require_embedding(g)
    return _partition_for(best_outer_face(emb, exhaustive)).k


def check_layer_characterization(g: Graph, p: LayerPartition) -> bool:
    seen: set[int] = set()
    for layer in p.layers:
        if not layer or seen & layer:
            raise NotAPartition("layers must be non-empty and disjoint")
        seen |= layer
    if seen != g.vertex_set:
        raise NotAPartition("layers do not cover the vertex set")
    for layer in p.layers:
        if not is_outerplanar(induced_subgraph(g, layer)):
            return False
    where = p.layer_of()
    return all(abs(where[u] - where[v]) <= 1 for u, v in g.edges)


# --------------------------------------------------------------------------
# face boundaries of 3-connected graphs

def is_nonseparating_induced_cycle(g: Graph, c: Iterable[int]) -> bool:
    cs = frozenset(c)
    if len(cs) < 3 or not cs <= g.vertex_set:
        return False
    sub = induced_subgraph(g, cs)
    if any(sub.degree(v) != 2 for v in sub.vertices) or not is_connected(sub):
        return False
    return is_connected(g, cs)


def face_boundaries_3connected(g: Graph) -> set[frozenset[int]]:
    """All non-separating induced cycles (vertex sets)."""
    if not is_connected(g) or g.n < 4 or not is_l_connected(g, 3):
        raise NotThreeConnected("graph is not 3-connected")
    if not nx.check_planarity(_to_nx(g))[0]:
        raise NotPlanar("graph is not planar")
    out = set()
    for cyc in nx.chordless_cycles(_to_nx(g)):
        if len(cyc) >= 3 and is_connected(g, cyc):
            out.add(frozenset(cyc))
    return out


def face_adjacent(emb: PlanarEmbedding, e: Sequence[int], f: Sequence[int]) -> bool:
    e, f = edge(*e), edge(*f)
    if not set(e) & set(f):
        raise NoCommonVertex(f"{e} and {f} share no vertex")
    if e == f:
        return True
    return any(e in fc.boundary_edges and f in fc.boundary_edges for fc in emb.faces)


def _face_edge_sets(g: Graph, face_family) -> list[frozenset[Edge]]:
    out = []
    for fc in face_family:
        if isinstance(fc, Face):
            out.append(fc.boundary_edges)
        else:
            vs = frozenset(fc)
            out.append(frozenset(e for e in g.edges if e[0] in vs and e[1] in vs))
    return out


def incident_edge_order(g: Graph, v: int, anchor: Sequence[int], co_anchor: Sequence[int],
                        face_family=None) -> list[Edge]:
    """Rotational order of the edges at ``v`` starting at ``anchor``.

    Edges are linked when some face boundary contains both; walking this
    face-adjacency cycle from ``anchor`` without passing ``co_anchor`` visits
    every other edge, and ``co_anchor`` comes last.  ``face_family`` (faces or
    vertex sets) defaults to the non-separating induced cycles of ``g``.
    """
    if face_family is None:
        face_family = face_boundaries_3connected(g)
    anchor, co_anchor = edge(*anchor), edge(*co_anchor)
    inc = g.incident(v)
    if anchor not in inc or co_anchor not in inc or anchor == co_anchor:
        raise NotFaceAdjacentAnchors("anchors must be two distinct edges at v")
    fsets = [fs for fs in _face_edge_sets(g, face_family) if v in {x for e in fs for x in e}]
    nbrs: dict[Edge, set[Edge]] = {e: set() for e in inc}
    for fs in fsets:
        here = [e for e in inc if e in fs]
        for a in here:
            for b in here:
                if a != b:
                    nbrs[a].add(b)
    if co_anchor not in nbrs[anchor]:
        raise NotFaceAdjacentAnchors(f"{anchor} and {co_anchor} are not face-adjacent at {v}")
    order = [anchor]
    seen = {anchor, co_anchor}
    while True:
        nxt = sorted(nbrs[order[-1]] - seen)
        if not nxt:
            break
        if len(nxt) > 1 and len(order) > 1:
            raise NotThreeConnected(f"face adjacency at {v} is not a cycle")
        # from the anchor, leave in the direction away from the co-anchor
        order.append(nxt[0])
        seen.add(nxt[0])
    if len(order) != len(inc) - 1:
        raise NotThreeConnected(f"face adjacency at {v} does not reach every edge")
    return order + [co_anchor]


def rotation_edge_order(emb: PlanarEmbedding, v: int, anchor: Edge, co_anchor: Edge) -> list[Edge]:
    """Same ordering as :func:`incident_edge_order`, read off the rotation system."""
    ns = [edge(v, w) for w in emb.rotation[v]]
    d = len(ns)
    i, j = ns.index(anchor), ns.index(co_anchor)
    step = -1 if (i + 1) % d == j else 1
    return [ns[(i + step * t) % d] for t in range(d)]


def lowest_layer_face(emb: PlanarEmbedding, v: int, incoming: Sequence[int] | None = None,
                      layer_numbers: Mapping[int, int] | None = None) -> Face:
    """An incident face of ``v`` with minimum layer number.

    Ties go to the face closest (in rotation steps at ``v``) to the
    ``incoming`` edge, then to the smallest boundary edge.
    """
    if v not in emb.host.vertex_set:
        raise UnknownVertex(v)
    if layer_numbers is None:
        layer_numbers = face_layer_numbers(emb)
    cand = sorted(emb.faces_at[v])
    low = min(layer_numbers[f] for f in cand)
    cand = [f for f in cand if layer_numbers[f] == low]
    eidx = emb.host.edge_index

    def key(fid: int):
        fc = emb.faces[fid]
        dist = 0
        if incoming is not None and emb.rotation[v]:
            ns = [edge(v, w) for w in emb.rotation[v]]
            d = len(ns)
            i = ns.index(edge(*incoming))
            sectors = emb.sector_faces(v)
            # sector s lies between ns[s] and ns[s+1]
            dist = min(min(abs(s - i) % d, (i - s) % d, (s + 1 - i) % d, (i - s - 1) % d)
                       for s in range(d) if sectors[s] == fid)
        return (dist, min((eidx[e] for e in fc.boundary_edges), default=-1))

    return emb.faces[min(cand, key=key)]
