"""Combinatorial oracles for the predicate library.

Each :class:`Check` names a catalog entry, the hosts it applies to, the
parameter assignments to try on a host and a Python oracle for the truth
value of every argument tuple.  :func:`run_check` enumerates the argument
tuples with one shared :class:`Evaluator` per host and records every
disagreement.  The oracles go through networkx or the planarity and remember
modules, never through the formula evaluator.

Argument domains are the full sorts except where a check says otherwise
(Path_F and oriNB range over the edges at the parameter vertex; CSet checks
the candidate set C functionally, see the per-check notes).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Callable, Iterable, Mapping

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ..graph import (Edge, Graph, SpanningForest, build_graph, edge, forest_from_edges,
                     components, induced_subgraph, is_connected, is_l_connected, root_orient)
from ..planarity import (NonPlanar, embed, incident_edge_order,
                         is_nonseparating_induced_cycle, outerplanarity_index,
                         stripping_layers)
from ..remember import (edge_remember, face_remember, fundamental_cycles,
                        iter_spanning_trees, vertex_remember)
from ..treedec import (EDGE_BAG, VERTEX_BAG, TreeDecomposition,
                       degeneracy_coloring, td_from_vr_er)
from .evaluate import DEFAULT_BUDGET, BudgetExceeded, Evaluator, structure
from .library import library

# --------------------------------------------------------------------------
# per-host context


@dataclass
class Host:
    g: Graph
    max_trees: int = 2

    @cached_property
    def emb(self):
        e = embed(self.g)
        return None if isinstance(e, NonPlanar) else e

    @cached_property
    def planar(self) -> bool:
        return self.emb is not None

    @cached_property
    def three_connected(self) -> bool:
        g = self.g
        return self.planar and g.n >= 4 and is_connected(g) and is_l_connected(g, 3)

    @cached_property
    def opi(self) -> int:
        """Outerplanarity index (0 when nonplanar or empty)."""
        return outerplanarity_index(self.g) if self.planar and self.g.n else 0

    @cached_property
    def trees(self) -> list[SpanningForest]:
        """Up to ``max_trees`` spanning trees: the first and last enumerated
        plus evenly spaced ones in between."""
        if not is_connected(self.g) or self.g.n == 0:
            return []
        all_t = list(iter_spanning_trees(self.g))
        if len(all_t) <= self.max_trees:
            pick = all_t
        else:
            step = (len(all_t) - 1) / max(self.max_trees - 1, 1)
            pick = [all_t[round(i * step)] for i in range(self.max_trees)]
        return [forest_from_edges(self.g, t) for t in pick]

    @cached_property
    def coloring(self) -> dict[int, int]:
        return degeneracy_coloring(self.g)

    @cached_property
    def colour_classes(self) -> list[frozenset[int]]:
        c = max(self.coloring.values(), default=-1) + 1
        return [frozenset(v for v, x in self.coloring.items() if x == i) for i in range(c)]

    @cached_property
    def nonsep_cycles(self) -> list[frozenset[int]]:
        h = nx.Graph(list(self.g.edges))
        h.add_nodes_from(self.g.vertices)
        out = {frozenset(c) for c in nx.chordless_cycles(h) if len(c) >= 3}
        return sorted((c for c in out if is_nonseparating_induced_cycle(self.g, c)), key=sorted)

    def edges_within(self, w: Iterable[int]) -> frozenset[Edge]:
        w = set(w)
        return frozenset(e for e in self.g.edges if e[0] in w and e[1] in w)

    @cached_property
    def face_edge_sets(self) -> list[frozenset[Edge]]:
        return [self.edges_within(c) for c in self.nonsep_cycles]

    def incident(self, v: int) -> list[Edge]:
        return sorted(self.g.incident(v))

    @cached_property
    def _memo(self) -> dict:
        return {}

    def memo(self, key, fn):
        """Cache an oracle helper value on this host."""
        m = self._memo
        if key not in m:
            m[key] = fn()
        return m[key]


def _nx(vertices: Iterable[int], edges: Iterable[Edge]) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(vertices)
    h.add_edges_from(edges)
    return h


def _restrict(w: frozenset[int], f: frozenset[Edge]) -> frozenset[Edge]:
    return frozenset(e for e in f if e[0] in w and e[1] in w)


def _key(w: Iterable[int], f: Iterable[Edge]) -> tuple:
    """Canonical labelling-independent-enough key: relabel to 0..k-1."""
    ws = sorted(w)
    idx = {v: i for i, v in enumerate(ws)}
    return len(ws), tuple(sorted((idx[a], idx[b]) for a, b in f))


# --------------------------------------------------------------------------
# minor search by contraction


_PATTERNS = {
    "K4": nx.complete_graph(4),
    "K23": nx.complete_bipartite_graph(2, 3),
    "K5": nx.complete_graph(5),
    "K33": nx.complete_bipartite_graph(3, 3),
}


@lru_cache(maxsize=None)
def minor_by_contraction(pattern: str, key: tuple) -> bool:
    """Does the graph (n, edge tuple) contract to a supergraph of the pattern?

    Deletions are covered by looking for the pattern as a subgraph
    (monomorphism) of each contracted graph."""
    p = _PATTERNS[pattern]
    n, edges = key
    if n < p.number_of_nodes() or len(edges) < p.number_of_edges():
        return False
    h = _nx(range(n), edges)
    if GraphMatcher(h, p).subgraph_is_monomorphic():
        return True
    for a, b in edges:
        # contract a-b into a, relabel to 0..n-2
        keep = [x for x in range(n) if x != b]
        idx = {x: i for i, x in enumerate(keep)}
        idx[b] = idx[a]
        es = {tuple(sorted((idx[x], idx[y]))) for x, y in edges if idx[x] != idx[y]}
        if minor_by_contraction(pattern, (n - 1, tuple(sorted(es)))):
            return True
    return False


@lru_cache(maxsize=None)
def _outerplanar_key(key: tuple) -> bool:
    n, edges = key
    if n == 0:
        return True
    g = build_graph(range(n), edges)
    if isinstance(embed(g), NonPlanar):
        return False
    # the index is taken per connected component
    return all(outerplanarity_index(induced_subgraph(g, c)) <= 1 for c in components(g))


# --------------------------------------------------------------------------
# checks


Oracle = Callable[[Host, dict, tuple], bool]


@dataclass(frozen=True)
class Check:
    name: str                                   # catalog name
    oracle: Oracle
    constants: Mapping[str, object] = field(default_factory=dict)
    hosts: Callable[[Host], bool] = lambda h: True
    params: Callable[[Host], Iterable[dict]] = lambda h: [{}]
    domains: Callable[[Host, dict], list] | None = None   # python values per argument
    label: str = ""
    host_constants: Callable[[Host], dict] | None = None   # constants chosen per host

    def formula(self, h: Host):
        cs = dict(self.constants)
        if self.host_constants is not None:
            cs.update(self.host_constants(h))
        return library(self.name, cs)

    @property
    def title(self) -> str:
        if self.label:
            return self.label
        if self.constants:
            cs = ",".join(f"{k}={v}" for k, v in sorted(self.constants.items()))
            return f"{self.name}{{{cs}}}"
        return self.name


@dataclass
class CheckResult:
    title: str
    hosts: int = 0
    tuples: int = 0
    true: int = 0
    skipped: int = 0                            # hosts over the budget
    mismatches: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _tree_params(h: Host) -> list[dict]:
    return [{"F": t.tree_edges} for t in h.trees]


def _ncolours(h: Host) -> dict:
    return {"c": len(h.colour_classes)}


def _colour_params(h: Host) -> dict:
    return {f"K{i + 1}": s for i, s in enumerate(h.colour_classes)}


def _cycles(h: Host, f: frozenset[Edge]):
    return h.memo(("cyc", f), lambda: fundamental_cycles(h.g, forest_from_edges(h.g, f)))


def _incident_domains(h: Host, p: dict) -> list:
    inc = h.incident(p["v"])
    sets = [frozenset(c) for r in range(len(inc) + 1) for c in combinations(inc, r)]
    return [sets, inc, inc]


def _rotation_edges(h: Host, v: int) -> list[Edge]:
    return [edge(v, w) for w in h.emb.rotation[v]]


def _path_f_oracle(h: Host, p: dict, a: tuple) -> bool:
    """D is an arc of the rotation at v from e to f that is an induced path of
    the face-adjacency cycle (fewer than deg(v) edges) and whose interior
    avoids c."""
    d_set, e, f = a
    v, c = p["v"], p["c"]
    if e == f:
        return False
    rot = _rotation_edges(h, v)
    d = len(rot)
    i = rot.index(e)
    for step in (1, -1):
        arc = [e]
        j = i
        while rot[j] != f:
            j = (j + step) % d
            arc.append(rot[j])
        if len(arc) < d and frozenset(arc) == d_set and c not in arc[1:-1]:
            return True
    return False


def _ori_params(h: Host) -> list[dict]:
    out = []
    for v in h.g.vertices:
        rot = _rotation_edges(h, v)
        for i, a in enumerate(rot):
            for c in (rot[i - 1], rot[(i + 1) % len(rot)]):
                out.append({"v": v, "a": a, "c": c})
    return out


def _ori_oracle(h: Host, p: dict, a: tuple) -> bool:
    e, f = a
    order = h.memo(("order", p["v"], p["a"], p["c"]), lambda: incident_edge_order(
        h.g, p["v"], p["a"], p["c"], face_family=h.nonsep_cycles)[1:-1])
    return e in order and f in order and order.index(e) < order.index(f)


def _path_between(h: Host, x: int, y: int, pset: frozenset[Edge]) -> bool:
    if x == y:
        return not pset
    if not pset:
        return False
    vs = {u for e in pset for u in e}
    g = _nx(vs, pset)
    if not nx.is_tree(g) or max(d for _, d in g.degree()) > 2:
        return False
    ends = {u for u, d in g.degree() if d == 1}
    return ends == {x, y}


def _conn(w: frozenset[int], f: frozenset[Edge]) -> bool:
    if not w:
        return True
    return nx.is_connected(_nx(w, _restrict(w, f)))


def _k_connected(w: frozenset[int], f: frozenset[Edge], k: int) -> bool:
    if len(w) <= k:
        return False
    return nx.node_connectivity(_nx(w, _restrict(w, f))) >= k


def _degree(v: int, f: frozenset[Edge]) -> int:
    return sum(1 for e in f if v in e)


def _cycle(w: frozenset[int], f: frozenset[Edge]) -> bool:
    if not w or not all(e[0] in w and e[1] in w for e in f):
        return False
    return all(_degree(v, f) == 2 for v in w) and _conn(w, f)


def _tree(w: frozenset[int], f: frozenset[Edge]) -> bool:
    if not w or not all(e[0] in w and e[1] in w for e in f):
        return False
    return nx.is_tree(_nx(w, f))


def _layers_ok(h: Host, sets: tuple) -> bool:
    g = h.g
    where = {}
    for i, s in enumerate(sets):
        for v in s:
            if v in where:
                return False
            where[v] = i
    if len(where) != g.n:
        return False
    for s in sets:
        if not _outerplanar_key(_key(s, h.edges_within(s))):
            return False
    return all(abs(where[a] - where[b]) <= 1 for a, b in g.edges)


def _k_outerplanar_partition(h: Host, k: int) -> bool:
    for labels in product(range(k), repeat=h.g.n):
        sets = tuple(frozenset(v for v, l in zip(h.g.vertices, labels) if l == i) for i in range(k))
        if _layers_ok(h, sets):
            return True
    return False


def _fr_vertex_scoped(h: Host, f: frozenset[Edge]) -> int:
    return h.memo(("frv", f), lambda: _fr_vertex_scoped_raw(h, f))


def _fr_vertex_scoped_raw(h: Host, f: frozenset[Edge]) -> int:
    cyc = _cycles(h, f)
    best = 0
    for d in h.face_edge_sets:
        for v in h.g.vertices:
            best = max(best, sum(1 for vs, es in cyc.values() if v in vs and es & d))
    return best


def _fr_outer_params(h: Host) -> list[dict]:
    out = []
    for p in _tree_params(h):
        for d in h.face_edge_sets:
            out.append({**p, "O": d})
    return out


def _fr_face(h: Host, p: dict) -> int:
    return h.memo(("frf", p["F"], p["O"]), lambda: _fr_face_raw(h, p))


def _fr_face_raw(h: Host, p: dict) -> int:
    """face_remember with the face whose boundary is O as the outer face."""
    emb = h.emb
    oid = next(fc.id for fc in emb.faces if fc.boundary_edges == p["O"])
    t = forest_from_edges(h.g, p["F"])
    return face_remember(h.g, t, emb.with_outer_face(oid))


def _rooted_params(h: Host) -> list[dict]:
    out = []
    for p in _tree_params(h)[:1]:
        for r in h.g.vertices:
            out.append({**p, "r": r})
    return out


def _is_head(h: Host, p: dict, v: int, e: Edge) -> bool:
    t = h.memo(("rooted", p["F"], p["r"]),
               lambda: root_orient(forest_from_edges(h.g, p["F"]), p["r"]))
    return e in t.tree_edges and v in e and t.parent_of(other(e, v)) == v


def other(e: Edge, v: int) -> int:
    return e[1] if e[0] == v else e[0]


def _rep(h: Host, v: int, e: Edge) -> bool:
    col = h.coloring
    return v in e and col[v] < col[other(e, v)]


def _bag_td(h: Host, p: dict) -> TreeDecomposition:
    return h.memo(("td", p["F"]), lambda: td_from_vr_er(h.g, forest_from_edges(h.g, p["F"]),
                                                         h.coloring))


def _bag_params(h: Host) -> list[dict]:
    return [{**p, **_colour_params(h)} for p in _tree_params(h)]


def _bags_of(h: Host, p: dict, kind: str) -> set[tuple]:
    td = _bag_td(h, p)
    return h.memo(("bags", p["F"], kind), lambda: {
        (lab.witness, td.bags[i]) for i, lab in td.labels.items() if lab.kind == kind})


def _parent_pairs(h: Host, p: dict) -> set[tuple]:
    td = _bag_td(h, p)
    return h.memo(("pp", p["F"]), lambda: {
        (td.bags[par], td.bags[ch]) for ch, par in td.parent.items()})


def _parent_params(h: Host) -> list[dict]:
    return [{**p, "r": min(h.g.vertices)} for p in _bag_params(h)]


def _meets(h: Host, p: dict, v: int, d: frozenset[Edge], e: Edge) -> bool:
    cyc = _cycles(h, p["F"])
    if e not in cyc:
        return False
    vs, es = cyc[e]
    return v in vs and bool(es & d)


def _cset(h: Host, p: dict, v: int, d: frozenset[Edge]) -> frozenset[Edge]:
    return h.memo(("cset", p["F"], v, d), lambda: frozenset(
        e for e in _cycles(h, p["F"]) if _meets(h, p, v, d, e)))


def _layer_params(h: Host) -> list[dict]:
    p = stripping_layers(h.g)
    return [{f"V{i + 1}": s for i, s in enumerate(p.layers)}]


def _bag_cyc_params(h: Host) -> list[dict]:
    return [{"r": r} for r in h.g.vertices]


def _sep2(h: Host, x: int, y: int) -> bool:
    return x != y and not is_connected(h.g, {x, y})


def _articulation(h: Host, v: int) -> bool:
    rest = [u for u in h.g.vertices if u != v]
    if not rest:
        return False
    return not nx.is_connected(_nx(rest, [e for e in h.g.edges if v not in e]))


def _block_like(h: Host, w: frozenset[int]) -> bool:
    if len(w) == 2:
        return edge(*sorted(w)) in h.g.edge_set
    return len(w) >= 3 and nx.is_biconnected(_nx(w, h.edges_within(w)))


def _blocks(h: Host) -> set[frozenset[int]]:
    return h.memo("blocks", lambda: {frozenset(c) for c in nx.biconnected_components(
        _nx(h.g.vertices, h.g.edges))})


def _planar_tree_hosts(h: Host) -> bool:
    return h.planar and bool(h.trees)


def _has_trees(h: Host) -> bool:
    return bool(h.trees)


def standard_checks() -> list[Check]:
    """The registry used by the tests and the acceptance run."""
    C: list[Check] = []
    add = C.append
    add(Check("Adj", lambda h, p, a: a[0] != a[1] and edge(a[0], a[1]) in a[2]))
    add(Check("Edge", lambda h, p, a: a[1] != a[2] and set(a[0]) == {a[1], a[2]}))
    add(Check("IncV", lambda h, p, a: a[0] == frozenset(u for e in a[1] for u in e)))
    add(Check("IncE", lambda h, p, a: a[0] == h.edges_within(a[1])))
    add(Check("Inside", lambda h, p, a: all(e[0] in a[0] and e[1] in a[0] for e in a[1])))
    for k in range(4):
        add(Check("deg", (lambda k: lambda h, p, a: _degree(a[0], a[1]) == k)(k), {"k": k}))
    add(Check("Conn", lambda h, p, a: _conn(a[0], a[1])))
    add(Check("ConnV", lambda h, p, a: _conn(a[0], h.edges_within(a[0]))))
    for k in (1, 2):
        add(Check("Conn_k", (lambda k: lambda h, p, a: _k_connected(a[0], a[1], k))(k), {"k": k}))
    add(Check("Cycle", lambda h, p, a: _cycle(a[0], a[1])))
    add(Check("Acyclic", lambda h, p, a: nx.is_forest(_nx({u for e in a[0] for u in e}, a[0]))
              if a[0] else True))
    add(Check("Tree", lambda h, p, a: _tree(a[0], a[1])))
    add(Check("Path", lambda h, p, a: _tree(a[0], a[1]) and all(_degree(v, a[1]) <= 2 for v in a[0])))
    add(Check("PathBetween", lambda h, p, a: _path_between(h, a[0], a[1], a[2])))
    for pat in ("K4", "K23"):
        add(Check("Minor", (lambda pat: lambda h, p, a: minor_by_contraction(
            pat, _key(a[0], _restrict(a[0], a[1]))))(pat), {"H": pat}))
    add(Check("Outerplanar", lambda h, p, a: _outerplanar_key(_key(a[0], _restrict(a[0], a[1])))))
    for k in (1, 2):
        add(Check("Part", lambda h, p, a: _partition(h, a), {"k": k}))
        add(Check("Layers", lambda h, p, a: _layers_ok(h, a), {"k": k}))
        add(Check("KOuterplanar", (lambda k: lambda h, p, a: _k_outerplanar_partition(h, k))(k),
                  {"k": k}))
    add(Check("FaceB3", lambda h, p, a: is_nonseparating_induced_cycle(h.g, a[0])))
    add(Check("FaceB3E", lambda h, p, a: a[0] in h.face_edge_sets))
    add(Check("Adj_F", lambda h, p, a: a[0] != a[1] and bool(set(a[0]) & set(a[1]))
              and any(fc.boundary_edges >= {a[0], a[1]} for fc in h.emb.faces),
              hosts=lambda h: h.three_connected))
    add(Check("Path_F", _path_f_oracle, hosts=lambda h: h.three_connected,
              params=lambda h: [{"v": v, "c": c} for v in h.g.vertices for c in h.incident(v)],
              domains=_incident_domains))
    add(Check("oriNB", _ori_oracle, hosts=lambda h: h.three_connected, params=_ori_params,
              domains=lambda h, p: [h.incident(p["v"])] * 2))
    add(Check("FundCycSet", lambda h, p, a: a[0] in (cy := _cycles(h, p["F"])) and cy[a[0]][1] == a[1],
              hosts=_has_trees, params=_tree_params))
    add(Check("FundCycV", lambda h, p, a: a[1] in (cy := _cycles(h, p["F"])) and a[0] in cy[a[1]][0],
              hosts=_has_trees, params=_tree_params))
    add(Check("FundCycE", lambda h, p, a: a[1] in (cy := _cycles(h, p["F"])) and a[0] in cy[a[1]][1],
              hosts=_has_trees, params=_tree_params))
    for kappa in range(4):
        add(Check("vr_le", (lambda c: lambda h, p, a: vertex_remember(
            h.g, forest_from_edges(h.g, p["F"])) <= c)(kappa), {"kappa": kappa},
            hosts=_has_trees, params=_tree_params))
    for lam in range(4):
        add(Check("er_le", (lambda c: lambda h, p, a: edge_remember(
            h.g, forest_from_edges(h.g, p["F"])) <= c)(lam), {"lambda": lam},
            hosts=_has_trees, params=_tree_params))
    add(Check("Head", lambda h, p, a: _is_head(h, p, a[0], a[1]), hosts=_has_trees,
              params=_rooted_params))
    add(Check("Tail", lambda h, p, a: a[1] in p["F"] and a[0] in a[1]
              and not _is_head(h, p, a[0], a[1]), hosts=_has_trees, params=_rooted_params))
    add(Check("ColLess", lambda h, p, a: h.coloring[a[0]] < h.coloring[a[1]],
              hosts=lambda h: h.g.m > 0, params=lambda h: [_colour_params(h)],
              label="ColLess{c=#colours}", host_constants=_ncolours))
    add(Check("Rep", lambda h, p, a: _rep(h, a[0], a[1]), hosts=lambda h: h.g.m > 0,
              params=lambda h: [_colour_params(h)], label="Rep{c=#colours}", host_constants=_ncolours))
    add(Check("Rep", lambda h, p, a: a[0] in a[1], {"c": 0}, hosts=lambda h: h.g.m > 0))
    add(Check("Bag_V", lambda h, p, a: (a[0], a[1]) in _bags_of(h, p, VERTEX_BAG),
              hosts=_has_trees, params=_bag_params, label="Bag_V{c=#colours}", host_constants=_ncolours))
    add(Check("Bag_E", lambda h, p, a: (a[0], a[1]) in _bags_of(h, p, EDGE_BAG),
              hosts=_has_trees, params=_bag_params, label="Bag_E{c=#colours}", host_constants=_ncolours))
    add(Check("Parent", lambda h, p, a: (a[0], a[1]) in _parent_pairs(h, p),
              hosts=_has_trees, params=_parent_params, label="Parent{c=#colours}", host_constants=_ncolours))
    add(Check("Meets", lambda h, p, a: _meets(h, p, *a), hosts=_has_trees, params=_tree_params))
    add(Check("Touches", lambda h, p, a: a[1] in (cy := _cycles(h, p["F"])) and bool(cy[a[1]][1] & a[0]),
              hosts=_has_trees, params=_tree_params))
    add(Check("CSet", lambda h, p, a: a[2] == _cset(h, p, a[0], a[1]), hosts=_planar_tree_hosts,
              params=_tree_params))
    for nu in range(4):
        add(Check("fr_le", (lambda c: lambda h, p, a: _fr_vertex_scoped(h, p["F"]) <= c)(nu),
                  {"nu": nu}, hosts=_planar_tree_hosts, params=_tree_params))
        add(Check("fr_face_le", (lambda c: lambda h, p, a: _fr_face(h, p) <= c)(nu), {"nu": nu},
                  hosts=lambda h: h.three_connected and bool(h.trees), params=_fr_outer_params))
    add(Check("Layer", lambda h, p, a: a[0] in h.face_edge_sets and any(
        e[0] in p["V1"] or e[1] in p["V1"] for e in a[0]), {"i": 1, "k": 1},
        hosts=lambda h: h.opi == 1,
        params=_layer_params))
    add(Check("Layer", lambda h, p, a: a[0] in h.face_edge_sets and any(
        e[0] in p["V2"] or e[1] in p["V2"] for e in a[0]), {"i": 2, "k": 2},
        hosts=lambda h: h.opi == 2, params=_layer_params))
    add(Check("Cut1", lambda h, p, a: _articulation(h, a[0])))
    add(Check("Sep2", lambda h, p, a: _sep2(h, *a)))
    add(Check("BlockLike", lambda h, p, a: _block_like(h, a[0])))
    add(Check("Block2", lambda h, p, a: a[0] in _blocks(h)))
    add(Check("Bag_Cyc", lambda h, p, a: p["r"] not in a[0]
              and a[1] == frozenset(a[0]) | {p["r"]}, params=_bag_cyc_params))
    return C


def _partition(h: Host, sets: tuple) -> bool:
    seen: set[int] = set()
    for s in sets:
        if seen & s:
            return False
        seen |= s
    return seen == h.g.vertex_set


# --------------------------------------------------------------------------
# enumeration


def _cset_tuples(ev: Evaluator, h: Host, p: dict):
    """(v, D, C) with C the oracle set or one edge away from it."""
    g = h.g
    for v in g.vertices:
        for dm in ev.domain("E"):
            d = ev.decode("E", dm)
            c = _cset(h, p, v, d)
            yield (v, d, c)
            for e in g.edges:
                yield (v, d, c ^ {e})


def run_check(check: Check, hosts: Iterable[Host], budget: int = DEFAULT_BUDGET,
              evaluators: dict | None = None, max_mismatches: int = 20) -> CheckResult:
    """Compare the formula with its oracle on every applicable host."""
    res = CheckResult(check.title)
    t0 = time.perf_counter()
    evaluators = {} if evaluators is None else evaluators
    for h in hosts:
        if not check.hosts(h):
            continue
        f = check.formula(h)
        s = structure(h.g)
        # the static estimate ignores memoisation (Block2 on six vertices
        # prices out at 2^12 block tests); the evaluator's own call count
        # enforces the budget instead
        ev = evaluators.get(h.g)
        if ev is None:
            ev = evaluators[h.g] = Evaluator(s, budget)
        res.hosts += 1
        run = ev.compile_formula(f)
        try:
            for p in check.params(h):
                ev.calls = 0
                base = {v.name: ev.encode(v.sort, p[v.name]) for v in f.params}
                if check.name == "CSet":
                    tuples = _cset_tuples(ev, h, p)
                elif check.domains is not None:
                    tuples = product(*check.domains(h, p))
                else:
                    doms = [[ev.decode(v.sort, x) for x in ev.domain(v.sort)] for v in f.args]
                    tuples = product(*doms)
                for a in tuples:
                    env = dict(base)
                    env.update((v.name, ev.encode(v.sort, x)) for v, x in zip(f.args, a))
                    got = run(env)
                    want = bool(check.oracle(h, p, a))
                    res.tuples += 1
                    res.true += want
                    if got != want and len(res.mismatches) < max_mismatches:
                        res.mismatches.append({"graph": [list(e) for e in h.g.edges],
                                               "params": _show(p), "args": _show(a),
                                               "formula": got, "oracle": want})
        except BudgetExceeded:
            res.hosts -= 1
            res.skipped += 1
            evaluators.pop(h.g, None)
    res.seconds = time.perf_counter() - t0
    return res


def _show(x):
    if isinstance(x, dict):
        return {k: _show(v) for k, v in sorted(x.items())}
    if isinstance(x, (frozenset, set)):
        return sorted(_show(y) for y in x)
    if isinstance(x, tuple):
        return [_show(y) for y in x]
    return x


# --------------------------------------------------------------------------
# Bag/Parent extraction as a tree decomposition


def extracted_decomposition(g: Graph, t: SpanningForest, coloring: Mapping[int, int] | None = None,
                            budget: int = DEFAULT_BUDGET) -> tuple[TreeDecomposition, dict]:
    """Assemble a decomposition from the Bag_V, Bag_E and Parent relations.

    Nodes are the vertex bags and tree-edge bags, linked along the
    incidences of the tree and oriented away from r.  Links whose contents
    the Parent relation does not confirm are returned as "unconfirmed"."""
    from .evaluate import extract_relation
    coloring = degeneracy_coloring(g) if coloring is None else coloring
    c = max(coloring.values(), default=-1) + 1
    ks = {f"K{i + 1}": frozenset(v for v, x in coloring.items() if x == i) for i in range(c)}
    s = structure(g)
    par = {"F": t.tree_edges, **ks}
    bv = extract_relation(s, library("Bag_V", {"c": c}), par, budget)
    be = extract_relation(s, library("Bag_E", {"c": c}), par, budget)
    r = t.root if t.root is not None else min(g.vertices)
    pp = extract_relation(s, library("Parent", {"c": c}), {**par, "r": r}, budget)
    bags, idx = [], {}
    for w, x in sorted(bv, key=lambda z: z[0]):
        idx[("v", w)] = len(bags)
        bags.append(x)
    for w, x in sorted(be, key=lambda z: z[0]):
        idx[("e", w)] = len(bags)
        bags.append(x)
    # every tree edge node sits between the nodes of its two endpoints; the
    # orientation away from r must agree with the extracted Parent relation
    adj: dict[int, list[int]] = {i: [] for i in range(len(bags))}
    for e in sorted(t.tree_edges):
        ie = idx[("e", e)]
        for w in e:
            adj[ie].append(idx[("v", w)])
            adj[idx[("v", w)]].append(ie)
    tedges, parent, unconfirmed = set(), {}, set()
    seen, queue = {idx[("v", r)]}, [idx[("v", r)]]
    for i in queue:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            queue.append(j)
            parent[j] = i
            tedges.add((min(i, j), max(i, j)))
            if (bags[i], bags[j]) not in pp:
                unconfirmed.add((i, j))
    td = TreeDecomposition(tuple(bags), frozenset(tedges), parent)
    return td, {"bag_v": bv, "bag_e": be, "parent": pp, "unconfirmed": unconfirmed}
