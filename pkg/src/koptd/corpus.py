"""Exhaustive small-graph corpora.

Graphs with up to 7 vertices come from the networkx graph atlas.  Connected
planar graphs on 8 vertices are shipped as a graph6 file built by
:func:`extend_planar` (see scripts/make_corpus.py): every connected graph on
n+1 vertices arises from a connected graph on n vertices by adding one vertex
(delete a leaf of a spanning tree), so extending all planar n-vertex graphs in
every way and removing isomorphic copies gives all planar (n+1)-vertex ones.
"""
from __future__ import annotations

from functools import lru_cache
from importlib import resources
from itertools import combinations

import networkx as nx
from networkx.generators.atlas import graph_atlas_g

from .graph import Graph, build_graph

# connected planar graphs by order (OEIS A003094)
PLANAR_CONNECTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 20, 6: 99, 7: 646, 8: 5974}
N8_FILE = "planar_connected_n8.g6"


def to_graph(h: nx.Graph) -> Graph:
    return build_graph(sorted(h.nodes), sorted(tuple(sorted(e)) for e in h.edges))


@lru_cache(maxsize=None)
def _atlas() -> tuple[nx.Graph, ...]:
    return tuple(graph_atlas_g())


def connected_nx(n: int, planar: bool = False) -> list[nx.Graph]:
    """All connected graphs with exactly n vertices (n <= 7), up to isomorphism."""
    if n <= 7:
        return [h for h in _atlas() if h.number_of_nodes() == n and nx.is_connected(h)
                and (not planar or nx.check_planarity(h)[0])]
    if n == 8 and planar:
        return load_n8()
    raise ValueError(f"no exhaustive corpus for n={n} (planar={planar})")


def connected_graphs(n_max: int, planar: bool = False, m_max: int | None = None) -> list[Graph]:
    """Connected graphs with 1..n_max vertices in atlas order."""
    out = []
    for n in range(1, n_max + 1):
        for h in connected_nx(n, planar):
            if m_max is None or h.number_of_edges() <= m_max:
                out.append(to_graph(h))
    return out


def extend_planar(graphs: list[nx.Graph]) -> list[nx.Graph]:
    """All connected planar graphs with one more vertex, up to isomorphism."""
    buckets: dict[tuple, list[nx.Graph]] = {}
    out = []
    for g in graphs:
        n = g.number_of_nodes()
        for r in range(1, n + 1):
            for s in combinations(range(n), r):
                h = nx.convert_node_labels_to_integers(g)
                h.add_edges_from((n, x) for x in s)
                if not nx.check_planarity(h)[0]:
                    continue
                key = (h.number_of_edges(), tuple(sorted(d for _, d in h.degree())),
                       nx.weisfeiler_lehman_graph_hash(h, iterations=3))
                seen = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(h, x) for x in seen):
                    continue
                seen.append(h)
                out.append(h)
    return out


@lru_cache(maxsize=None)
def _load_n8_bytes() -> bytes:
    return resources.files("koptd.data").joinpath(N8_FILE).read_bytes()


def load_n8() -> list[nx.Graph]:
    lines = _load_n8_bytes().decode().split()
    return [nx.from_graph6_bytes(x.encode()) for x in lines]
