"""Brute-force minor containment for small patterns, plus outerplanarity."""
from __future__ import annotations

from itertools import permutations

import networkx as nx

from .graph import Graph, from_edges, is_connected, induced_subgraph

K4 = from_edges([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
K23 = from_edges([(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)])
K5 = from_edges([(i, j) for i in range(5) for j in range(i + 1, 5)])
K33 = from_edges([(i, j) for i in range(3) for j in range(3, 6)])


def has_minor(g: Graph, h: Graph) -> bool:
    """Search for disjoint connected branch sets of ``g`` realising ``h``.

    Branch sets are opened in vertex order (so relabelled duplicates are
    skipped); once all are connected, the quotient graph is matched against
    ``h`` under every bijection.  Exponential in ``g.n``; meant for patterns
    with at most five vertices and hosts of desk size.
    """
    k = h.n
    if k > 5:
        raise ValueError("pattern too large for brute-force minor search")
    if k == 0:
        return True
    if g.n < k or g.m < h.m:
        return False
    hidx = {v: i for i, v in enumerate(h.vertices)}
    h_edges = [(hidx[a], hidx[b]) for a, b in h.edges]
    perms = list(permutations(range(k)))
    verts = list(g.vertices)
    label: dict[int, int] = {}

    def realises() -> bool:
        sets: list[list[int]] = [[] for _ in range(k)]
        for v, i in label.items():
            if i >= 0:
                sets[i].append(v)
        for s in sets:
            if not is_connected(induced_subgraph(g, s)):
                return False
        quotient = set()
        for a, b in g.edges:
            la, lb = label[a], label[b]
            if la >= 0 and lb >= 0 and la != lb:
                quotient.add((la, lb))
                quotient.add((lb, la))
        if len(quotient) // 2 < len(h_edges):
            return False
        return any(all((p[a], p[b]) in quotient for a, b in h_edges) for p in perms)

    def rec(pos: int, opened: int) -> bool:
        if k - opened > len(verts) - pos:
            return False
        if pos == len(verts):
            return realises()
        v = verts[pos]
        for i in range(-1, min(opened + 1, k)):
            label[v] = i
            if rec(pos + 1, max(opened, i + 1)):
                return True
        del label[v]
        return False

    return rec(0, 0)


def is_outerplanar(g: Graph) -> bool:
    """Outerplanar iff adding an apex adjacent to every vertex keeps it planar."""
    if g.n <= 3:
        return True
    nxg = nx.Graph()
    nxg.add_nodes_from(g.vertices)
    nxg.add_edges_from(g.edges)
    apex = max(g.vertices) + 1
    nxg.add_edges_from((apex, v) for v in g.vertices)
    return nx.check_planarity(nxg)[0]


def is_outerplanar_by_minors(g: Graph) -> bool:
    return not (has_minor(g, K4) or has_minor(g, K23))
