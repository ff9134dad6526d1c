import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import complete, cycle, path
from koptd.errors import (CrossComponent, Disconnected, DuplicateEdge, EdgeInForest, SelfLoop,
                          UnknownEndpoint, UnknownVertex)
from koptd.graph import (build_graph, edge, enumerate_cuts, from_edges, fundamental_cycle,
                         induced_subgraph, is_connected, is_l_connected, is_spanning_forest,
                         root_orient, spanning_forest, tree_path, tree_path_vertices)


@st.composite
def graphs(draw, max_n=8, connected=False):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    es = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected:
        es = sorted(set(es) | {(i, i + 1) for i in range(n - 1)})
    return build_graph(range(n), es)


def test_build_triangle():
    g = build_graph([1, 2, 3], [(1, 2), (2, 3), (3, 1)])
    assert g.n == 3 and g.m == 3
    assert g.edge_set == {(1, 2), (2, 3), (1, 3)}


def test_build_single_vertex():
    g = build_graph([1], [])
    assert g.n == 1 and g.m == 0


def test_build_errors():
    with pytest.raises(SelfLoop):
        build_graph([1, 2], [(1, 1)])
    with pytest.raises(DuplicateEdge):
        build_graph([1, 2], [(1, 2), (2, 1)])
    with pytest.raises(UnknownEndpoint):
        build_graph([1, 2], [(1, 3)])


def test_induced_subgraph():
    k4 = complete(4)
    assert induced_subgraph(k4, {1, 2, 3}).edge_set == {(1, 2), (1, 3), (2, 3)}
    h = induced_subgraph(cycle(4), {1, 3})
    assert h.n == 2 and h.m == 0
    assert induced_subgraph(k4, k4.vertices) == k4
    with pytest.raises(UnknownVertex):
        induced_subgraph(k4, {9})


def test_l_connected():
    assert is_l_connected(complete(4), 3)
    assert not is_l_connected(cycle(5), 3)
    assert not is_l_connected(path(3), 2)
    with pytest.raises(Disconnected):
        is_l_connected(from_edges([(1, 2), (3, 4)]), 1)


def test_enumerate_cuts():
    assert set(enumerate_cuts(cycle(4), 2)) == {frozenset({1, 3}), frozenset({2, 4})}
    assert enumerate_cuts(complete(4), 2) == []
    assert enumerate_cuts(path(3), 1) == [frozenset({2})]


def test_spanning_forest_priority():
    t = spanning_forest(cycle(4), [(1, 2), (2, 3), (3, 4), (4, 1)])
    assert t.tree_edges == {(1, 2), (2, 3), (3, 4)}
    t = spanning_forest(complete(4), [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])
    assert t.tree_edges == {(1, 2), (1, 3), (1, 4)}
    t = spanning_forest(from_edges([(1, 2), (3, 4), (4, 5)]))
    assert len(set(t.component_of.values())) == 2 and is_spanning_forest(t)


def test_fundamental_cycle_examples():
    c4 = cycle(4)
    t = spanning_forest(c4, [(1, 2), (2, 3), (3, 4)])
    assert fundamental_cycle(c4, t, (4, 1)) == (frozenset({1, 2, 3, 4}), c4.edge_set)
    k4 = complete(4)
    star = spanning_forest(k4, [(1, 2), (1, 3), (1, 4)])
    assert fundamental_cycle(k4, star, (2, 3)) == (frozenset({1, 2, 3}),
                                                   frozenset({(1, 2), (1, 3), (2, 3)}))
    pt = spanning_forest(k4, [(1, 2), (2, 3), (3, 4)])
    vs, es = fundamental_cycle(k4, pt, (1, 4))
    assert vs == {1, 2, 3, 4} and es == {(1, 2), (2, 3), (3, 4), (1, 4)}
    with pytest.raises(EdgeInForest):
        fundamental_cycle(k4, pt, (1, 2))


def test_cross_component():
    g = from_edges([(1, 2), (3, 4)])
    t = spanning_forest(g)
    with pytest.raises(CrossComponent):
        tree_path(t, 1, 3)


def test_root_orient():
    t = root_orient(spanning_forest(path(3)), 2)
    assert dict(t.parent) == {1: 2, 3: 2}
    t = root_orient(spanning_forest(path(3)), 1)
    assert dict(t.parent) == {2: 1, 3: 2}
    k4 = complete(4)
    t = root_orient(spanning_forest(k4, [(1, 2), (1, 3), (1, 4)]), 1)
    assert dict(t.parent) == {2: 1, 3: 1, 4: 1}


def test_tree_path_examples():
    t = spanning_forest(path(4))
    assert tree_path(t, 1, 4) == [(1, 2), (2, 3), (3, 4)]
    assert tree_path(t, 3, 3) == []
    star = spanning_forest(complete(4), [(1, 2), (1, 3), (1, 4)])
    assert tree_path(star, 2, 3) == [(1, 2), (1, 3)]


# -- properties ---------------------------------------------------------------

@given(graphs(connected=True), st.data())
def test_fundamental_cycles_are_simple(g, data):
    t = spanning_forest(g, data.draw(st.permutations(list(g.edges))))
    assert is_spanning_forest(t)
    for e in t.non_tree_edges:
        vs, es = fundamental_cycle(g, t, e)
        assert e in es and len(vs) == len(es)
        deg = {v: 0 for v in vs}
        for a, b in es:
            deg[a] += 1
            deg[b] += 1
        assert set(deg.values()) == {2}


@given(graphs(max_n=7, connected=True), st.integers(1, 2))
def test_cuts_match_brute_force(g, l):
    got = set(enumerate_cuts(g, l))
    for c in itertools.combinations(g.vertices, l):
        c = frozenset(c)
        rest = g.vertex_set - c
        disconnected = not is_connected(induced_subgraph(g, rest))
        assert (c in got) == disconnected


@given(graphs(max_n=7, connected=True), st.integers(1, 4))
def test_l_connected_iff_no_small_cut(g, l):
    small = any(enumerate_cuts(g, j) for j in range(1, l))
    assert is_l_connected(g, l) == (not small)


@given(graphs(connected=True), st.data())
def test_tree_path_composition(g, data):
    t = spanning_forest(g)
    x, y, z = (data.draw(st.sampled_from(g.vertices)) for _ in range(3))
    walk = tree_path_vertices(t, x, y)[:-1] + tree_path_vertices(t, y, z)
    # cancel immediate backtracks
    out: list[int] = []
    for v in walk:
        if len(out) >= 2 and out[-2] == v:
            out.pop()
        elif not out or out[-1] != v:
            out.append(v)
    assert out == tree_path_vertices(t, x, z)


@given(graphs(connected=True), st.data())
def test_root_orient_parents(g, data):
    r = data.draw(st.sampled_from(g.vertices))
    t = root_orient(spanning_forest(g), r)
    assert r not in t.parent and len(t.parent) == g.n - 1
    assert all(edge(c, p) in t.tree_edges for c, p in t.parent.items())
