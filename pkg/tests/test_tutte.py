import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import complete, cycle, path, theta
from koptd.errors import Disconnected, NotRooted, NotTwoConnected, UnknownBag
from koptd.generate import generate_2connected, generate_kop
from koptd.graph import (edge, from_edges, induced_subgraph, is_connected, is_l_connected,
                         root_orient, spanning_forest)
from koptd.tutte import (TutteDecomposition, block_decomposition,
                         check_3block_class_preservation, derive_spanning_sets,
                         is_two_connected, three_block_graph, tutte_decomposition,
                         validate_tutte, w_paths)


def two_k4s(shared_edge=False):
    """K4 on {1,2,3,4} and K4 on {3,4,5,6} glued along {3,4}."""
    es = set(itertools.combinations([1, 2, 3, 4], 2)) | set(itertools.combinations([3, 4, 5, 6], 2))
    if not shared_edge:
        es.discard((3, 4))
    return from_edges(es)


def test_block_decomposition_examples():
    bowtie = from_edges([(1, 2), (2, 5), (5, 1), (3, 4), (4, 5), (5, 3)])
    bd = block_decomposition(bowtie)
    assert len(bd.blocks) == 2 and bd.cut_vertices == (5,)
    bd = block_decomposition(path(3))
    assert len(bd.blocks) == 2 and bd.cut_vertices == (2,)
    assert len(bd.edge_blocks) == 2
    bd = block_decomposition(complete(4))
    assert bd.blocks == (frozenset({1, 2, 3, 4}),) and bd.cut_vertices == ()
    with pytest.raises(Disconnected):
        block_decomposition(from_edges([(1, 2), (3, 4)]))


def test_tutte_examples():
    td3 = tutte_decomposition(complete(4))
    assert td3.cut_bags == () and td3.kinds == ("three_connected",)
    th = theta()
    td3 = tutte_decomposition(th)
    assert td3.cut_bags == (frozenset({1, 4}),)
    assert set(td3.block_bags) == {frozenset({1, 2, 3, 4}), frozenset({1, 4, 5, 6})}
    assert set(td3.kinds) == {"cycle"}
    assert td3.virtual_edges == frozenset()          # {1,4} is a real edge
    td3 = tutte_decomposition(cycle(5))
    assert td3.kinds == ("cycle",) and td3.cut_bags == ()
    with pytest.raises(NotTwoConnected):
        tutte_decomposition(path(3))


def test_validate_tutte_examples():
    th = theta()
    rep = validate_tutte(th, tutte_decomposition(th))
    assert rep.valid and rep.adhesion == 2
    rep = validate_tutte(complete(4), tutte_decomposition(complete(4)))
    assert rep.valid and rep.adhesion == 0
    # a cut bag adjacent to three block bags
    g = from_edges([(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (1, 4)])
    bad = TutteDecomposition(g, (frozenset({1, 4}),),
                             (frozenset({1, 2, 3, 4}), frozenset({1, 4, 5, 6}), frozenset({1, 2, 3, 4})),
                             ("cycle", "cycle", "cycle"), frozenset({(0, 0), (0, 1), (0, 2)}))
    rep = validate_tutte(g, bad)
    assert not rep.valid and any(kind == "iii" for kind, _ in rep.violations)


def test_three_block_graph_examples():
    th = theta()
    td3 = tutte_decomposition(th)
    h = three_block_graph(td3, {1, 2, 3, 4})
    assert h.edge_set == {(1, 2), (2, 3), (3, 4), (1, 4)}
    td3 = tutte_decomposition(complete(4))
    assert three_block_graph(td3, 0) == complete(4)
    # K4 with a 4-cycle glued on the edge {3,4}
    g = from_edges(list(complete(4).edges) + [(3, 5), (5, 6), (6, 4)])
    td3 = tutte_decomposition(g)
    assert three_block_graph(td3, {1, 2, 3, 4}).edge_set == complete(4).edge_set
    with pytest.raises(UnknownBag):
        three_block_graph(td3, {1, 2})


def test_virtual_edge_added_when_missing():
    g = two_k4s()
    td3 = tutte_decomposition(g)
    assert td3.virtual_edges == {(3, 4)}
    for j in range(len(td3.block_bags)):
        assert three_block_graph(td3, j).has_edge(3, 4)
    assert validate_tutte(g, td3).valid


def test_class_preservation_examples():
    rep = check_3block_class_preservation(theta(), "outerplanarity", 1)
    assert rep.ok and len(rep.blocks) == 2
    g = from_edges(list(complete(4).edges) + [(3, 5), (5, 6), (6, 4)])
    rep = check_3block_class_preservation(g, "outerplanarity", 2)
    k4 = [b for b in rep.blocks if b.kind == "three_connected"]
    assert rep.ok and k4[0].value == 2
    assert check_3block_class_preservation(g, "planar").ok


def test_derive_spanning_sets_examples():
    k4 = complete(4)
    t = root_orient(spanning_forest(k4), 1)
    ss = derive_spanning_sets(k4, t)
    assert ss.root_set == {1} and not ss.added
    g = two_k4s()
    t = root_orient(spanning_forest(g, [(1, 2), (1, 3), (1, 4), (3, 5), (5, 6)]), 1)
    ss = derive_spanning_sets(g, t)
    assert not ss.conflicts
    for key, tr in ss.trees.items():
        h = tr.host
        assert len(tr.tree_edges) == h.n - 1
        assert is_connected(from_edges(tr.tree_edges, vertices=h.vertices))
    # the tree restricted to {3,4,5,6} is {3,5},{5,6} plus the isolated 4:
    # the cut edge {3,4} joins them
    assert edge(3, 4) in ss.added
    with pytest.raises(NotRooted):
        derive_spanning_sets(k4, spanning_forest(k4))


# -- properties -------------------------------------------------------------------

seeds = st.integers(0, 10 ** 6)


def _two_connected(n, k, seed):
    try:
        g = generate_2connected(n, k, seed).graph
    except Exception:
        return None
    return g if is_two_connected(g) else None


@given(st.integers(4, 20), st.integers(1, 3), seeds)
def test_tutte_axioms_on_generated(n, k, seed):
    g = _two_connected(n, k, seed)
    if g is None:
        return
    td3 = tutte_decomposition(g)
    rep = validate_tutte(g, td3)
    assert rep.valid, rep.violations
    if td3.cut_bags:
        assert rep.adhesion == 2
    covered = set()
    for j, w in enumerate(td3.block_bags):
        h = three_block_graph(td3, j)
        if td3.kinds[j] == "cycle":
            assert h.m == h.n and all(h.degree(v) == 2 for v in h.vertices)
        else:
            assert is_l_connected(h, 3)
        covered |= set(induced_subgraph(g, w).edges)
    assert covered == g.edge_set
    for x, y in td3.virtual_edges:
        assert not is_connected(g, {x, y})


@given(st.integers(4, 10), st.integers(1, 2), seeds)
def test_w_paths_sharing_internal_vertex_share_endpoints(n, k, seed):
    g = _two_connected(n, k, seed)
    if g is None:
        return
    td3 = tutte_decomposition(g)
    for w in td3.block_bags:
        ps = w_paths(g, w)
        for p, q in itertools.combinations(ps, 2):
            if set(p[1:-1]) & set(q[1:-1]):
                assert {p[0], p[-1]} == {q[0], q[-1]}


@given(st.integers(4, 20), st.integers(1, 3), seeds, st.data())
def test_spanning_sets_are_spanning_trees(n, k, seed, data):
    try:
        g = generate_kop(n, k, seed).graph
    except Exception:
        return
    t = spanning_forest(g, data.draw(st.permutations(list(g.edges))))
    t = root_orient(t, data.draw(st.sampled_from(g.vertices)))
    ss = derive_spanning_sets(g, t)
    assert not ss.conflicts
    for (bi, w), tr in ss.trees.items():
        assert len(tr.tree_edges) == len(w) - 1
        assert is_connected(from_edges(tr.tree_edges, vertices=w))
        assert tr.root == ss.roots[(bi, w)]
        # orientations of global tree edges are kept
        for c, p in tr.parent.items():
            if edge(c, p) in t.tree_edges:
                assert t.parent_of(c) == p
