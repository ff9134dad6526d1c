import pytest
from hypothesis import given, strategies as st

from conftest import complete, cycle, path, prism, wheel
from koptd.errors import NoCommonVertex, NotAPartition, NotFaceAdjacentAnchors, NotPlanar
from koptd.generate import generate_2connected, generate_3connected, generate_kop
from koptd.graph import edge, from_edges, induced_subgraph
from koptd.minors import is_outerplanar, is_outerplanar_by_minors
from koptd.planarity import (LayerPartition, NonPlanar, best_outer_face,
                             check_layer_characterization, embed, face_adjacent,
                             face_boundaries_3connected, face_layer_numbers, faces,
                             incident_edge_order, is_nonseparating_induced_cycle,
                             lowest_layer_face, require_embedding, rotation_edge_order,
                             stripping_layers, vertex_layers)


def outer(emb, vs):
    fid = next(f.id for f in emb.faces if f.boundary_vertices == frozenset(vs))
    return emb.with_outer_face(fid)


def nested_squares():
    """Outer square 1-2-3-4, inner square 5-6-7-8, spokes i -- i+4."""
    es = [(1, 2), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 8), (8, 5),
          (1, 5), (2, 6), (3, 7), (4, 8)]
    g = from_edges(es)
    return g, outer(require_embedding(g), {1, 2, 3, 4})


def euler_ok(emb):
    g = emb.host
    return g.n - g.m + len(emb.faces) == 2


# -- embed / faces --------------------------------------------------------------

def test_embed_examples():
    emb = embed(complete(4))
    assert len(emb.faces) == 4 and all(len(f.boundary_edges) == 3 for f in emb.faces)
    assert isinstance(embed(complete(5)), NonPlanar)
    assert not embed(complete(5))
    c = embed(cycle(4))
    assert len(c.faces) == 2 and all(len(f.boundary_edges) == 4 for f in c.faces)
    with pytest.raises(NotPlanar):
        require_embedding(complete(5))


def test_faces_of_a_path():
    fs = faces(embed(path(3)))
    assert len(fs) == 1 and len(fs[0].walk) == 4


def test_rotation_hint_used_verbatim():
    gen = generate_kop(15, 2, seed=3)
    emb = embed(gen.graph, gen.rotation)
    assert all(tuple(emb.rotation[v]) == gen.rotation[v] for v in gen.graph.vertices)


# -- layer numbers and stripping ---------------------------------------------------

def test_face_layer_numbers():
    c = embed(cycle(4))
    ln = face_layer_numbers(c)
    assert sorted(ln.values()) == [0, 1]
    k4 = outer(embed(complete(4)), {2, 3, 4})
    ln = face_layer_numbers(k4)
    assert ln[k4.outer_face] == 0
    assert sorted(v for f, v in ln.items() if f != k4.outer_face) == [1, 1, 1]
    g, emb = nested_squares()
    ln = face_layer_numbers(emb)
    inner = next(f.id for f in emb.faces if f.boundary_vertices == {5, 6, 7, 8})
    assert ln[inner] == 2
    assert all(ln[f.id] == 1 for f in emb.faces if f.id not in (inner, emb.outer_face))


def test_stripping_layers_examples():
    p = stripping_layers(cycle(4))
    assert p.k == 1 and p.layers[0] == {1, 2, 3, 4}
    k4 = outer(embed(complete(4)), {2, 3, 4})
    p = stripping_layers(k4.host, k4)
    assert p.layers == (frozenset({2, 3, 4}), frozenset({1}))
    w = wheel(4)
    p = stripping_layers(w)
    assert p.k == 2 and p.layers == (frozenset({1, 2, 3, 4}), frozenset({0}))


def test_check_layer_characterization_examples():
    k4 = complete(4)
    assert check_layer_characterization(k4, LayerPartition((frozenset({2, 3, 4}), frozenset({1}))))
    assert not check_layer_characterization(k4, LayerPartition((frozenset({1, 2, 3, 4}),)))
    c6 = cycle(6)
    assert check_layer_characterization(c6, LayerPartition((frozenset({1, 3, 5}), frozenset({2, 4, 6}))))
    with pytest.raises(NotAPartition):
        check_layer_characterization(k4, LayerPartition((frozenset({1, 2}),)))


def test_nonseparating_cycles():
    k4 = complete(4)
    assert is_nonseparating_induced_cycle(k4, {1, 2, 3})
    assert is_nonseparating_induced_cycle(cycle(4), {1, 2, 3, 4})
    # K4 on 1..4, then the pendant path 4-5-6 hanging off a triangle vertex
    # and the vertex 7 joined to 1: a triangle through 1 and 4 separates 7 from 5, 6
    g = from_edges(list(k4.edges) + [(4, 5), (5, 6), (1, 7)])
    assert not is_nonseparating_induced_cycle(g, {1, 2, 4})


def test_face_boundaries_3connected_examples():
    tri = {frozenset(s) for s in ({1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4})}
    assert face_boundaries_3connected(complete(4)) == tri
    w = face_boundaries_3connected(wheel(4))
    assert w == {frozenset({0, i, i % 4 + 1}) for i in range(1, 5)} | {frozenset({1, 2, 3, 4})}
    p = face_boundaries_3connected(prism())
    assert sorted(len(c) for c in p) == [3, 3, 4, 4, 4]


def test_face_adjacent_examples():
    emb = embed(complete(4))
    assert face_adjacent(emb, (1, 2), (1, 3))
    w = embed(wheel(4))
    assert not face_adjacent(w, (0, 1), (0, 3))
    assert face_adjacent(w, (0, 1), (0, 1))
    with pytest.raises(NoCommonVertex):
        face_adjacent(emb, (1, 2), (3, 4))


def test_incident_edge_order_examples():
    w = wheel(4)
    assert incident_edge_order(w, 0, (0, 1), (0, 2)) == [(0, 1), (0, 4), (0, 3), (0, 2)]
    k4 = complete(4)
    order = incident_edge_order(k4, 1, (1, 2), (1, 3))
    assert order == [(1, 2), (1, 4), (1, 3)]
    assert incident_edge_order(k4, 1, (1, 2), (1, 4)) == [(1, 2), (1, 3), (1, 4)]
    with pytest.raises(NotFaceAdjacentAnchors):
        incident_edge_order(w, 0, (0, 1), (0, 3))


def test_lowest_layer_face_examples():
    k4 = outer(embed(complete(4)), {2, 3, 4})
    ln = face_layer_numbers(k4)
    f = lowest_layer_face(k4, 1)
    assert ln[f.id] == 1
    c = embed(cycle(4))
    assert lowest_layer_face(c, 1).id == c.outer_face
    g, emb = nested_squares()
    ln = face_layer_numbers(emb)
    assert ln[lowest_layer_face(emb, 5).id] == 1


# -- properties on generated instances -------------------------------------------

seeds = st.integers(0, 10 ** 6)


@given(st.integers(4, 25), st.integers(1, 3), seeds)
def test_euler_and_stripping(n, k, seed):
    try:
        gen = generate_kop(n, k, seed)
    except Exception:
        return
    emb = gen.embedding()
    assert euler_ok(emb)
    p = stripping_layers(gen.graph, emb)
    assert p.k <= k
    assert check_layer_characterization(gen.graph, p)


@given(st.integers(4, 20), st.integers(1, 3), seeds)
def test_vertex_faces_have_layer_i_or_i_minus_1(n, k, seed):
    try:
        gen = generate_kop(n, k, seed)
    except Exception:
        return
    emb = gen.embedding()
    vl, fl = vertex_layers(emb), face_layer_numbers(emb)
    for v in gen.graph.vertices:
        for f in emb.faces_at[v]:
            assert fl[f] in (vl[v], vl[v] - 1)
            bd = emb.faces[f].boundary_vertices
            if any(vl[w] == vl[v] - 1 for w in bd):
                assert fl[f] == vl[v] - 1


@given(st.integers(5, 12), seeds)
def test_face_family_equals_nonseparating_cycles(n, seed):
    gen = generate_3connected(n, seed)
    g = gen.graph
    emb = require_embedding(g)
    assert {f.boundary_vertices for f in emb.faces} == face_boundaries_3connected(g)


@given(st.integers(5, 12), seeds, st.data())
def test_reverse_anchor_reverses_order(n, seed, data):
    gen = generate_3connected(n, seed)
    g = gen.graph
    emb = require_embedding(g)
    v = data.draw(st.sampled_from(g.vertices))
    ns = [edge(v, w) for w in emb.rotation[v]]
    a, b = ns[0], ns[1]
    fwd = incident_edge_order(g, v, a, b)
    assert fwd == rotation_edge_order(emb, v, a, b)
    # the reverse pair: start at the co-anchor, end at the anchor
    back = incident_edge_order(g, v, b, a)
    assert back == list(reversed(fwd))


@given(st.integers(4, 20), st.integers(1, 3), seeds)
def test_two_connected_faces_pairwise_distinct(n, k, seed):
    try:
        gen = generate_2connected(n, k, seed)
    except Exception:
        return
    emb = gen.embedding()
    from koptd.tutte import is_two_connected
    if not is_two_connected(gen.graph):
        return
    for v in gen.graph.vertices:
        sec = emb.sector_faces(v)
        assert len(sec) == len(set(sec))


@given(st.integers(3, 9), seeds)
def test_outerplanarity_oracles_agree(n, seed):
    import random
    rng = random.Random(seed)
    es = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4}
    g = from_edges(es, vertices=range(n))
    assert is_outerplanar(g) == is_outerplanar_by_minors(g)


@given(st.integers(3, 9), seeds)
def test_index_one_iff_outerplanar(n, seed):
    import random
    from koptd.graph import is_connected
    from koptd.planarity import outerplanarity_index
    rng = random.Random(seed)
    es = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.45}
    g = from_edges(es, vertices=range(n))
    if not es or not is_connected(g) or isinstance(embed(g), NonPlanar):
        return
    assert (outerplanarity_index(g, exhaustive=True) == 1) == is_outerplanar(g)


def test_corpus_counts():
    from koptd.corpus import PLANAR_CONNECTED_COUNTS, connected_graphs
    got = {}
    for g in connected_graphs(8, planar=True):
        got[g.n] = got.get(g.n, 0) + 1
    assert got == PLANAR_CONNECTED_COUNTS
    assert len(connected_graphs(6)) == 1 + 1 + 2 + 6 + 21 + 112
    assert all(g.m <= 8 for g in connected_graphs(6, m_max=8))
