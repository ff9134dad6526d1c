import pytest
from hypothesis import given, strategies as st

from conftest import complete, cycle, path
from koptd.errors import TooLarge
from koptd.generate import generate_kop
from koptd.graph import edge, from_edges, fundamental_cycle, spanning_forest
from koptd.planarity import embed, require_embedding, stripping_layers
from koptd.remember import (count_spanning_trees, edge_remember, exact_min_remember,
                            face_remember, iter_spanning_trees, remember_report,
                            synthesize_spanning_tree, vertex_remember)


def outer(emb, vs):
    fid = next(f.id for f in emb.faces if f.boundary_vertices == frozenset(vs))
    return emb.with_outer_face(fid)


def c4_path():
    g = cycle(4)
    return g, spanning_forest(g, [(1, 2), (2, 3), (3, 4)])


def k4_star():
    g = complete(4)
    return g, spanning_forest(g, [(1, 2), (1, 3), (1, 4)])


def test_vertex_remember_examples():
    assert vertex_remember(*c4_path()) == 1
    assert vertex_remember(*k4_star()) == 3
    p = path(5)
    assert vertex_remember(p, spanning_forest(p)) == 0


def test_edge_remember_examples():
    assert edge_remember(*c4_path()) == 1
    assert edge_remember(*k4_star()) == 2
    p = path(5)
    assert edge_remember(p, spanning_forest(p)) == 0


def test_face_remember_examples():
    g, t = c4_path()
    assert face_remember(g, t, embed(g)) == 1
    g, t = k4_star()
    assert face_remember(g, t, outer(embed(g), {2, 3, 4})) == 3
    p = path(5)
    assert face_remember(p, spanning_forest(p), embed(p)) == 0


def test_synthesize_examples():
    g = cycle(4)
    t, rep = synthesize_spanning_tree(g, 1, embed(g))
    assert rep.er == 1 and rep.fr == 1
    k4 = complete(4)
    t, rep = synthesize_spanning_tree(k4, 2, outer(embed(k4), {2, 3, 4}))
    assert rep.fr == 3 and rep.er <= 3
    c7 = cycle(7)
    t, rep = synthesize_spanning_tree(c7, 1, embed(c7))
    assert (rep.er, rep.fr) == (1, 1)


def test_exact_min_examples():
    g = cycle(4)
    assert exact_min_remember(g, embed(g), "er")[1] == 1
    k4 = complete(4)
    assert count_spanning_trees(k4) == 16
    # K4's minimum face remember number is 3 for every outer-face choice
    for f in embed(k4).faces:
        assert exact_min_remember(k4, embed(k4).with_outer_face(f.id), "fr")[1] == 3
    p = path(4)
    for obj in ("vr", "er", "fr", "max(er+1,3fr)"):
        assert exact_min_remember(p, embed(p), obj)[1] == (1 if obj == "max(er+1,3fr)" else 0)


def test_exact_min_too_large():
    g = from_edges([(i, j) for i in range(12) for j in range(i + 1, 12) if j - i <= 3])
    with pytest.raises(TooLarge):
        exact_min_remember(g, None, "er")


def test_spanning_tree_count_matches_enumeration():
    for g in (complete(4), cycle(6), complete(5)):
        assert count_spanning_trees(g) == sum(1 for _ in iter_spanning_trees(g))


# -- properties ------------------------------------------------------------------

seeds = st.integers(0, 10 ** 6)


def _instance(n, k, seed):
    try:
        gen = generate_kop(n, k, seed)
    except Exception:
        return None
    return gen.graph, gen.embedding()


@given(st.integers(3, 14), st.integers(1, 3), seeds, st.data())
def test_witnesses_are_consistent(n, k, seed, data):
    inst = _instance(n, k, seed)
    if inst is None:
        return
    g, emb = inst
    t = spanning_forest(g, data.draw(st.permutations(list(g.edges))))
    rep = remember_report(g, t, emb)
    for name in ("vr", "er", "fr"):
        w = rep.witnesses.get(name)
        if w is None:
            assert getattr(rep, name) == 0
            continue
        assert len(w.cycles) == getattr(rep, name)
        for e in w.cycles:
            vs, es = fundamental_cycle(g, t, e)
            if name == "vr":
                assert w.at in vs
            elif name == "er":
                assert tuple(w.at) in es
            else:
                assert es & emb.faces[w.at].boundary_edges
                assert w.at != emb.outer_face


@given(st.integers(3, 9), st.integers(1, 2), seeds)
def test_synthesis_never_beats_exact(n, k, seed):
    inst = _instance(n, k, seed)
    if inst is None:
        return
    g, emb = inst
    kk = stripping_layers(g, emb).k
    _, rep = synthesize_spanning_tree(g, kk, emb)
    _, best_fr = exact_min_remember(g, emb, "fr")
    assert rep.fr >= best_fr


@given(st.integers(4, 14), st.integers(1, 3), seeds, st.data())
def test_removing_non_tree_edge_is_monotone(n, k, seed, data):
    inst = _instance(n, k, seed)
    if inst is None:
        return
    g, emb = inst
    t = spanning_forest(g, data.draw(st.permutations(list(g.edges))))
    if not t.non_tree_edges:
        return
    drop = data.draw(st.sampled_from(t.non_tree_edges))
    h = from_edges([e for e in g.edges if e != drop], vertices=g.vertices)
    th = spanning_forest(h, sorted(t.tree_edges))
    assert th.tree_edges == t.tree_edges
    # keep the same drawing: drop the edge from the rotation system
    rot = {v: tuple(w for w in emb.rotation[v] if edge(v, w) != drop) for v in g.vertices}
    emb_h = require_embedding(h, rot)
    outer_edges = emb.faces[emb.outer_face].boundary_edges - {drop}
    emb_h = emb_h.with_outer_face(next(f.id for f in emb_h.faces
                                       if outer_edges <= f.boundary_edges))
    before, after = remember_report(g, t, emb), remember_report(h, th, emb_h)
    assert after.vr <= before.vr and after.er <= before.er
    # the two faces at the dropped edge merge, so fr can grow, but at most to
    # the union of two cycle sets
    assert after.fr <= 2 * before.fr
