import json

import pytest

from conftest import complete, cycle, theta
from koptd import io
from koptd.cli import BUDGET, FAIL, INPUT, OK, main
from koptd.graph import from_edges
from koptd.planarity import outerplanarity_index


def write_graph(tmp_path, g, name="g.json"):
    p = tmp_path / name
    p.write_text(io.dumps(io.graph_to_json(g)))
    return str(p)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def report(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_layers_examples(tmp_path, capsys):
    code, rep = report(capsys, "layers", write_graph(tmp_path, complete(4)))
    assert code == OK and rep["k"] == 2 and rep["layers"] == [[2, 3, 4], [1]]
    code, rep = report(capsys, "layers", write_graph(tmp_path, cycle(4)))
    assert code == OK and rep["k"] == 1
    code, rep = report(capsys, "layers", write_graph(tmp_path, complete(5)))
    assert code == FAIL and rep["error"] == "NotPlanar"


@pytest.mark.parametrize("method", ["vr-er", "er-fr", "3conn", "full"])
def test_treedec_k4(tmp_path, capsys, method):
    args = ["treedec", write_graph(tmp_path, complete(4)), "--method", method]
    if method == "3conn":
        args += ["--k", "2"]
    code, rep = report(capsys, *args)
    assert code == OK and rep["validation"]["valid"]
    assert rep["width"] <= rep["bound"]
    if method == "vr-er":
        assert rep["width"] <= 3
    if method == "3conn":
        assert rep["max_degree"] <= 3 and rep["single_root"]


def test_treedec_theta_full_writes_files(tmp_path, capsys):
    prefix = tmp_path / "out" / "theta"
    code, rep = report(capsys, "treedec", write_graph(tmp_path, theta()), "--method", "full",
                       "--k", "1", "--out", prefix)
    assert code == OK and rep["width"] <= 6
    assert sorted(rep["files"]) == [f"{prefix}.dot", f"{prefix}.json"]
    td = io.read_td(f"{prefix}.json")
    code, rep = report(capsys, "validate", write_graph(tmp_path, theta()), f"{prefix}.json")
    assert code == OK and rep["width"] == max(len(b) for b in td.bags) - 1


def test_treedec_precondition_is_input_error(tmp_path, capsys):
    code, _ = run(capsys, "treedec", write_graph(tmp_path, cycle(5)), "--method", "3conn")
    assert code == INPUT
    code, _ = run(capsys, "treedec", write_graph(tmp_path, from_edges([(1, 2), (3, 4)])))
    assert code == INPUT


def test_tutte_examples(tmp_path, capsys):
    code, rep = report(capsys, "tutte", write_graph(tmp_path, theta()))
    assert code == OK
    (blk,) = rep["blocks"]
    assert blk["cut_bags"] == [[1, 4]]
    assert [b["kind"] for b in blk["three_blocks"]] == ["cycle", "cycle"]
    assert blk["adhesion"] == 2
    code, rep = report(capsys, "tutte", write_graph(tmp_path, complete(4)))
    assert code == OK and len(rep["blocks"]) == 1
    assert rep["blocks"][0]["cut_bags"] == []
    bowtie = from_edges([(1, 2), (2, 3), (3, 1), (3, 4), (4, 5), (5, 3)])
    code, rep = report(capsys, "tutte", write_graph(tmp_path, bowtie))
    assert code == OK and rep["cut_vertices"] == [3]
    assert all(b["cut_bags"] == [] for b in rep["blocks"]) and len(rep["blocks"]) == 2


def test_validate_missing_edge_bag(tmp_path, capsys):
    tdp = tmp_path / "td.json"
    tdp.write_text(json.dumps({"bags": [[1, 2], [2, 3], [3, 4]], "tree_edges": [[0, 1], [1, 2]]}))
    code, rep = report(capsys, "validate", write_graph(tmp_path, cycle(4)), tdp)
    assert code == FAIL
    assert ["ii", repr((1, 4))] in rep["validation"]["violations"]
    tdp.write_text(json.dumps({"bags": [[1, 2, 4], [2, 3, 4]], "tree_edges": [[0, 1]]}))
    code, rep = report(capsys, "validate", write_graph(tmp_path, cycle(4)), tdp)
    assert code == OK and rep["width"] == 2


def test_msol_verdicts_and_errors(tmp_path, capsys):
    c4, k4 = write_graph(tmp_path, cycle(4), "c4.json"), write_graph(tmp_path, complete(4), "k4.json")
    code, rep = report(capsys, "msol", c4, "@Outerplanar")
    assert code == OK and rep["result"] is True
    code, rep = report(capsys, "msol", k4, "@Outerplanar")
    assert code == FAIL and rep["result"] is False
    code, rep = report(capsys, "msol", c4, "@Conn(W, F)", "--assign", '{"W": [1, 2, 3, 4]}')
    assert code == OK and rep["defaults"] == ["F"]
    assert run(capsys, "msol", c4, "exists v . (v in V")[0] == INPUT
    assert run(capsys, "msol", c4, "Inc(v, e)")[0] == INPUT          # unbound element variables
    assert run(capsys, "msol", c4, "@NoSuchThing")[0] == INPUT
    big = write_graph(tmp_path, cycle(10), "c10.json")
    deep = "exists A:V . exists B:V . exists C:V . exists D:E . (A = B & C = A & D = E)"
    assert run(capsys, "msol", big, deep, "--budget", "1000")[0] == BUDGET


def test_gen_examples(tmp_path, capsys):
    code, out = run(capsys, "gen", "--n", 3, "--k", 1, "--seed", 5)
    assert code == OK
    g = io.parse_graph(out).graph
    assert g.n == 3 and g.m == 3
    code, out = run(capsys, "gen", "--n", 8, "--k", 1, "--seed", 1)
    gf = io.parse_graph(out)
    assert gf.graph.n == 8 and outerplanarity_index(gf.graph) == 1
    code, out = run(capsys, "gen", "--n", 12, "--k", 2, "--seed", 1)
    gf = io.parse_graph(out)
    assert gf.graph.n == 12 and outerplanarity_index(gf.graph) <= 2
    assert len(gf.layers) == 2 and gf.rotation is not None
    assert run(capsys, "gen", "--n", 3, "--k", 5)[0] == INPUT
    assert run(capsys, "gen", "--n", 2, "--k", 1)[0] == INPUT


def test_spantree_and_embed(tmp_path, capsys):
    k4 = write_graph(tmp_path, complete(4))
    code, rep = report(capsys, "spantree", k4, "--objective", "fr")
    assert code == OK and rep["optimum"] == 3
    code, rep = report(capsys, "embed", k4)
    assert code == OK and len(rep["faces"]) == 4


def test_bad_input_file(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("1 x\n")
    assert run(capsys, "layers", p)[0] == INPUT
    assert run(capsys, "layers", tmp_path / "missing.json")[0] == INPUT
    assert run(capsys, "frobnicate")[0] == INPUT


def test_outputs_are_deterministic(tmp_path, capsys):
    g = write_graph(tmp_path, theta())
    for argv in (["treedec", g, "--method", "full"], ["tutte", g], ["embed", g],
                 ["gen", "--n", 14, "--k", 2, "--seed", 9]):
        first = run(capsys, *argv)
        assert run(capsys, *argv) == first
