"""Command line: koptd <verb> [options].

Exit codes: 0 success (or a true verdict), 1 property failure (or false),
2 input error, 3 evaluation budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import io
from .errors import GraphError, NotPlanar
from .generate import GenConfig, Infeasible, generate
from .graph import Graph, is_connected
from .msol import (DEFAULT_BUDGET, BudgetExceeded, SortError, Structure, UnboundVariable,
                   check_budget, evaluate, parse_formula)
from .msol import SyntaxError as FormulaSyntaxError
from .msol.evaluate import Evaluator, _prepare_env
from .planarity import (best_outer_face, check_layer_characterization, embed,
                        face_layer_numbers, stripping_layers, vertex_layers)
from .remember import OBJECTIVES, exact_min_remember, remember_report, synthesize_spanning_tree
from .treedec import td_3connected_kop, td_from_er_fr, td_from_vr_er, validate, width
from .tutte import is_two_connected, tutte_decomposition, validate_tutte

OK, FAIL, INPUT, BUDGET = 0, 1, 2, 3
METHODS = ("vr-er", "er-fr", "3conn", "full")


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code


# --------------------------------------------------------------------------
# output helpers

class Output:
    def __init__(self, args):
        self.args = args
        self.started = time.perf_counter()

    def report(self, command: str, payload: dict, ok: bool, dot: str | None = None) -> int:
        rep = {"schema": io.SCHEMA_VERSION, "command": command, "ok": ok, **payload}
        if getattr(self.args, "timings", False):
            rep["elapsed_s"] = round(time.perf_counter() - self.started, 6)
        text = io.dumps(rep)
        if self.args.format == "dot" and dot is not None:
            sys.stdout.write(dot)
        else:
            sys.stdout.write(text)
        return OK if ok else FAIL


def _load(path: str) -> io.GraphFile:
    return io.read_graph(path)


def _write(prefix: str | None, name: str, text: str) -> str | None:
    if not prefix:
        return None
    p = Path(f"{prefix}{name}")
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)
    return str(p)


def _embedding(gf: io.GraphFile):
    emb = embed(gf.graph, gf.rotation)
    if not hasattr(emb, "faces"):
        raise NotPlanar("graph is not planar")
    return emb


# --------------------------------------------------------------------------
# verbs

def cmd_layers(args, out: Output) -> int:
    gf = _load(args.input)
    g = gf.graph
    emb = best_outer_face(_embedding(gf))
    p = stripping_layers(g, emb)
    ok = check_layer_characterization(g, p)
    payload = {"k": p.k, "layers": [sorted(l) for l in p.layers],
               "outer_face": _outer_walk(emb),
               "characterization": ok}
    return out.report("layers", payload, ok)


def _outer_walk(emb) -> list[int]:
    fs = [f for f in emb.faces if f.id == emb.outer_face]
    return list(fs[0].walk) if fs else []


def _tree(g: Graph, emb, k: int):
    t, rep = synthesize_spanning_tree(g, k, emb)
    return t, rep


def cmd_treedec(args, out: Output) -> int:
    gf = _load(args.input)
    g = gf.graph
    if not is_connected(g):
        raise io.InputError("graph is not connected")
    emb = best_outer_face(_embedding(gf))
    k = args.k if args.k is not None else stripping_layers(g, emb).k
    extra: dict = {}
    if args.method == "vr-er":
        t, rep = _tree(g, emb, k)
        td = td_from_vr_er(g, t)
        bound = max(rep.vr, rep.er + 1)
        extra = {"vr": rep.vr, "er": rep.er}
    elif args.method == "er-fr":
        t, rep = _tree(g, emb, k)
        td = td_from_er_fr(g, t, emb)
        bound = max(rep.er + 1, 3 * rep.fr)
        extra = {"er": rep.er, "fr": rep.fr}
    elif args.method == "3conn":
        res = td_3connected_kop(g, k, emb=emb)
        td = res.td
        bound = res.bound
        extra = {"er": res.er, "fr": res.fr, "max_degree": td.max_degree(),
                 "single_root": td.root() is not None}
    else:
        from .assemble import assemble
        asm = assemble(g, k)
        td = asm.td
        rep = asm.report
        bound = 3 * k + 3 if rep.within_3k else rep.max_block_width + 3
        extra = {"assembly": rep.as_dict()}
    v = validate(g, td)
    w = width(td)
    ok = v.valid and w <= bound
    if args.method == "3conn":
        ok = ok and extra["max_degree"] <= 3 and extra["single_root"]
    td_json = io.dumps(io.td_to_json(td))
    dot = io.td_to_dot(td)
    files = [f for f in (_write(args.out, ".json", td_json), _write(args.out, ".dot", dot)) if f]
    payload = {"method": args.method, "k": k, "width": w, "bound": bound,
               "validation": v.as_dict(), "files": files, **extra}
    if args.format == "json" and not args.out:
        payload["decomposition"] = io.td_to_json(td)
    return out.report("treedec", payload, ok, dot)


def cmd_tutte(args, out: Output) -> int:
    from .tutte import block_decomposition
    gf = _load(args.input)
    g = gf.graph
    bd = block_decomposition(g)
    blocks = []
    dots = []
    ok = True
    for i, b in enumerate(bd.blocks):
        bg = bd.block_graph(i)
        entry: dict = {"vertices": sorted(b)}
        if is_two_connected(bg):
            td3 = tutte_decomposition(bg)
            v = validate_tutte(bg, td3)
            ok = ok and v.valid
            tdj = io.td_to_json(td3.as_tree_decomposition())
            entry.update({"cut_bags": [sorted(c) for c in td3.cut_bags],
                          "three_blocks": [{"vertices": sorted(x), "kind": kd}
                                           for x, kd in zip(td3.block_bags, td3.kinds)],
                          "links": sorted([c, bi] for c, bi in td3.links),
                          "adhesion": v.adhesion, "valid": v.valid,
                          "decomposition": tdj})
            dots.append(io.td_to_dot(td3.as_tree_decomposition(), f"B{i}"))
        else:
            entry.update({"cut_bags": [], "three_blocks": [], "links": [], "adhesion": 0,
                          "valid": True})
        blocks.append(entry)
    payload = {"cut_vertices": list(bd.cut_vertices), "blocks": blocks,
               "block_tree": sorted([c, i] for c, i in bd.tree)}
    text = io.dumps({"blocks": blocks, "cut_vertices": list(bd.cut_vertices)})
    files = [f for f in (_write(args.out, ".json", text),
                         _write(args.out, ".dot", "".join(dots))) if f]
    payload["files"] = files
    return out.report("tutte", payload, ok, "".join(dots))


def _assignment(raw: str | None) -> dict:
    if not raw:
        return {}
    try:
        text = Path(raw).read_text() if Path(raw).is_file() else raw
        d = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise io.InputError(f"bad assignment: {exc}") from exc
    if not isinstance(d, dict):
        raise io.InputError("assignment must be a JSON object")

    def conv(x):
        if isinstance(x, list):
            items = [tuple(y) if isinstance(y, list) else y for y in x]
            if len(x) == 2 and all(isinstance(y, int) for y in x) and not any(
                    isinstance(y, list) for y in x):
                return items            # ambiguous pair: decided by the sort below
            return frozenset(items)
        return x
    return {k: conv(v) for k, v in d.items()}


def _coerce(var, value):
    """Assignment values by sort: an edge is a pair, a set a list."""
    if var.sort == "e":
        return tuple(value)
    if var.sort in ("V", "E"):
        if isinstance(value, list):
            return frozenset(tuple(x) if isinstance(x, list) else x for x in value)
        return frozenset(value)
    return value


def cmd_msol(args, out: Output) -> int:
    gf = _load(args.input)
    g = gf.graph
    src = args.formula
    if not src.startswith("@") and Path(src).is_file():
        src = Path(src).read_text()
    f = parse_formula(src.strip())
    a = _assignment(args.assign)
    values = {}
    for var in f.free:
        if var.name in a:
            values[var.name] = _coerce(var, a[var.name])
        elif var.sort == "V":
            values[var.name] = frozenset(g.vertices)
        elif var.sort == "E":
            values[var.name] = frozenset(g.edges)
        else:
            raise UnboundVariable(var.name)
    s = Structure(g, args.mode)
    cost = check_budget(s, f, args.budget)
    ev = Evaluator(s, args.budget)
    env = _prepare_env(ev, f, values)
    result = ev.compile_formula(f)(env)
    payload = {"result": result, "estimated_cost": cost, "subcalls": ev.calls,
               "defaults": sorted(v.name for v in f.free if v.name not in a)}
    return out.report("msol", payload, result)


def cmd_validate(args, out: Output) -> int:
    g = _load(args.input).graph
    td = io.read_td(args.td)
    v = validate(g, td)
    return out.report("validate", {"validation": v.as_dict(), "width": v.width}, v.valid)


def cmd_gen(args, out: Output) -> int:
    if args.n is None or args.k is None:
        raise io.InputError("gen needs --n and --k")
    cfg = GenConfig(n=args.n, k=args.k, seed=args.seed)
    try:
        gen = generate(cfg)
    except (Infeasible, ValueError) as exc:
        raise io.InputError(str(exc)) from exc
    d = io.graph_to_json(gen.graph, gen.rotation, gen.layers)
    text = io.dumps(d)
    if args.out:
        _write(args.out, "", text)
    if args.format == "dot":
        sys.stdout.write(io.graph_to_dot(gen.graph))
    else:
        sys.stdout.write(text)
    return OK


def cmd_spantree(args, out: Output) -> int:
    gf = _load(args.input)
    g = gf.graph
    if not is_connected(g):
        raise io.InputError("graph is not connected")
    emb = best_outer_face(_embedding(gf))
    k = args.k if args.k is not None else stripping_layers(g, emb).k
    if args.objective:
        t, best = exact_min_remember(g, emb, args.objective)
        rep = remember_report(g, t, emb)
    else:
        t, rep = synthesize_spanning_tree(g, k, emb)
        best = None
    payload = {"k": k, "tree_edges": sorted(list(e) for e in t.tree_edges),
               "remember": rep.as_dict(), "er_le_2k": rep.er <= 2 * k, "fr_le_k": rep.fr <= k}
    if best is not None:
        payload["objective"] = args.objective
        payload["optimum"] = best
    return out.report("spantree", payload, True)


def cmd_embed(args, out: Output) -> int:
    gf = _load(args.input)
    emb = best_outer_face(_embedding(gf)) if gf.rotation is None else _embedding(gf)
    fl = face_layer_numbers(emb)
    vl = vertex_layers(emb)
    payload = {"outer_face": emb.outer_face,
               "rotation": {str(v): list(emb.rotation[v]) for v in gf.graph.vertices},
               "faces": [{"id": f.id, "walk": list(f.walk), "layer": fl[f.id]}
                         for f in emb.faces],
               "vertex_layers": {str(v): vl[v] for v in gf.graph.vertices}}
    return out.report("embed", payload, True)


VERBS = {"layers": cmd_layers, "treedec": cmd_treedec, "tutte": cmd_tutte, "msol": cmd_msol,
         "validate": cmd_validate, "gen": cmd_gen, "spantree": cmd_spantree, "embed": cmd_embed}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="koptd", description="Tree decompositions of "
                                 "k-outerplanar graphs from spanning trees, with checkers.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--out", default=None, help="output path prefix")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timings", action="store_true",
                        help="add wall-clock time to the report (breaks byte-identity)")
    sub = ap.add_subparsers(dest="verb", required=True)
    for name in ("layers", "tutte", "embed"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input")
    p = sub.add_parser("treedec", parents=[common])
    p.add_argument("input")
    p.add_argument("--method", choices=METHODS, default="full")
    p.add_argument("--k", type=int, default=None)
    p = sub.add_parser("msol", parents=[common])
    p.add_argument("input")
    p.add_argument("formula", help="formula text, a file, or @Name{consts}(args)")
    p.add_argument("--assign", default=None, help="JSON object or file: variable -> value")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--mode", choices=("one", "two"), default="two")
    p = sub.add_parser("validate", parents=[common])
    p.add_argument("input")
    p.add_argument("td")
    p = sub.add_parser("gen", parents=[common])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p = sub.add_parser("spantree", parents=[common])
    p.add_argument("input")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--objective", choices=sorted(OBJECTIVES), default=None,
                   help="exact minimum over all spanning trees (small graphs)")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return INPUT if exc.code else OK
    out = Output(args)
    try:
        return VERBS[args.verb](args, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except NotPlanar as exc:
        out.report(args.verb, {"error": "NotPlanar", "message": str(exc)}, False)
        return FAIL
    except (io.InputError, FormulaSyntaxError, SortError, UnboundVariable) as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INPUT
    except GraphError as exc:
        print(f"input error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return INPUT


if __name__ == "__main__":
    sys.exit(main())
