"""Graph and decomposition files.

Graph JSON: ``{"vertices": [int...], "edges": [[u, v]...]}`` plus optional
``"embedding_hint": {vertex: [edge index, ...]}`` (the edges at each vertex
in rotation order) and ``"layers"`` (the intended layer partition).  Edge
lists: one ``u v`` pair per line, a lone integer declares an isolated
vertex, ``#`` starts a comment.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import GraphError
from .graph import Graph, build_graph, edge
from .treedec import Label, TreeDecomposition

SCHEMA_VERSION = 1


class InputError(GraphError):
    pass


@dataclass(frozen=True)
class GraphFile:
    graph: Graph
    rotation: dict[int, tuple[int, ...]] | None = field(default=None, compare=False)
    layers: tuple[frozenset[int], ...] | None = None


def dumps(obj) -> str:
    """Deterministic JSON (sorted keys, fixed separators, trailing newline)."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"


# --------------------------------------------------------------------------
# graphs

def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        try:
            if isinstance(x, str) and x.strip().lstrip("-").isdigit():
                return int(x)
        except ValueError:
            pass
        raise InputError(f"{what} must be an integer, got {x!r}")
    return x


def graph_from_json(d) -> GraphFile:
    if not isinstance(d, dict) or "edges" not in d:
        raise InputError("graph JSON needs an 'edges' list")
    edges = []
    for p in d["edges"]:
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise InputError(f"edge {p!r} is not a pair")
        edges.append((_int(p[0], "endpoint"), _int(p[1], "endpoint")))
    verts = d.get("vertices")
    if verts is None:
        verts = sorted({x for e in edges for x in e})
    g = build_graph([_int(v, "vertex") for v in verts], edges)
    rot = None
    hint = d.get("embedding_hint")
    if hint:
        rot = {}
        for v, idxs in hint.items():
            v = _int(v, "vertex")
            ns = []
            for i in idxs:
                i = _int(i, "edge index")
                if not 0 <= i < len(edges):
                    raise InputError(f"edge index {i} out of range")
                a, b = edges[i]
                if v not in (a, b):
                    raise InputError(f"edge {i} is not incident to {v}")
                ns.append(b if a == v else a)
            rot[v] = tuple(ns)
    layers = None
    if d.get("layers") is not None:
        layers = tuple(frozenset(_int(v, "vertex") for v in l) for l in d["layers"])
    return GraphFile(g, rot, layers)


def graph_from_edgelist(text: str) -> GraphFile:
    verts: list[int] = []
    edges: list[tuple[int, int]] = []
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts]
        except ValueError as exc:
            raise InputError(f"line {no}: expected integers, got {line!r}") from exc
        if len(nums) == 1:
            verts.append(nums[0])
        elif len(nums) == 2:
            edges.append((nums[0], nums[1]))
        else:
            raise InputError(f"line {no}: expected 'u v', got {line!r}")
    allv = sorted(set(verts) | {x for e in edges for x in e})
    return GraphFile(build_graph(allv, edges))


def parse_graph(text: str) -> GraphFile:
    """JSON if the text starts with '{', else an edge list."""
    s = text.lstrip()
    if s.startswith("{"):
        try:
            d = json.loads(s)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON: {exc}") from exc
        return graph_from_json(d)
    return graph_from_edgelist(text)


def read_graph(path: str | Path) -> GraphFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text)


def graph_to_json(g: Graph, rotation=None, layers=None) -> dict:
    d: dict = {"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]}
    if rotation is not None:
        idx = g.edge_index
        d["embedding_hint"] = {str(v): [idx[edge(v, w)] for w in rotation[v]]
                               for v in g.vertices}
    if layers is not None:
        d["layers"] = [sorted(l) for l in layers]
    return d


def graph_to_edgelist(g: Graph) -> str:
    lines = [f"{u} {v}" for u, v in g.edges]
    used = {x for e in g.edges for x in e}
    lines += [str(v) for v in g.vertices if v not in used]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# tree decompositions

def _jsonable(x):
    if isinstance(x, (tuple, list, frozenset, set)):
        items = sorted(x) if isinstance(x, (frozenset, set)) else x
        return [_jsonable(y) for y in items]
    return x


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(y) for y in x)
    return x


def td_to_json(td: TreeDecomposition) -> dict:
    d: dict = {"schema": SCHEMA_VERSION,
               "bags": [sorted(b) for b in td.bags],
               "tree_edges": sorted([a, b] for a, b in td.tree_edges)}
    if td.parent is not None:
        d["parent"] = {str(c): p for c, p in sorted(td.parent.items())}
    if td.labels is not None:
        d["labels"] = {str(i): [lab.kind, _jsonable(lab.witness)]
                       for i, lab in sorted(td.labels.items())}
    return d


def td_from_json(d) -> TreeDecomposition:
    if not isinstance(d, dict) or "bags" not in d:
        raise InputError("decomposition JSON needs a 'bags' list")
    try:
        bags = tuple(frozenset(_int(v, "bag vertex") for v in b) for b in d["bags"])
        tedges = frozenset((_int(a, "node"), _int(b, "node"))
                           for a, b in d.get("tree_edges", []))
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed decomposition: {exc}") from exc
    parent = None
    if "parent" in d:
        parent = {_int(c, "node"): _int(p, "node") for c, p in d["parent"].items()}
    labels = None
    if "labels" in d:
        labels = {_int(i, "node"): Label(k, _tuplify(w)) for i, (k, w) in d["labels"].items()}
    return TreeDecomposition(bags, tedges, parent, labels)


def read_td(path: str | Path) -> TreeDecomposition:
    try:
        d = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read decomposition {path}: {exc}") from exc
    return td_from_json(d)


def td_to_dot(td: TreeDecomposition, name: str = "TD") -> str:
    """Bags as node labels; parent links as arcs parent -> child when rooted."""
    lines = [f"digraph {name} {{" if td.parent is not None else f"graph {name} {{",
             "  node [shape=box];"]
    for i, b in enumerate(td.bags):
        lab = "{" + ", ".join(map(str, sorted(b))) + "}"
        if td.labels and i in td.labels:
            lab += f"\\n{td.labels[i].kind}"
        lines.append(f'  n{i} [label="{lab}"];')
    if td.parent is not None:
        for c, p in sorted(td.parent.items()):
            lines.append(f"  n{p} -> n{c};")
    else:
        for a, b in sorted(td.tree_edges):
            lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(g: Graph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines += [f"  {v};" for v in g.vertices]
    lines += [f"  {u} -- {v};" for u, v in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
