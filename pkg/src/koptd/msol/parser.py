"""Textual syntax for formulas.

Grammar (loosest binding first)::

    formula  := [decl] iff
    decl     := '[' vars? ('|' vars)? ']'           arguments | parameters
    vars     := name ':' sort (',' name ':' sort)*
    iff      := imp ('<->' imp)*
    imp      := or ('->' imp)?                       right associative
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '!' unary | quant | '(' iff ')' | atom
    quant    := ('exists' | 'forall') name [':' sort] '.' iff
    atom     := 'true' | 'false' | name '=' name | name 'in' name
              | 'Inc(' v ',' e ')' | 'edg(' x ',' y ')' | 'edgh(' x ',' y ')'
              | 'edgv(' x ',' y ')' | 'edg2(' e ',' x ',' y ')'
              | 'mod[' p ',' q '](' S ')' | 'minor[' H '](' W ',' F ')'
              | '@' Name ['{' key '=' value (',' key '=' value)* '}'] '(' names ')'

Sorts are ``v``, ``e``, ``V``, ``E``.  A binder or free variable without a
sort gets one from its name: lowercase names starting with e, f or g are
edges, other lowercase names vertices, uppercase names starting with E, F,
C or D edge sets, other uppercase names vertex sets.  Unbound ``V`` and
``E`` denote the whole vertex and edge set.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import GraphError
from .ast import (And, Call, Const, Edg, Edg2, EdgHost, EdgVirt, Eq, Exists, Forall,
                  Formula, Iff, Implies, In, Inc, Minor, Mod, Node, Not, Or, SORTS,
                  SortError, UNIVERSE, Var, free_vars, walk)


class SyntaxError(GraphError):  # noqa: A001 - mirrors the error name used by callers
    def __init__(self, position: int, message: str):
        super().__init__(f"at {position}: {message}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(<->|->|[()\[\]{}.,:=!&|@])|([A-Za-z_][A-Za-z0-9_']*)|(\d+))")
KEYWORDS = {"exists", "forall", "in", "true", "false"}
ATOM_FUNCS = {"Inc": 2, "edg": 2, "edgh": 2, "edgv": 2, "edg2": 3}


def infer_sort(name: str) -> str:
    if name in UNIVERSE:
        return UNIVERSE[name]
    head = name.lstrip("_")[:1] or "x"
    if head.islower():
        return "e" if head in "efg" else "v"
    return "E" if head in "EFCD" else "V"


@dataclass
class _Tok:
    kind: str      # "op", "name", "int", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SyntaxError(start, f"unexpected character {text[start]!r}")
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(_Tok("op", m.group(1), start))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), start))
        else:
            out.append(_Tok("int", m.group(3), start))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, resolve):
        self.toks = tokenize(text)
        self.i = 0
        self.resolve = resolve
        self.binders: list[tuple[str, str]] = []

    # -- token helpers -----------------------------------------------------------
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("op", "name") and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            raise SyntaxError(self.tok.pos, f"expected {text!r}, found {self.tok.text or 'end'!r}")

    def name(self) -> str:
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS:
            raise SyntaxError(t.pos, f"expected a name, found {t.text or 'end'!r}")
        self.i += 1
        return t.text

    def integer(self) -> int:
        t = self.tok
        if t.kind != "int":
            raise SyntaxError(t.pos, f"expected an integer, found {t.text or 'end'!r}")
        self.i += 1
        return int(t.text)

    def sort(self) -> str:
        t = self.tok
        s = self.name()
        if s not in SORTS:
            raise SyntaxError(t.pos, f"unknown sort {s!r}")
        return s

    # -- grammar ----------------------------------------------------------------
    def decl(self) -> tuple[list[Var], list[Var]] | None:
        if not (self.tok.text == "[" and self.peek().kind == "name" and self.peek(2).text == ":"
                or self.tok.text == "[" and self.peek().text in ("]", "|")):
            return None
        self.expect("[")
        groups: list[list[Var]] = [[]]
        while not self.accept("]"):
            if self.accept("|"):
                if len(groups) == 2:
                    raise SyntaxError(self.tok.pos, "more than one '|' in a declaration")
                groups.append([])
                continue
            if groups[-1]:
                self.expect(",")
            n = self.name()
            self.expect(":")
            groups[-1].append(Var(n, self.sort()))
        return groups[0], groups[1] if len(groups) == 2 else []

    def iff(self) -> Node:
        a = self.imp()
        while self.accept("<->"):
            a = Iff(a, self.imp())
        return a

    def imp(self) -> Node:
        a = self.disj()
        if self.accept("->"):
            return Implies(a, self.imp())
        return a

    def disj(self) -> Node:
        fs = [self.conj()]
        while self.accept("|"):
            fs.append(self.conj())
        return fs[0] if len(fs) == 1 else Or(tuple(fs))

    def conj(self) -> Node:
        fs = [self.unary()]
        while self.accept("&"):
            fs.append(self.unary())
        return fs[0] if len(fs) == 1 else And(tuple(fs))

    def unary(self) -> Node:
        t = self.tok
        if self.accept("!"):
            return Not(self.unary())
        if t.text in ("exists", "forall") and t.kind == "name":
            self.i += 1
            var = self.name()
            sort = self.sort() if self.accept(":") else infer_sort(var)
            self.expect(".")
            body = self.iff()
            return (Exists if t.text == "exists" else Forall)(var, sort, body)
        if self.accept("("):
            f = self.iff()
            self.expect(")")
            return f
        return self.atom()

    def atom(self) -> Node:
        t = self.tok
        if self.accept("true"):
            return Const(True)
        if self.accept("false"):
            return Const(False)
        if self.accept("@"):
            return self.library_call()
        if t.kind == "name" and t.text == "mod" and self.peek().text == "[":
            self.i += 2
            p = self.integer()
            self.expect(",")
            q = self.integer()
            self.expect("]")
            self.expect("(")
            s = self.name()
            self.expect(")")
            try:
                return Mod(p, q, s)
            except GraphError as exc:
                raise SyntaxError(t.pos, str(exc)) from exc
        if t.kind == "name" and t.text == "minor" and self.peek().text == "[":
            self.i += 2
            h = self.name()
            self.expect("]")
            self.expect("(")
            w = self.name()
            self.expect(",")
            f = self.name()
            self.expect(")")
            return Minor(h, w, f)
        if t.kind == "name" and t.text in ATOM_FUNCS and self.peek().text == "(":
            self.i += 2
            xs = [self.name()]
            while self.accept(","):
                xs.append(self.name())
            self.expect(")")
            if len(xs) != ATOM_FUNCS[t.text]:
                raise SyntaxError(t.pos, f"{t.text} takes {ATOM_FUNCS[t.text]} arguments")
            return {"Inc": Inc, "edg": Edg, "edgh": EdgHost, "edgv": EdgVirt,
                    "edg2": Edg2}[t.text](*xs)
        a = self.name()
        if self.accept("="):
            return Eq(a, self.name())
        if self.accept("in"):
            return In(a, self.name())
        raise SyntaxError(self.tok.pos, f"expected '=' or 'in' after {a!r}")

    def library_call(self) -> Node:
        t = self.tok
        name = self.name()
        consts: dict[str, object] = {}
        if self.accept("{"):
            while not self.accept("}"):
                if consts:
                    self.expect(",")
                key = self.name()
                self.expect("=")
                consts[key] = self.integer() if self.tok.kind == "int" else self.name()
        args: list[str] | None = None
        if self.accept("("):
            args = []
            while not self.accept(")"):
                if args:
                    self.expect(",")
                args.append(self.name())
        try:
            f = self.resolve(name, consts)
        except GraphError as exc:
            raise SyntaxError(t.pos, str(exc)) from exc
        if args is None:                  # bare @Name: use the formula's own names
            args = [v.name for v in f.free]
        if len(args) != len(f.free):
            raise SyntaxError(t.pos, f"@{name} expects {len(f.free)} arguments, got {len(args)}")
        return Call(f, tuple(args))


def _default_resolver(name, consts):
    from .library import library
    return library(name, consts)


def parse_node(text: str, resolve=None) -> Node:
    p = _Parser(text, resolve or _default_resolver)
    node = p.iff()
    if p.tok.kind != "end":
        raise SyntaxError(p.tok.pos, f"unexpected {p.tok.text!r}")
    return node


def _call_sorts(node: Node) -> dict[str, str]:
    """Sorts implied by the argument positions of named formulas."""
    out: dict[str, str] = {}
    for x in walk(node):
        if isinstance(x, Call):
            for a, v in zip(x.args, x.formula.free):
                out.setdefault(a, v.sort)
    return out


def _free_in_order(node: Node, bound: frozenset = frozenset()) -> list[str]:
    """Free names in order of first occurrence (for deterministic signatures)."""
    out: list[str] = []

    def go(x: Node, b: frozenset):
        if isinstance(x, (Exists, Forall)):
            go(x.body, b | {x.var})
            return
        if isinstance(x, Call):
            names = x.args
        elif x.children():
            for c in x.children():
                go(c, b)
            return
        else:
            names = sorted(free_vars(x), key=lambda n: _atom_order(x).index(n))
        for n in names:
            if n not in b and n not in out:
                out.append(n)

    go(node, bound)
    return out


def _atom_order(x: Node) -> list[str]:
    from .ast import atom_slots
    return [n for n, _ in atom_slots(x)]


def parse_formula(text: str, args=None, params=None, name: str = "", resolve=None) -> Formula:
    """Parse ``text``.  Free variables come from a leading declaration, from
    ``args``/``params`` (lists of Var or name:sort strings), or else become
    arguments in order of first occurrence with sorts inferred from names."""
    p = _Parser(text, resolve or _default_resolver)
    decl = p.decl()
    body = p.iff()
    if p.tok.kind != "end":
        raise SyntaxError(p.tok.pos, f"unexpected {p.tok.text!r}")

    def norm(vs):
        out = []
        for v in vs or ():
            if isinstance(v, Var):
                out.append(v)
            else:
                n, _, s = str(v).partition(":")
                out.append(Var(n.strip(), s.strip() or infer_sort(n.strip())))
        return out

    if decl is not None:
        a, pr = decl
    elif args is not None or params is not None:
        a, pr = norm(args), norm(params)
    else:
        hinted = _call_sorts(body)
        a = [Var(n, hinted.get(n) or infer_sort(n))
             for n in _free_in_order(body) if n not in UNIVERSE]
        pr = []
    declared = {v.name for v in a + pr}
    missing = [n for n in _free_in_order(body) if n not in declared and n not in UNIVERSE]
    if missing:
        raise SortError(missing[0], "unbound variable")
    return Formula(body, tuple(a), tuple(pr), name)


# --------------------------------------------------------------------------
# printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}


def _consts(f: Formula) -> str:
    if not f.constants:
        return ""
    return "{" + ",".join(f"{k}={v}" for k, v in f.constants) + "}"


def pretty_node(node: Node, canonical: bool = False) -> str:
    def go(x: Node, ctx: int) -> str:
        if isinstance(x, Const):
            return "true" if x.value else "false"
        if isinstance(x, Eq):
            return f"{x.a} = {x.b}"
        if isinstance(x, In):
            return f"{x.x} in {x.s}"
        if isinstance(x, Inc):
            return f"Inc({x.v},{x.e})"
        if isinstance(x, Edg):
            return f"edg({x.x},{x.y})"
        if isinstance(x, EdgHost):
            return f"edgh({x.x},{x.y})"
        if isinstance(x, EdgVirt):
            return f"edgv({x.x},{x.y})"
        if isinstance(x, Edg2):
            return f"edg2({x.e},{x.x},{x.y})"
        if isinstance(x, Mod):
            return f"mod[{x.p},{x.q}]({x.s})"
        if isinstance(x, Minor):
            return f"minor[{x.h}]({x.vs},{x.es})"
        if isinstance(x, Call):
            return f"@{x.formula.name}{_consts(x.formula)}({','.join(x.args)})"
        if isinstance(x, Not):
            return "!" + go(x.f, 5)
        if isinstance(x, (Exists, Forall)):
            q = "exists" if isinstance(x, Exists) else "forall"
            s = f"{q} {x.var}:{x.sort} . {go(x.body, 0)}"
            return f"({s})" if ctx > 0 else s
        prec = _PREC[type(x)]
        if isinstance(x, (And, Or)):
            parts = [go(c, prec + 1) for c in x.fs]
            if canonical:
                parts = sorted(set(parts))
                if len(parts) == 1:
                    return parts[0]
            s = (" & " if isinstance(x, And) else " | ").join(parts)
        elif isinstance(x, Implies):
            s = f"{go(x.a, prec + 1)} -> {go(x.b, prec)}"
        else:
            s = f"{go(x.a, prec + 1)} <-> {go(x.b, prec + 1)}"
        return f"({s})" if ctx > prec else s

    if canonical:
        node = flatten(node)
    return go(node, 0)


def flatten(node: Node) -> Node:
    """Merge nested conjunctions and disjunctions."""
    if isinstance(node, (And, Or)):
        kind = type(node)
        fs: list[Node] = []
        for c in node.fs:
            c = flatten(c)
            fs.extend(c.fs if isinstance(c, kind) else [c])
        return kind(tuple(fs))
    if isinstance(node, Not):
        return Not(flatten(node.f))
    if isinstance(node, Implies):
        return Implies(flatten(node.a), flatten(node.b))
    if isinstance(node, Iff):
        return Iff(flatten(node.a), flatten(node.b))
    if isinstance(node, Exists):
        return Exists(node.var, node.sort, flatten(node.body))
    if isinstance(node, Forall):
        return Forall(node.var, node.sort, flatten(node.body))
    return node


def pretty(f: Formula | Node, canonical: bool = False) -> str:
    if isinstance(f, Node):
        return pretty_node(f, canonical)
    head = ""
    if f.free:
        a = ", ".join(f"{v.name}:{v.sort}" for v in f.args)
        p = ", ".join(f"{v.name}:{v.sort}" for v in f.params)
        head = f"[{a} | {p}] " if f.params else f"[{a}] "
    return head + pretty_node(f.body, canonical)


def canonical(f: Formula | Node) -> str:
    return pretty(f, canonical=True)


def same_formula(a: Formula | Node, b: Formula | Node) -> bool:
    """Equality up to reassociation and reordering of conjunctions/disjunctions."""
    return canonical(a) == canonical(b)
