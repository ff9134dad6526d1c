"""Brute-force evaluation of formulas over |G|_1 and |G|_2.

Values: a vertex is its index in ``host.vertices``, an edge its index in
``host.edges``, a set an int bitmask over those indices.  Every quantifier
and every named-formula use is memoized on the values of its free
variables, so a subformula is evaluated at most once per distinct
assignment of the variables it actually mentions.  The budget caps the
number of memoized subcalls plus quantifier iterations.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping

from ..errors import GraphError, SelfPair
from ..graph import Edge, Graph, edge, from_edges
from .ast import (And, Call, Const, Edg, Edg2, EdgHost, EdgVirt, Eq, Exists,
                  Forall, Formula, Iff, Implies, In, Inc, Minor, Mod, Node, Not,
                  Or, SortError, ELEMENT_OF, UNIVERSE, free_vars)

DEFAULT_BUDGET = 10 ** 8


class BudgetExceeded(GraphError):
    pass


class UnboundVariable(GraphError):
    pass


@dataclass(frozen=True)
class Structure:
    host: Graph
    mode: str = "two"                      # "one": |G|_1, "two": |G|_2
    virtual: frozenset[Edge] = frozenset()

    def __post_init__(self):
        if self.mode not in ("one", "two"):
            raise ValueError(f"unknown mode {self.mode!r}")
        for u, v in self.virtual:
            if u == v:
                raise SelfPair(f"virtual pair ({u}, {v})")
            if u not in self.host.vertex_set or v not in self.host.vertex_set:
                raise GraphError(f"virtual pair ({u}, {v}) is not a vertex pair of the host")


def structure(g: Graph, mode: str = "two") -> Structure:
    return Structure(g, mode)


def with_virtual_edges(g: Graph, pairs: Iterable) -> Structure:
    """|G|_2 whose edg relation also holds on the given vertex pairs."""
    ps = set()
    for p in pairs:
        u, v = p
        if u == v:
            raise SelfPair(f"virtual pair ({u}, {v})")
        ps.add(edge(u, v))
    return Structure(g, "two", frozenset(ps))


def union_graph(s: Structure) -> Graph:
    """Host plus the virtual pairs as ordinary edges."""
    es = set(s.host.edges) | set(s.virtual)
    return from_edges(sorted(es), s.host.vertices)


def rewrite_virtual(f: Formula) -> Formula:
    """Replace every edg(x, y) by edgh(x, y) | edgv(x, y) (host or virtual)."""
    memo: dict[int, object] = {}

    def rw(node: Node) -> Node:
        if isinstance(node, Edg):
            return Or((EdgHost(node.x, node.y), EdgVirt(node.x, node.y)))
        if isinstance(node, Not):
            return Not(rw(node.f))
        if isinstance(node, And):
            return And(tuple(rw(c) for c in node.fs))
        if isinstance(node, Or):
            return Or(tuple(rw(c) for c in node.fs))
        if isinstance(node, Implies):
            return Implies(rw(node.a), rw(node.b))
        if isinstance(node, Iff):
            return Iff(rw(node.a), rw(node.b))
        if isinstance(node, Exists):
            return Exists(node.var, node.sort, rw(node.body))
        if isinstance(node, Forall):
            return Forall(node.var, node.sort, rw(node.body))
        if isinstance(node, Call):
            key = id(node.formula)
            if key not in memo:
                memo[key] = rewrite_virtual(node.formula)
            return Call(memo[key], node.args)
        return node

    return Formula(rw(f.body), f.args, f.params, f.name, f.constants, dict(f.meta))


# --------------------------------------------------------------------------

class Evaluator:
    """Evaluates formulas on one structure; memo tables live as long as the
    evaluator (one evaluation or one relation extraction)."""

    def __init__(self, s: Structure, budget: int = DEFAULT_BUDGET):
        self.s = s
        self.budget = budget
        self.calls = 0
        g = s.host
        self.vid = {v: i for i, v in enumerate(g.vertices)}
        self.eid = {e: i for i, e in enumerate(g.edges)}
        self.n, self.m = g.n, g.m
        self.ends = [(self.vid[u], self.vid[v]) for u, v in g.edges]
        self.inc = [0] * g.n                     # edge mask per vertex
        for i, (a, b) in enumerate(self.ends):
            self.inc[a] |= 1 << i
            self.inc[b] |= 1 << i
        self.adj_host = [0] * g.n
        for a, b in self.ends:
            self.adj_host[a] |= 1 << b
            self.adj_host[b] |= 1 << a
        self.adj_virt = [0] * g.n
        for u, v in s.virtual:
            a, b = self.vid[u], self.vid[v]
            self.adj_virt[a] |= 1 << b
            self.adj_virt[b] |= 1 << a
        self.full = {"V": (1 << g.n) - 1, "E": (1 << g.m) - 1}
        self._compiled: dict[int, Callable] = {}
        self._call_memo: dict[int, dict] = {}
        self._keep: list[object] = []
        self._minor_cache: dict = {}

    # -- conversions ----------------------------------------------------------
    def encode(self, sort: str, value) -> int:
        try:
            if sort == "v":
                return self.vid[value]
            if sort == "e":
                return self.eid[edge(*value)]
            if sort == "V":
                return sum(1 << self.vid[x] for x in set(value))
            return sum(1 << self.eid[edge(*x)] for x in set(value))
        except KeyError as exc:
            raise GraphError(f"value {value!r} is not in the structure") from exc

    def decode(self, sort: str, x: int):
        g = self.s.host
        if sort == "v":
            return g.vertices[x]
        if sort == "e":
            return g.edges[x]
        items = g.vertices if sort == "V" else g.edges
        return frozenset(items[i] for i in range(len(items)) if x >> i & 1)

    def domain(self, sort: str) -> range:
        if self.s.mode == "one" and sort in ("e", "E"):
            raise SortError(sort, "edges are not elements of |G|_1")
        if sort == "v":
            return range(self.n)
        if sort == "e":
            return range(self.m)
        if sort == "V":
            return range(1 << self.n)
        return range(1 << self.m)

    def _tick(self, k: int = 1) -> None:
        self.calls += k
        if self.calls > self.budget:
            raise BudgetExceeded(f"more than {self.budget} subcalls")

    # -- compilation ------------------------------------------------------------
    def compile_formula(self, f: Formula) -> Callable[[dict], bool]:
        key = id(f)
        if key not in self._compiled:
            self._keep.append(f)
            scope = {v.name: v.sort for v in f.free}
            self._compiled[key] = self._compile(f.body, scope)
        return self._compiled[key]

    def _value(self, name: str, env: dict) -> int:
        if name in env:
            return env[name]
        if name in UNIVERSE:
            return self.full[name]
        raise UnboundVariable(name)

    def _compile(self, node: Node, scope: dict[str, str]) -> Callable[[dict], bool]:
        ev = self
        val = self._value
        if isinstance(node, Const):
            b = node.value
            return lambda env: b
        if isinstance(node, Eq):
            a, c = node.a, node.b
            return lambda env: val(a, env) == val(c, env)
        if isinstance(node, Inc):
            v, e = node.v, node.e
            ends = self.ends
            return lambda env: val(v, env) in ends[val(e, env)]
        if isinstance(node, In):
            x, s = node.x, node.s
            return lambda env: bool(val(s, env) >> val(x, env) & 1)
        if isinstance(node, (Edg, EdgHost, EdgVirt)):
            x, y = node.x, node.y
            if isinstance(node, EdgHost):
                adj = self.adj_host
            elif isinstance(node, EdgVirt):
                adj = self.adj_virt
            else:
                adj = [a | b for a, b in zip(self.adj_host, self.adj_virt)]
            return lambda env: bool(adj[val(x, env)] >> val(y, env) & 1)
        if isinstance(node, Edg2):
            e, x, y = node.e, node.x, node.y
            ends = self.ends

            def edg2(env):
                a, b = ends[val(e, env)]
                p, q = val(x, env), val(y, env)
                return (a, b) == (p, q) or (a, b) == (q, p)
            return edg2
        if isinstance(node, Mod):
            p, q, s = node.p, node.q, node.s
            return lambda env: bin(val(s, env)).count("1") % q == p
        if isinstance(node, Minor):
            return self._compile_minor(node)
        if isinstance(node, Not):
            f = self._compile(node.f, scope)
            return lambda env: not f(env)
        if isinstance(node, And):
            fs = [self._compile(c, scope) for c in node.fs]
            return lambda env: all(f(env) for f in fs)
        if isinstance(node, Or):
            fs = [self._compile(c, scope) for c in node.fs]
            return lambda env: any(f(env) for f in fs)
        if isinstance(node, Implies):
            a, b = self._compile(node.a, scope), self._compile(node.b, scope)
            return lambda env: (not a(env)) or b(env)
        if isinstance(node, Iff):
            a, b = self._compile(node.a, scope), self._compile(node.b, scope)
            return lambda env: a(env) == b(env)
        if isinstance(node, (Exists, Forall)):
            return self._compile_quantifier(node, scope)
        if isinstance(node, Call):
            return self._compile_call(node)
        raise TypeError(f"unknown node {node!r}")

    def _definition(self, node: Exists, scope: dict[str, str]):
        """Recognise ``exists X . (X = {x : rhs} & rest)`` with ``X`` not free
        in ``rhs``, directly or through a named formula whose body is such a
        set definition of one of its arguments (IncE, IncV, ...).  Returns
        (mask builder, compiled rest) or None.  The unique witness is built
        element by element instead of enumerating every set."""
        if node.sort not in ELEMENT_OF:
            return None
        parts = node.body.fs if isinstance(node.body, And) else (node.body,)
        first, rest = parts[0], parts[1:]
        var, elem = node.var, ELEMENT_OF[node.sort]
        inner = {**scope, var: node.sort}

        def shape(f: Node, name: str):
            if isinstance(f, Forall) and f.sort == elem and isinstance(f.body, Iff) \
                    and isinstance(f.body.a, In) and f.body.a.x == f.var and f.body.a.s == name \
                    and name not in free_vars(f.body.b) and f.var != name:
                return f.var, f.body.b
            return None

        dom = self.domain(elem)
        tick = self._tick
        if isinstance(first, Call):
            callee = first.formula
            names = [v.name for v in callee.free]
            if first.args.count(var) != 1:
                return None
            j = first.args.index(var)
            hit = shape(callee.body, names[j])
            if hit is None:
                return None
            x, rhs = hit
            crhs = self._compile(rhs, {v.name: v.sort for v in callee.free} | {x: elem})
            others = [(names[i], a) for i, a in enumerate(first.args) if i != j]
            val = self._value

            def build(env):
                sub = {n: val(a, env) for n, a in others}
                mask = 0
                for i in dom:
                    sub[x] = i
                    if crhs(sub):
                        mask |= 1 << i
                tick(len(dom))
                return mask
        else:
            hit = shape(first, var)
            if hit is None:
                return None
            x, rhs = hit
            crhs = self._compile(rhs, {**inner, x: elem})

            def build(env):
                saved = env.get(x, _MISSING)
                mask = 0
                try:
                    for i in dom:
                        env[x] = i
                        if crhs(env):
                            mask |= 1 << i
                finally:
                    if saved is _MISSING:
                        env.pop(x, None)
                    else:
                        env[x] = saved
                tick(len(dom))
                return mask
        if not rest:
            crest = lambda env: True
        else:
            crest = self._compile(rest[0] if len(rest) == 1 else And(tuple(rest)), inner)
        return build, crest

    def _compile_quantifier(self, node, scope):
        is_exists = isinstance(node, Exists)
        var, sort = node.var, node.sort
        inner = {**scope, var: sort}
        body = node.body
        definition = self._definition(node, scope) if is_exists else None
        if definition is not None:
            return self._compile_definition(node, scope, *definition)
        # bounded form: exists x . (x in S & ...), forall x . (x in S -> ...)
        bound = None
        if is_exists and isinstance(body, And) and isinstance(body.fs[0], In) \
                and body.fs[0].x == var and body.fs[0].s != var:
            bound = body.fs[0].s
            rest = body.fs[1:]
            body = rest[0] if len(rest) == 1 else And(rest)
        elif not is_exists and isinstance(body, Implies) and isinstance(body.a, In) \
                and body.a.x == var and body.a.s != var:
            bound = body.a.s
            body = body.b
        dom = self.domain(sort)
        keys = tuple(sorted(x for x in free_vars(node) if x in scope))
        # witness filter: a set quantifier whose first conjunct (antecedent
        # for forall) mentions fewer outer variables than the whole body
        # keeps the sets passing it, cached on just those variables
        head = None
        if sort not in ("v", "e") and bound is None:
            if is_exists and isinstance(body, And) and len(body.fs) > 1:
                head, tail = body.fs[0], body.fs[1:]
                tail = tail[0] if len(tail) == 1 else And(tail)
            elif not is_exists and isinstance(body, Implies):
                head, tail = body.a, body.b
            if head is not None:
                hkeys = tuple(sorted(x for x in free_vars(head) if x in scope and x != var))
                if len(hkeys) == len(keys):
                    head = None
        if head is not None:
            return self._compile_filtered(node, inner, keys, hkeys, head, tail, dom)
        f = self._compile(body, inner)
        memo: dict[tuple, bool] = {}
        val = self._value
        tick = self._tick

        def run(env):
            key = tuple(env[k] for k in keys)
            hit = memo.get(key)
            if hit is not None:
                return hit
            tick()
            if bound is not None:
                mask = val(bound, env)
                it = (i for i in dom if mask >> i & 1) if sort in ("v", "e") else dom
            else:
                it = dom
            saved = env.get(var, _MISSING)
            res = not is_exists
            count = 0
            try:
                for x in it:
                    count += 1
                    env[var] = x
                    if f(env) == is_exists:
                        res = is_exists
                        break
            finally:
                if saved is _MISSING:
                    env.pop(var, None)
                else:
                    env[var] = saved
                tick(count)
            memo[key] = res
            return res
        return run

    def _compile_filtered(self, node, inner, keys, hkeys, head, tail, dom):
        fh, ft = self._compile(head, inner), self._compile(tail, inner)
        is_exists, var = isinstance(node, Exists), node.var
        memo: dict[tuple, bool] = {}
        passing: dict[tuple, tuple] = {}
        tick = self._tick

        def candidates(env):
            hk = tuple(env[k] for k in hkeys)
            hit = passing.get(hk)
            if hit is None:
                hit = []
                for x in dom:
                    env[var] = x
                    if fh(env):
                        hit.append(x)
                tick(len(dom))
                hit = passing[hk] = tuple(hit)
            return hit

        def run(env):
            key = tuple(env[k] for k in keys)
            res = memo.get(key)
            if res is not None:
                return res
            tick()
            saved = env.get(var, _MISSING)
            res = not is_exists
            try:
                for x in candidates(env):
                    env[var] = x
                    if ft(env) == is_exists:
                        res = is_exists
                        break
            finally:
                if saved is _MISSING:
                    env.pop(var, None)
                else:
                    env[var] = saved
            memo[key] = res
            return res
        return run

    def _compile_definition(self, node, scope, build, crest):
        keys = tuple(sorted(x for x in free_vars(node) if x in scope))
        memo: dict[tuple, bool] = {}
        var = node.var
        tick = self._tick

        def run(env):
            key = tuple(env[k] for k in keys)
            hit = memo.get(key)
            if hit is not None:
                return hit
            tick()
            saved = env.get(var, _MISSING)
            try:
                env[var] = build(env)
                res = bool(crest(env))
            finally:
                if saved is _MISSING:
                    env.pop(var, None)
                else:
                    env[var] = saved
            memo[key] = res
            return res
        return run

    def _compile_call(self, node: Call):
        body = self.compile_formula(node.formula)
        names = [v.name for v in node.formula.free]
        args = node.args
        # one memo per formula object, shared by all of its uses
        memo = self._call_memo.setdefault(id(node.formula), {})
        val = self._value
        tick = self._tick

        def run(env):
            vals = tuple(val(a, env) for a in args)
            hit = memo.get(vals)
            if hit is not None:
                return hit
            tick()
            res = body(dict(zip(names, vals)))
            memo[vals] = res
            return res
        return run

    def _compile_minor(self, node: Minor):
        from ..minors import K4, K5, K23, K33, has_minor
        pattern = {"K4": K4, "K23": K23, "K5": K5, "K33": K33}.get(node.h)
        if pattern is None:
            raise SortError(node.h, "unknown minor pattern")
        vs, es = node.vs, node.es
        val = self._value
        cache = self._minor_cache
        g = self.s.host

        def run(env):
            vm, em = val(vs, env), val(es, env)
            key = (node.h, vm, em)
            if key not in cache:
                self._tick()
                verts = [g.vertices[i] for i in range(self.n) if vm >> i & 1]
                keep = set(verts)
                edges = [g.edges[i] for i in range(self.m)
                         if em >> i & 1 and g.edges[i][0] in keep and g.edges[i][1] in keep]
                cache[key] = has_minor(from_edges(edges, verts), pattern)
            return cache[key]
        return run


_MISSING = object()


# --------------------------------------------------------------------------
# public entry points

def _prepare_env(ev: Evaluator, f: Formula, a: Mapping[str, object] | None) -> dict:
    a = dict(a or {})
    env = {}
    for var in f.free:
        if var.name not in a:
            raise UnboundVariable(var.name)
        env[var.name] = ev.encode(var.sort, a[var.name])
    return env


def evaluate(s: Structure, f: Formula, a: Mapping[str, object] | None = None,
             budget: int = DEFAULT_BUDGET, precheck: bool = True) -> bool:
    """Truth value of ``f`` on ``s`` under the assignment ``a`` of its free
    variables (arguments and parameters; Python values: vertex ids, edge
    pairs, sets of those)."""
    if precheck:
        check_budget(s, f, budget)
    ev = Evaluator(s, budget)
    env = _prepare_env(ev, f, a)
    return ev.compile_formula(f)(env)


def extract_relation(s: Structure, f: Formula, params: Mapping[str, object] | None = None,
                     budget: int = DEFAULT_BUDGET, precheck: bool = True) -> set[tuple]:
    """All tuples of argument values satisfying ``f`` with the parameters fixed."""
    if len(f.args) > 2:
        raise ValueError("extraction supports at most two arguments")
    if precheck:
        check_budget(s, f, budget, fixed=[v.name for v in f.params])
    ev = Evaluator(s, budget)
    base = {}
    params = dict(params or {})
    for var in f.params:
        if var.name not in params:
            raise UnboundVariable(var.name)
        base[var.name] = ev.encode(var.sort, params[var.name])
    run = ev.compile_formula(f)
    out = set()
    doms = [ev.domain(v.sort) for v in f.args]
    for combo in product(*doms):
        env = dict(base)
        env.update((v.name, x) for v, x in zip(f.args, combo))
        ev._tick()
        if run(env):
            out.add(tuple(ev.decode(v.sort, x) for v, x in zip(f.args, combo)))
    return out


def estimate_cost(s: Structure, f: Formula, fixed: Iterable[str] | None = None) -> int:
    """Upper bound on memoized quantifier evaluations.

    Each variable carries the number of values it can take: 1 for the
    variables in ``fixed`` (default: all free variables of ``f``) and for the
    universe constants, the domain size for quantified ones (2^n for vertex
    sets, 2^m for edge sets).  A quantifier costs its own domain size times
    the product over the variables it depends on; a named formula is costed
    once per distinct tuple of argument sizes.
    """
    n, m = s.host.n, s.host.m
    size = {"v": max(n, 1), "e": max(m, 1), "V": 2 ** n, "E": 2 ** m}
    fixed = set(v.name for v in f.free) if fixed is None else set(fixed)
    cache: dict[tuple, int] = {}

    def go(node: Node, scope: dict[str, int]) -> int:
        if isinstance(node, (Exists, Forall)):
            c = size[node.sort]
            for x in free_vars(node):
                c *= scope.get(x, 1)
            return c + go(node.body, {**scope, node.var: size[node.sort]})
        if isinstance(node, Call):
            sizes = tuple(scope.get(a, 1) for a in node.args)
            key = (id(node.formula), sizes)
            if key not in cache:
                cache[key] = 0
                inner = dict(zip((v.name for v in node.formula.free), sizes))
                cache[key] = go(node.formula.body, inner)
            return cache[key]
        return sum(go(c, scope) for c in node.children())

    top = {v.name: (1 if v.name in fixed else size[v.sort]) for v in f.free}
    outer = 1
    for v in f.free:
        outer *= top[v.name]
    return outer + go(f.body, top)


def check_budget(s: Structure, f: Formula, budget: int, fixed=None) -> int:
    cost = estimate_cost(s, f, fixed)
    if cost > budget:
        raise BudgetExceeded(f"estimated cost {cost} exceeds the budget {budget}")
    return cost
