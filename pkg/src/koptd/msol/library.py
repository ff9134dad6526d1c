"""Catalog of named MSOL/CMSOL predicates.

Every entry is a :class:`Formula` whose arguments come first and whose
parameters (spanning tree F, root r, colour classes, anchors, ...) follow.
Entries built from other entries use :class:`Call` nodes, so a predicate is
compiled and memoized once per evaluation however often it is used.

Naming follows the usual conventions: lowercase ``v, w, x, y, u, r`` are
vertices, ``e, f, g`` edges, ``W, U, X, S`` vertex sets, ``F, P, C, D`` edge sets.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Mapping

from ..errors import UnknownPredicate
from .ast import (And, BadConstants, Call, Const, Edg, Edg2, Eq, Exists, Forall,
                  Formula, Iff, Implies, In, Inc, Minor, Node, Not, Or, Var, conj,
                  disj, exists_in, forall_in)

MINOR_PATTERNS = ("K4", "K23", "K5", "K33")
MAX_COUNT = 6            # largest kappa/lambda/nu/k accepted by the builders


# --------------------------------------------------------------------------
# small helpers producing inline nodes

def V(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n, "v") for n in names)


def EV(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n, "e") for n in names)


def VS(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n, "V") for n in names)


def ES(*names: str) -> tuple[Var, ...]:
    return tuple(Var(n, "E") for n in names)


def subset(x: str, sort: str, a: str, b: str) -> Node:
    """a is a subset of b (x is a fresh element variable)."""
    return Forall(x, sort, Implies(In(x, a), In(x, b)))


def nonempty(x: str, sort: str, a: str) -> Node:
    return Exists(x, sort, In(x, a))


def set_eq(x: str, sort: str, a: str, rhs: Node) -> Node:
    """a = {x : rhs}."""
    return Forall(x, sort, Iff(In(x, a), rhs))


def distinct(names: list[str]) -> Node:
    return conj(*[Not(Eq(a, b)) for i, a in enumerate(names) for b in names[i + 1:]])


def some_equal(names: list[str]) -> Node:
    return disj(*[Eq(a, b) for i, a in enumerate(names) for b in names[i + 1:]])


def at_most(count: int, var: str, sort: str, cond: Callable[[str], Node]) -> Node:
    """At most ``count`` values of ``var`` satisfy ``cond``: any count+1 of
    them contain a repetition.  Quantifiers are nested so each level is
    guarded by its own condition."""
    names = [f"{var}{i}" for i in range(1, count + 2)]
    body: Node = some_equal(names) if len(names) > 1 else Const(False)
    for nm in reversed(names):
        body = Forall(nm, sort, Implies(cond(nm), body))
    return body


def at_least(count: int, var: str, sort: str, cond: Callable[[str], Node]) -> Node:
    names = [f"{var}{i}" for i in range(1, count + 1)]
    body: Node = conj(distinct(names), *[cond(nm) for nm in names])
    for nm in reversed(names):
        body = Exists(nm, sort, body)
    return body


def _count(name: str, value, low: int = 0) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or not low <= value <= MAX_COUNT:
        raise BadConstants(f"{name}={value!r} must be an integer in {low}..{MAX_COUNT}")
    return value


def _mk(name: str, body: Node, args=(), params=(), constants=None, group: str = "") -> Formula:
    consts = tuple(sorted((constants or {}).items()))
    return Formula(body, tuple(args), tuple(params), name, consts,
                   {"group": group, "n_params": len(params)})


# --------------------------------------------------------------------------
# basic predicates

@lru_cache(maxsize=None)
def adj() -> Formula:
    body = conj(Not(Eq("v", "w")),
                exists_in("e", "e", "F", conj(Inc("v", "e"), Inc("w", "e"))))
    return _mk("Adj", body, V("v", "w") + ES("F"), group="basic")


@lru_cache(maxsize=None)
def edge_pred() -> Formula:
    body = conj(Not(Eq("v", "w")), Inc("v", "e"), Inc("w", "e"))
    return _mk("Edge", body, EV("e") + V("v", "w"), group="basic")


@lru_cache(maxsize=None)
def inc_v() -> Formula:
    """W = IncV(F): the vertices incident to some edge of F."""
    body = set_eq("v", "v", "W", exists_in("e", "e", "F", Inc("v", "e")))
    return _mk("IncV", body, VS("W") + ES("F"), group="basic")


@lru_cache(maxsize=None)
def inc_e() -> Formula:
    """F = IncE(W): the edges with both endpoints in W."""
    body = set_eq("e", "e", "F", Forall("v", "v", Implies(Inc("v", "e"), In("v", "W"))))
    return _mk("IncE", body, ES("F") + VS("W"), group="basic")


@lru_cache(maxsize=None)
def inside() -> Formula:
    """Every edge of F has both endpoints in W."""
    body = forall_in("e", "e", "F", Forall("v", "v", Implies(Inc("v", "e"), In("v", "W"))))
    return _mk("Inside", body, VS("W") + ES("F"), group="basic")


@lru_cache(maxsize=None)
def deg(k: int) -> Formula:
    k = _count("k", k)
    names = [f"e{i}" for i in range(1, k + 1)]
    # exists distinct e1..ek in F at v, and every f in F at v is one of them;
    # each ei is guarded by "ei in F" first so it ranges over F only
    body: Node = Forall("f", "e", Implies(In("f", "F"), Implies(
        Inc("v", "f"), disj(*[Eq("f", nm) for nm in names]))))
    for i in reversed(range(k)):
        nm = names[i]
        body = Exists(nm, "e", conj(In(nm, "F"), Inc("v", nm),
                                    *[Not(Eq(nm, m)) for m in names[:i]], body))
    return _mk("deg", body, V("v") + ES("F"), (), {"k": k}, group="basic")


@lru_cache(maxsize=None)
def conn() -> Formula:
    """(W, F) is connected: no proper nonempty X of W is closed under F."""
    split = conj(subset("x", "v", "X", "W"), nonempty("x", "v", "X"),
                 Exists("y", "v", conj(In("y", "W"), Not(In("y", "X")))))
    cross = exists_in("e", "e", "F", exists_in("x", "v", "X", Exists(
        "y", "v", conj(In("y", "W"), Not(In("y", "X")), Inc("x", "e"), Inc("y", "e")))))
    body = Forall("X", "V", Implies(split, cross))
    return _mk("Conn", body, VS("W") + ES("F"), group="basic")


@lru_cache(maxsize=None)
def conn_edg() -> Formula:
    """Connectivity of the subgraph induced by W in |G|_1 (uses edg)."""
    split = conj(subset("x", "v", "X", "W"), nonempty("x", "v", "X"),
                 Exists("y", "v", conj(In("y", "W"), Not(In("y", "X")))))
    cross = exists_in("x", "v", "X", Exists(
        "y", "v", conj(In("y", "W"), Not(In("y", "X")), Edg("x", "y"))))
    body = Forall("X", "V", Implies(split, cross))
    return _mk("ConnV", body, VS("W"), group="basic")


@lru_cache(maxsize=None)
def conn_k(k: int) -> Formula:
    """(W, F) has more than k vertices and stays connected after deleting
    any set of fewer than k vertices."""
    k = _count("k", k, 1)
    small = at_most(k - 1, "s", "v", lambda nm: In(nm, "S"))
    rest = Exists("U", "V", conj(
        set_eq("u", "v", "U", conj(In("u", "W"), Not(In("u", "S")))),
        call(conn(), "U", "F")))
    body = conj(at_least(k + 1, "w", "v", lambda nm: In(nm, "W")),
                Forall("S", "V", Implies(conj(subset("x", "v", "S", "W"), small), rest)))
    return _mk("Conn_k", body, VS("W") + ES("F"), (), {"k": k}, group="basic")


@lru_cache(maxsize=None)
def cycle() -> Formula:
    body = conj(call(inside(), "W", "F"), nonempty("x", "v", "W"),
                forall_in("v", "v", "W", call(deg(2), "v", "F")),
                call(conn(), "W", "F"))
    return _mk("Cycle", body, VS("W") + ES("F"), group="basic")


@lru_cache(maxsize=None)
def acyclic() -> Formula:
    """No nonempty D within F has all degrees 0 or 2 (a union of cycles)."""
    even = Forall("v", "v", disj(call(deg(0), "v", "D"), call(deg(2), "v", "D")))
    body = Not(Exists("D", "E", conj(subset("e", "e", "D", "F"), nonempty("e", "e", "D"), even)))
    return _mk("Acyclic", body, ES("F"), group="basic")


@lru_cache(maxsize=None)
def tree() -> Formula:
    body = conj(call(inside(), "W", "F"), nonempty("x", "v", "W"),
                call(conn(), "W", "F"), call(acyclic(), "F"))
    return _mk("Tree", body, VS("W") + ES("F"), group="basic")


@lru_cache(maxsize=None)
def path() -> Formula:
    low = disj(call(deg(0), "v", "F"), call(deg(1), "v", "F"), call(deg(2), "v", "F"))
    body = conj(call(tree(), "W", "F"), forall_in("v", "v", "W", low))
    return _mk("Path", body, VS("W") + ES("F"), group="basic")


@lru_cache(maxsize=None)
def path_between() -> Formula:
    """P is the edge set of a path from x to y (empty when x = y)."""
    trivial = conj(Eq("x", "y"), Not(nonempty("e", "e", "P")))
    proper = conj(Not(Eq("x", "y")), call(deg(1), "x", "P"), call(deg(1), "y", "P"),
                  Exists("W", "V", conj(call(inc_v(), "W", "P"), call(path(), "W", "P"))))
    return _mk("PathBetween", disj(trivial, proper), V("x", "y") + ES("P"), group="basic")


@lru_cache(maxsize=None)
def minor(h: str) -> Formula:
    if h not in MINOR_PATTERNS:
        raise BadConstants(f"H={h!r}: minor patterns are {', '.join(MINOR_PATTERNS)}")
    return _mk("Minor", Minor(h, "W", "F"), VS("W") + ES("F"), (), {"H": h}, group="basic")


@lru_cache(maxsize=None)
def outerplanar() -> Formula:
    body = Not(disj(call(minor("K4"), "W", "F"), call(minor("K23"), "W", "F")))
    return _mk("Outerplanar", body, VS("W") + ES("F"), group="layers")


@lru_cache(maxsize=None)
def part(k: int) -> Formula:
    k = _count("k", k, 1)
    sets = [f"V{i}" for i in range(1, k + 1)]
    body = Forall("v", "v", disj(*[
        conj(In("v", s), *[Not(In("v", t)) for t in sets if t != s]) for s in sets]))
    return _mk("Part", body, VS(*sets), (), {"k": k}, group="layers")


@lru_cache(maxsize=None)
def layers(k: int) -> Formula:
    """V1..Vk partition V, each Vi induces an outerplanar graph and edges
    join only equal or consecutive layers."""
    k = _count("k", k, 1)
    sets = [f"V{i}" for i in range(1, k + 1)]
    outer = [Exists("F", "E", conj(call(inc_e(), "F", s), call(outerplanar(), s, "F")))
             for s in sets]

    def near(i: int) -> Node:
        return disj(*[In("w", sets[j]) for j in (i - 1, i, i + 1) if 0 <= j < k])

    local = Forall("v", "v", conj(*[
        Implies(In("v", sets[i]), Forall("w", "v", Forall("e", "e", Implies(
            call(edge_pred(), "e", "v", "w"), near(i))))) for i in range(k)]))
    body = conj(call(part(k), *sets), *outer, local)
    return _mk("Layers", body, VS(*sets), (), {"k": k}, group="layers")


@lru_cache(maxsize=None)
def k_outerplanar(k: int) -> Formula:
    k = _count("k", k, 1)
    sets = [f"V{i}" for i in range(1, k + 1)]
    body: Node = call(layers(k), *sets)
    for s in reversed(sets):
        body = Exists(s, "V", body)
    return _mk("KOuterplanar", body, (), (), {"k": k}, group="layers")


# --------------------------------------------------------------------------
# faces and the rotational order (3-connected hosts)

@lru_cache(maxsize=None)
def face_b3() -> Formula:
    """W induces a cycle whose removal leaves a connected graph."""
    body = conj(
        Exists("F", "E", conj(call(inc_e(), "F", "W"), call(cycle(), "W", "F"))),
        Exists("U", "V", conj(set_eq("u", "v", "U", Not(In("u", "W"))),
                              Exists("D", "E", conj(call(inc_e(), "D", "U"),
                                                    call(conn(), "U", "D"))))))
    return _mk("FaceB3", body, VS("W"), group="faces")


@lru_cache(maxsize=None)
def face_b3_edges() -> Formula:
    """FaceB3 on an edge set: F = IncE(W) for a face vertex set W."""
    body = Exists("W", "V", conj(call(inc_v(), "W", "F"), call(inc_e(), "F", "W"),
                                 call(face_b3(), "W")))
    return _mk("FaceB3E", body, ES("F"), group="faces")


@lru_cache(maxsize=None)
def adj_f() -> Formula:
    """Distinct edges sharing a vertex and lying on a common face boundary."""
    body = conj(Not(Eq("e", "f")),
                Exists("v", "v", conj(Inc("v", "e"), Inc("v", "f"))),
                Exists("D", "E", conj(In("e", "D"), In("f", "D"), call(face_b3_edges(), "D"))))
    return _mk("Adj_F", body, EV("e", "f"), group="faces")


@lru_cache(maxsize=None)
def path_f() -> Formula:
    """D is a face-adjacency path from e to f among the edges at v, avoiding
    the co-anchor c (parameters v and c).  e and f must be incident to v."""
    a = lambda x, y: call(adj_f(), x, y)
    shape = Exists("D2", "E", conj(
        Forall("g", "e", Implies(In("g", "D2"), conj(Inc("v", "g"), Not(Eq("g", "c"))))),
        set_eq("g", "e", "D", disj(In("g", "D2"), Eq("g", "e"), Eq("g", "f")))))
    end = conj(disj(Eq("g", "e"), Eq("g", "f")), exists_in("g2", "e", "D", conj(
        a("g", "g2"),
        forall_in("g3", "e", "D", Implies(Not(Eq("g2", "g3")), Not(a("g", "g3")))))))
    mid = conj(Not(disj(Eq("g", "e"), Eq("g", "f"))),
               exists_in("g2", "e", "D", exists_in("g3", "e", "D", conj(
                   Not(Eq("g2", "g3")), a("g", "g2"), a("g", "g3"),
                   forall_in("g4", "e", "D", Implies(
                       Not(disj(Eq("g4", "g2"), Eq("g4", "g3"))), Not(a("g", "g4"))))))))
    body = conj(Inc("v", "e"), Inc("v", "f"), forall_in("g", "e", "D", disj(end, mid)), shape)
    return _mk("Path_F", body, ES("D") + EV("e", "f"), V("v") + EV("c"), group="faces")


@lru_cache(maxsize=None)
def ori_nb() -> Formula:
    """e precedes f in the rotation at v starting from the anchor a and
    leaving away from the co-anchor c (parameters v, a, c)."""
    pf = path_f()
    body = Exists("De", "E", conj(
        call(pf, "De", "a", "e", "v", "c"),
        Exists("Df", "E", conj(
            call(pf, "Df", "a", "f", "v", "c"),
            subset("g", "e", "De", "Df"), Not(Eq("De", "Df"))))))
    return _mk("oriNB", body, EV("e", "f"), V("v") + EV("a", "c"), group="faces")


# --------------------------------------------------------------------------
# spanning trees: fundamental cycles, remember numbers, bags

@lru_cache(maxsize=None)
def fund_cyc_set() -> Formula:
    """C is the fundamental cycle of the non-tree edge e (parameter F)."""
    body = conj(In("e", "C"), Not(In("e", "F")),
                forall_in("g", "e", "C", disj(Eq("g", "e"), In("g", "F"))),
                Exists("W", "V", conj(call(inc_v(), "W", "C"), call(cycle(), "W", "C"))))
    return _mk("FundCycSet", body, EV("e") + ES("C"), ES("F"), group="remember")


@lru_cache(maxsize=None)
def fund_cyc_v() -> Formula:
    """The fundamental cycle of e passes through the vertex v."""
    body = Exists("C", "E", conj(call(fund_cyc_set(), "e", "C", "F"),
                                 exists_in("g", "e", "C", Inc("v", "g"))))
    return _mk("FundCycV", body, V("v") + EV("e"), ES("F"), group="remember")


@lru_cache(maxsize=None)
def fund_cyc_e() -> Formula:
    """The fundamental cycle of e contains the edge t."""
    body = Exists("C", "E", conj(call(fund_cyc_set(), "e", "C", "F"), In("t", "C")))
    return _mk("FundCycE", body, EV("t", "e"), ES("F"), group="remember")


def _nontree(pred: Callable[[str], Node]) -> Callable[[str], Node]:
    return lambda nm: conj(Not(In(nm, "F")), pred(nm))


@lru_cache(maxsize=None)
def vr_le(kappa: int) -> Formula:
    kappa = _count("kappa", kappa)
    body = Forall("v", "v", at_most(kappa, "e", "e", _nontree(
        lambda nm: call(fund_cyc_v(), "v", nm, "F"))))
    return _mk("vr_le", body, (), ES("F"), {"kappa": kappa}, group="remember")


@lru_cache(maxsize=None)
def er_le(lam: int) -> Formula:
    lam = _count("lambda", lam)
    body = Forall("t", "e", at_most(lam, "e", "e", _nontree(
        lambda nm: call(fund_cyc_e(), "t", nm, "F"))))
    return _mk("er_le", body, (), ES("F"), {"lambda": lam}, group="remember")


@lru_cache(maxsize=None)
def head() -> Formula:
    """v is the endpoint of the tree edge e nearer the root r."""
    body = conj(In("e", "F"), Inc("v", "e"),
                Exists("P", "E", conj(subset("g", "e", "P", "F"),
                                      call(path_between(), "r", "v", "P"),
                                      Not(In("e", "P")))))
    return _mk("Head", body, V("v") + EV("e"), ES("F") + V("r"), group="remember")


@lru_cache(maxsize=None)
def tail() -> Formula:
    """v is the endpoint of the tree edge e farther from the root r."""
    body = conj(In("e", "F"), Inc("v", "e"),
                Exists("P", "E", conj(subset("g", "e", "P", "F"),
                                      call(path_between(), "r", "v", "P"),
                                      In("e", "P"))))
    return _mk("Tail", body, V("v") + EV("e"), ES("F") + V("r"), group="remember")


def _colour_sets(c: int) -> list[str]:
    return [f"K{i}" for i in range(1, c + 1)]


@lru_cache(maxsize=None)
def col_less(c: int) -> Formula:
    """col(v) < col(w) for the colour classes K1..Kc."""
    c = _count("c", c, 1)
    ks = _colour_sets(c)
    body = disj(*[conj(In("v", ks[i]), In("w", ks[j]))
                  for i in range(c) for j in range(i + 1, c)])
    return _mk("ColLess", body, V("v", "w"), VS(*ks), {"c": c}, group="remember")


@lru_cache(maxsize=None)
def rep(c: int) -> Formula:
    """v represents the edge e: with c = 0 every endpoint does, otherwise
    the endpoint of smaller colour."""
    c = _count("c", c)
    if c == 0:
        return _mk("Rep", Inc("v", "e"), V("v") + EV("e"), (), {"c": 0}, group="remember")
    ks = _colour_sets(c)
    body = conj(Inc("v", "e"), Forall("w", "v", Implies(
        conj(Not(Eq("w", "v")), Inc("w", "e")), call(col_less(c), "v", "w", *ks))))
    return _mk("Rep", body, V("v") + EV("e"), VS(*ks), {"c": c}, group="remember")


@lru_cache(maxsize=None)
def bag_v(c: int) -> Formula:
    c = _count("c", c)
    ks = _colour_sets(c)
    rhs = disj(Eq("u", "v"), Exists("e", "e", conj(
        Not(In("e", "F")), call(rep(c), "u", "e", *ks), call(fund_cyc_v(), "v", "e", "F"))))
    return _mk("Bag_V", set_eq("u", "v", "X", rhs), V("v") + VS("X"),
               ES("F") + VS(*ks), {"c": c}, group="remember")


@lru_cache(maxsize=None)
def bag_e(c: int) -> Formula:
    """Bag of the tree edge t (non-tree edges have no bag)."""
    c = _count("c", c)
    ks = _colour_sets(c)
    rhs = disj(Inc("u", "t"), Exists("e", "e", conj(
        Not(In("e", "F")), call(rep(c), "u", "e", *ks), call(fund_cyc_e(), "t", "e", "F"))))
    return _mk("Bag_E", conj(In("t", "F"), set_eq("u", "v", "X", rhs)), EV("t") + VS("X"),
               ES("F") + VS(*ks), {"c": c}, group="remember")


@lru_cache(maxsize=None)
def parent(c: int) -> Formula:
    """Bag X is the parent of bag Y: the head's vertex bag above an edge bag,
    an edge bag above its tail's vertex bag."""
    c = _count("c", c)
    ks = _colour_sets(c)
    bv = lambda v, s: call(bag_v(c), v, s, "F", *ks)
    be = lambda e, s: call(bag_e(c), e, s, "F", *ks)
    body = Exists("v", "v", exists_in("e", "e", "F", disj(
        conj(bv("v", "X"), be("e", "Y"), call(head(), "v", "e", "F", "r")),
        conj(bv("v", "Y"), be("e", "X"), call(tail(), "v", "e", "F", "r")))))
    return _mk("Parent", body, VS("X", "Y"), ES("F") + V("r") + VS(*ks), {"c": c},
               group="remember")


# --------------------------------------------------------------------------
# face remember numbers

@lru_cache(maxsize=None)
def meets() -> Formula:
    """The fundamental cycle of e shares an edge with D and passes v."""
    body = Exists("C", "E", conj(call(fund_cyc_set(), "e", "C", "F"),
                                 exists_in("g", "e", "C", In("g", "D")),
                                 exists_in("g", "e", "C", Inc("v", "g"))))
    return _mk("Meets", body, V("v") + ES("D") + EV("e"), ES("F"), group="faces")


@lru_cache(maxsize=None)
def touches() -> Formula:
    """The fundamental cycle of e shares an edge with D."""
    body = Exists("C", "E", conj(call(fund_cyc_set(), "e", "C", "F"),
                                 exists_in("g", "e", "C", In("g", "D"))))
    return _mk("Touches", body, ES("D") + EV("e"), ES("F"), group="faces")


@lru_cache(maxsize=None)
def fr_le(nu: int) -> Formula:
    """For every vertex v and face boundary D at most nu fundamental cycles
    pass v and share an edge with D (outer face included)."""
    nu = _count("nu", nu)
    body = Forall("v", "v", Forall("D", "E", Implies(
        call(face_b3_edges(), "D"),
        at_most(nu, "e", "e", _nontree(lambda nm: call(meets(), "v", "D", nm, "F"))))))
    return _mk("fr_le", body, (), ES("F"), {"nu": nu}, group="faces")


@lru_cache(maxsize=None)
def fr_face_le(nu: int) -> Formula:
    """Every face boundary D other than the outer one O meets at most nu
    fundamental cycles."""
    nu = _count("nu", nu)
    body = Forall("D", "E", Implies(
        conj(call(face_b3_edges(), "D"), Not(Eq("D", "O"))),
        at_most(nu, "e", "e", _nontree(lambda nm: call(touches(), "D", nm, "F")))))
    return _mk("fr_face_le", body, (), ES("F", "O"), {"nu": nu}, group="faces")


@lru_cache(maxsize=None)
def c_set() -> Formula:
    """C = C(v, D): the non-tree edges whose cycles pass v and meet D."""
    body = set_eq("e", "e", "C", conj(Not(In("e", "F")), call(meets(), "v", "D", "e", "F")))
    return _mk("CSet", body, V("v") + ES("D", "C"), ES("F"), group="faces")


@lru_cache(maxsize=None)
def layer(i: int, k: int) -> Formula:
    """D is a face boundary touching the layer Vi of V1..Vk."""
    k = _count("k", k, 1)
    if not isinstance(i, int) or not 1 <= i <= k:
        raise BadConstants(f"i={i!r} must be in 1..{k}")
    sets = [f"V{j}" for j in range(1, k + 1)]
    body = conj(call(face_b3_edges(), "D"),
                Exists("v", "v", conj(In("v", sets[i - 1]),
                                      exists_in("g", "e", "D", Inc("v", "g")))))
    return _mk("Layer", body, ES("D"), VS(*sets), {"i": i, "k": k}, group="faces")


# --------------------------------------------------------------------------
# blocks and cuts

@lru_cache(maxsize=None)
def cut1() -> Formula:
    """Removing v disconnects the graph."""
    body = Exists("U", "V", conj(set_eq("u", "v", "U", Not(Eq("u", "v"))),
                                 Exists("D", "E", conj(call(inc_e(), "D", "U"),
                                                       Not(call(conn(), "U", "D"))))))
    return _mk("Cut1", body, V("v"), group="blocks")


@lru_cache(maxsize=None)
def sep2() -> Formula:
    """{x, y} (x != y) separates the graph."""
    body = conj(Not(Eq("x", "y")), Exists("U", "V", conj(
        set_eq("u", "v", "U", conj(Not(Eq("u", "x")), Not(Eq("u", "y")))),
        Exists("D", "E", conj(call(inc_e(), "D", "U"), Not(call(conn(), "U", "D")))))))
    return _mk("Sep2", body, V("x", "y"), group="blocks")


@lru_cache(maxsize=None)
def block_like() -> Formula:
    """W induces a 2-connected graph or is the vertex pair of an edge."""
    pair = Exists("x", "v", Exists("y", "v", conj(
        Not(Eq("x", "y")), set_eq("u", "v", "W", disj(Eq("u", "x"), Eq("u", "y"))),
        Exists("e", "e", call(edge_pred(), "e", "x", "y")))))
    body = disj(pair, Exists("D", "E", conj(call(inc_e(), "D", "W"),
                                             call(conn_k(2), "W", "D"))))
    return _mk("BlockLike", body, VS("W"), group="blocks")


@lru_cache(maxsize=None)
def block2() -> Formula:
    """W is a 2-block: maximal among block-like vertex sets."""
    body = conj(call(block_like(), "W"), Forall("U", "V", Implies(
        conj(subset("u", "v", "W", "U"), Not(Eq("U", "W"))), Not(call(block_like(), "U")))))
    return _mk("Block2", body, VS("W"), group="blocks")


@lru_cache(maxsize=None)
def bag_cyc() -> Formula:
    """Bag of the cycle edge e not incident to the cycle root r."""
    body = conj(Not(Inc("r", "e")),
                set_eq("v", "v", "X", disj(Inc("v", "e"), Eq("v", "r"))))
    return _mk("Bag_Cyc", body, EV("e") + VS("X"), V("r"), group="blocks")


# --------------------------------------------------------------------------
# catalog

def call(f: Formula, *args: str) -> Call:
    return Call(f, tuple(args))


_CATALOG: dict[str, tuple[Callable[..., Formula], tuple[str, ...]]] = {
    "Adj": (adj, ()),
    "Edge": (edge_pred, ()),
    "IncV": (inc_v, ()),
    "IncE": (inc_e, ()),
    "Inside": (inside, ()),
    "deg": (deg, ("k",)),
    "Conn": (conn, ()),
    "ConnV": (conn_edg, ()),
    "Conn_k": (conn_k, ("k",)),
    "Cycle": (cycle, ()),
    "Acyclic": (acyclic, ()),
    "Tree": (tree, ()),
    "Path": (path, ()),
    "PathBetween": (path_between, ()),
    "Minor": (minor, ("H",)),
    "Outerplanar": (outerplanar, ()),
    "Part": (part, ("k",)),
    "Layers": (layers, ("k",)),
    "KOuterplanar": (k_outerplanar, ("k",)),
    "FaceB3": (face_b3, ()),
    "FaceB3E": (face_b3_edges, ()),
    "Adj_F": (adj_f, ()),
    "Path_F": (path_f, ()),
    "oriNB": (ori_nb, ()),
    "FundCycSet": (fund_cyc_set, ()),
    "FundCycV": (fund_cyc_v, ()),
    "FundCycE": (fund_cyc_e, ()),
    "vr_le": (vr_le, ("kappa",)),
    "er_le": (er_le, ("lambda",)),
    "Head": (head, ()),
    "Tail": (tail, ()),
    "ColLess": (col_less, ("c",)),
    "Rep": (rep, ("c",)),
    "Bag_V": (bag_v, ("c",)),
    "Bag_E": (bag_e, ("c",)),
    "Parent": (parent, ("c",)),
    "Meets": (meets, ()),
    "Touches": (touches, ()),
    "fr_le": (fr_le, ("nu",)),
    "fr_face_le": (fr_face_le, ("nu",)),
    "CSet": (c_set, ()),
    "Layer": (layer, ("i", "k")),
    "Cut1": (cut1, ()),
    "Sep2": (sep2, ()),
    "BlockLike": (block_like, ()),
    "Block2": (block2, ()),
    "Bag_Cyc": (bag_cyc, ()),
}

DEFAULTS = {"c": 0}


def names() -> list[str]:
    return sorted(_CATALOG)


def library(name: str, constants: Mapping[str, object] | None = None) -> Formula:
    """The catalog formula ``name`` instantiated with ``constants``."""
    if name not in _CATALOG:
        raise UnknownPredicate(f"unknown predicate {name!r}")
    builder, needed = _CATALOG[name]
    constants = dict(constants or {})
    extra = set(constants) - set(needed)
    if extra:
        raise BadConstants(f"{name} takes no constants {sorted(extra)}")
    values = []
    for c in needed:
        if c in constants:
            values.append(constants[c])
        elif c in DEFAULTS:
            values.append(DEFAULTS[c])
        else:
            raise BadConstants(f"{name} needs the constant {c}")
    try:
        return builder(*values)
    except TypeError as exc:          # unhashable constant values
        raise BadConstants(str(exc)) from exc
