"""Formula syntax trees for MSOL/CMSOL over graphs.

Sorts: ``v`` vertex, ``e`` edge, ``V`` vertex set, ``E`` edge set.  Terms are
variable names; the names ``V`` and ``E`` denote the whole vertex and edge
set unless a quantifier binds them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..errors import GraphError

SORTS = ("v", "e", "V", "E")
ELEMENT_OF = {"V": "v", "E": "e"}
UNIVERSE = {"V": "V", "E": "E"}
MAX_FORMULA_SIZE = 200_000


class SortError(GraphError):
    def __init__(self, variable: str, message: str = ""):
        super().__init__(f"{variable}: {message}" if message else variable)
        self.variable = variable


class FormulaTooLarge(GraphError):
    pass


class BadConstants(GraphError):
    pass


@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    def __post_init__(self):
        if self.sort not in SORTS:
            raise SortError(self.name, f"unknown sort {self.sort!r}")


class Node:
    """Base class of all formula nodes."""

    def children(self) -> tuple["Node", ...]:
        return ()


# --------------------------------------------------------------------------
# atoms

@dataclass(frozen=True)
class Const(Node):
    value: bool


@dataclass(frozen=True)
class Eq(Node):
    a: str
    b: str


@dataclass(frozen=True)
class Inc(Node):
    v: str
    e: str


@dataclass(frozen=True)
class In(Node):
    x: str
    s: str


@dataclass(frozen=True)
class Edg(Node):
    """Adjacency in |G|_1; includes the virtual pairs of the structure."""
    x: str
    y: str


@dataclass(frozen=True)
class EdgHost(Node):
    """Adjacency by host edges only."""
    x: str
    y: str


@dataclass(frozen=True)
class EdgVirt(Node):
    """The virtual edge relation edg_Virt."""
    x: str
    y: str


@dataclass(frozen=True)
class Edg2(Node):
    """edg'(e, x, y) of |G|_2: e joins x and y."""
    e: str
    x: str
    y: str


@dataclass(frozen=True)
class Mod(Node):
    """|S| mod q = p."""
    p: int
    q: int
    s: str

    def __post_init__(self):
        if not (0 <= self.p < self.q):
            raise BadConstants(f"mod[{self.p},{self.q}] needs 0 <= p < q")


@dataclass(frozen=True)
class Minor(Node):
    """(V', E') contains the fixed graph ``h`` as a minor (brute force)."""
    h: str
    vs: str
    es: str


# --------------------------------------------------------------------------
# connectives and quantifiers

@dataclass(frozen=True)
class Not(Node):
    f: Node

    def children(self):
        return (self.f,)


@dataclass(frozen=True)
class And(Node):
    fs: tuple[Node, ...]

    def children(self):
        return self.fs


@dataclass(frozen=True)
class Or(Node):
    fs: tuple[Node, ...]

    def children(self):
        return self.fs


@dataclass(frozen=True)
class Implies(Node):
    a: Node
    b: Node

    def children(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class Iff(Node):
    a: Node
    b: Node

    def children(self):
        return (self.a, self.b)


@dataclass(frozen=True)
class Exists(Node):
    var: str
    sort: str
    body: Node

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Forall(Node):
    var: str
    sort: str
    body: Node

    def children(self):
        return (self.body,)


@dataclass(frozen=True)
class Call(Node):
    """Use of a named formula with its free variables bound to ``args``."""
    formula: "Formula"
    args: tuple[str, ...]


# --------------------------------------------------------------------------
# formulas with a signature

@dataclass(frozen=True)
class Formula:
    """A formula with declared free variables: arguments, then parameters."""
    body: Node
    args: tuple[Var, ...] = ()
    params: tuple[Var, ...] = ()
    name: str = ""
    constants: tuple[tuple[str, object], ...] = ()
    meta: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def free(self) -> tuple[Var, ...]:
        return self.args + self.params

    def __post_init__(self):
        names = [v.name for v in self.free]
        if len(set(names)) != len(names):
            raise SortError(",".join(names), "duplicate free variable")
        if size(self.body) > MAX_FORMULA_SIZE:
            raise FormulaTooLarge(f"formula {self.name or '<anon>'} exceeds {MAX_FORMULA_SIZE} nodes")
        check_sorts(self.body, {v.name: v.sort for v in self.free})


def atom_slots(node: Node) -> list[tuple[str, tuple[str, ...]]]:
    """(name, allowed sorts) for every variable position of an atom."""
    if isinstance(node, Eq):
        return [(node.a, SORTS), (node.b, SORTS)]
    if isinstance(node, Inc):
        return [(node.v, ("v",)), (node.e, ("e",))]
    if isinstance(node, In):
        return [(node.x, ("v", "e")), (node.s, ("V", "E"))]
    if isinstance(node, (Edg, EdgHost, EdgVirt)):
        return [(node.x, ("v",)), (node.y, ("v",))]
    if isinstance(node, Edg2):
        return [(node.e, ("e",)), (node.x, ("v",)), (node.y, ("v",))]
    if isinstance(node, Mod):
        return [(node.s, ("V", "E"))]
    if isinstance(node, Minor):
        return [(node.vs, ("V",)), (node.es, ("E",))]
    return []


def lookup(name: str, scope: dict[str, str]) -> str:
    if name in scope:
        return scope[name]
    if name in UNIVERSE:
        return UNIVERSE[name]
    raise SortError(name, "unbound variable")


def check_sorts(node: Node, scope: dict[str, str]) -> None:
    stack = [(node, scope)]
    while stack:
        x, sc = stack.pop()
        if isinstance(x, (Exists, Forall)):
            if x.sort not in SORTS:
                raise SortError(x.var, f"unknown sort {x.sort!r}")
            stack.append((x.body, {**sc, x.var: x.sort}))
            continue
        if isinstance(x, Call):
            sig = x.formula.free
            if len(sig) != len(x.args):
                raise SortError(x.formula.name, f"expects {len(sig)} arguments, got {len(x.args)}")
            for var, a in zip(sig, x.args):
                if lookup(a, sc) != var.sort:
                    raise SortError(a, f"argument of {x.formula.name} must have sort {var.sort}")
            continue
        slots = atom_slots(x)
        for name, allowed in slots:
            if lookup(name, sc) not in allowed:
                raise SortError(name, f"sort {lookup(name, sc)} not allowed in {type(x).__name__}")
        if isinstance(x, Eq) and lookup(x.a, sc) != lookup(x.b, sc):
            raise SortError(x.b, "equality between different sorts")
        if isinstance(x, In) and ELEMENT_OF[lookup(x.s, sc)] != lookup(x.x, sc):
            raise SortError(x.x, f"cannot be a member of {x.s}")
        for c in x.children():
            stack.append((c, sc))


def walk(node: Node) -> Iterator[Node]:
    stack = [node]
    while stack:
        x = stack.pop()
        yield x
        stack.extend(x.children())


def size(node: Node) -> int:
    return sum(1 for _ in walk(node))


def free_vars(node: Node) -> frozenset[str]:
    """Free variable names, universe constants included when unbound."""
    if isinstance(node, (Exists, Forall)):
        return free_vars(node.body) - {node.var}
    if isinstance(node, Call):
        return frozenset(node.args)
    out = frozenset(n for n, _ in atom_slots(node))
    for c in node.children():
        out |= free_vars(c)
    return out


# --------------------------------------------------------------------------
# builders

def conj(*fs: Node) -> Node:
    flat: list[Node] = []
    for f in fs:
        if isinstance(f, And):
            flat.extend(f.fs)
        elif f == Const(True):
            continue
        else:
            flat.append(f)
    if not flat:
        return Const(True)
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*fs: Node) -> Node:
    flat: list[Node] = []
    for f in fs:
        if isinstance(f, Or):
            flat.extend(f.fs)
        elif f == Const(False):
            continue
        else:
            flat.append(f)
    if not flat:
        return Const(False)
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


def exists(var: str, sort: str, body: Node) -> Node:
    return Exists(var, sort, body)


def forall(var: str, sort: str, body: Node) -> Node:
    return Forall(var, sort, body)


def exists_in(var: str, sort: str, s: str, body: Node) -> Node:
    """(exists var in s) body."""
    return Exists(var, sort, conj(In(var, s), body))


def forall_in(var: str, sort: str, s: str, body: Node) -> Node:
    """(forall var in s) body."""
    return Forall(var, sort, Implies(In(var, s), body))


def call(f: Formula, *args: str) -> Call:
    return Call(f, tuple(args))
