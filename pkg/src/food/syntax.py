"""Abstract syntax of FOOD programs plus the desugaring and canonicalization passes.

All nodes are immutable; structural equality is dataclass equality and ignores
the (non-compared) source positions attached to definitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

# ---------------------------------------------------------------------------
# Types


class Type:
    """A FOOD type: a named datatype/interface, Int, Bool, or an arrow."""


@dataclass(frozen=True)
class Named(Type):
    name: str


@dataclass(frozen=True)
class IntT(Type):
    pass


@dataclass(frozen=True)
class BoolT(Type):
    pass


@dataclass(frozen=True)
class Arrow(Type):
    """Arrows occur only in collected signatures, never in parsed source."""

    params: tuple[Type, ...]
    ret: Type


INT = IntT()
BOOL = BoolT()


# ---------------------------------------------------------------------------
# Expressions

PRIM_OPS = ("+", "-", "*", "&&", "||", "==", "<=", "<")


class Expr:
    """Base class for FOOD expressions."""


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Sel(Expr):
    """Method selection ``recv.f(args)``."""

    recv: Expr
    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class App(Expr):
    """Consumer application ``f(recv)(args)``."""

    name: str
    recv: Expr
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class CtrCall(Expr):
    """Constructor call ``C(args)``."""

    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class New(Expr):
    """Object creation ``new C(args)``."""

    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class Obj(Expr):
    """Runtime object; never appears in parsed source. Args are value forms."""

    name: str
    args: tuple[Expr, ...]


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class PrimOp(Expr):
    op: str
    lhs: Expr
    rhs: Expr


@dataclass(frozen=True)
class If(Expr):
    cond: Expr
    then: Expr
    els: Expr


# ---------------------------------------------------------------------------
# Definitions


@dataclass(frozen=True)
class Param:
    name: str
    type: Type


@dataclass(frozen=True)
class Pattern:
    """Top-level pattern ``C(vars)``; a wildcard has name None and no vars."""

    name: str | None
    vars: tuple[str, ...] = ()

    @property
    def is_wildcard(self) -> bool:
        return self.name is None


WILDCARD = Pattern(None)


@dataclass(frozen=True)
class Clause:
    pattern: Pattern
    body: Expr


@dataclass(frozen=True)
class Dtr:
    """Interface member: a declaration (no body) or a function (with body)."""

    name: str
    params: tuple[Param, ...]
    ret: Type
    body: Expr | None = None


class Def:
    """Base class for the five definition forms."""


@dataclass(frozen=True)
class Datatype(Def):
    name: str
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Interface(Def):
    name: str
    dtrs: tuple[Dtr, ...]
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Constructor(Def):
    name: str
    fields: tuple[Param, ...]
    parent: str
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Generator(Def):
    name: str
    fields: tuple[Param, ...]
    parent: str
    funs: tuple[Dtr, ...]
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Consumer(Def):
    """Pattern-matching function on a datatype.

    Exactly one of ``clauses``/``body`` is set; a bare expression body is the
    sugared form that ``desugar`` rewrites into a single wildcard clause.
    """

    name: str
    self_type: str
    params: tuple[Param, ...]
    ret: Type
    clauses: tuple[Clause, ...] | None = None
    body: Expr | None = None
    pos: tuple[int, int] | None = field(default=None, compare=False, repr=False)

    def wildcard_clause(self) -> Clause | None:
        for clause in self.clauses or ():
            if clause.pattern.is_wildcard:
                return clause
        return None

    def clause_for(self, ctor: str) -> Clause | None:
        for clause in self.clauses or ():
            if clause.pattern.name == ctor:
                return clause
        return None


@dataclass(frozen=True)
class Program:
    defs: tuple[Def, ...]
    main: Expr


SELF = "self"
THIS = "this"
RESERVED_BINDERS = (SELF, THIS)


# ---------------------------------------------------------------------------
# Passes


def desugar(program: Program) -> Program:
    """Rewrite every bare-expression consumer body into one wildcard clause."""
    defs = []
    for d in program.defs:
        if isinstance(d, Consumer) and d.body is not None:
            d = replace(d, clauses=(Clause(WILDCARD, d.body),), body=None)
        defs.append(d)
    return Program(tuple(defs), program.main)


def canonicalize(program: Program) -> Program:
    """Normalize definition placement and clause order.

    Each datatype is immediately followed by its consumers in source consumer
    order, and each consumer's named clauses are reordered to the declaration
    order of the datatype's constructors (any wildcard stays last).  The
    relative order of all other definitions is preserved.
    """
    ctor_order: dict[str, list[str]] = {}
    consumers: dict[str, list[Consumer]] = {}
    datatypes = {d.name for d in program.defs if isinstance(d, Datatype)}
    for d in program.defs:
        if isinstance(d, Constructor):
            ctor_order.setdefault(d.parent, []).append(d.name)
        elif isinstance(d, Consumer) and d.self_type in datatypes:
            consumers.setdefault(d.self_type, []).append(d)

    def sort_clauses(c: Consumer) -> Consumer:
        if c.clauses is None:
            return c
        order = ctor_order.get(c.self_type, [])
        named = [cl for cl in c.clauses if not cl.pattern.is_wildcard]
        wild = [cl for cl in c.clauses if cl.pattern.is_wildcard]
        named.sort(
            key=lambda cl: order.index(cl.pattern.name)
            if cl.pattern.name in order
            else len(order)
        )
        return replace(c, clauses=tuple(named + wild))

    defs: list[Def] = []
    for d in program.defs:
        if isinstance(d, Consumer) and d.self_type in datatypes:
            continue  # re-emitted right after its datatype
        defs.append(d)
        if isinstance(d, Datatype):
            defs.extend(sort_clauses(c) for c in consumers.get(d.name, []))
    return Program(tuple(defs), program.main)


def subst(e: Expr, mapping: dict[str, Expr]) -> Expr:
    """Simultaneous variable substitution.

    FOOD expressions contain no binders, so no capture is possible.
    """
    if not mapping:
        return e
    match e:
        case Var(name):
            return mapping.get(name, e)
        case Sel(recv, name, args):
            return Sel(subst(recv, mapping), name, tuple(subst(a, mapping) for a in args))
        case App(name, recv, args):
            return App(name, subst(recv, mapping), tuple(subst(a, mapping) for a in args))
        case CtrCall(name, args):
            return CtrCall(name, tuple(subst(a, mapping) for a in args))
        case New(name, args):
            return New(name, tuple(subst(a, mapping) for a in args))
        case PrimOp(op, lhs, rhs):
            return PrimOp(op, subst(lhs, mapping), subst(rhs, mapping))
        case If(cond, then, els):
            return If(subst(cond, mapping), subst(then, mapping), subst(els, mapping))
        case _:
            return e  # literals and runtime objects


def free_vars(e: Expr) -> set[str]:
    match e:
        case Var(name):
            return {name}
        case Sel(recv, _, args) | App(_, recv, args):
            out = free_vars(recv)
            for a in args:
                out |= free_vars(a)
            return out
        case CtrCall(_, args) | New(_, args):
            out = set()
            for a in args:
                out |= free_vars(a)
            return out
        case PrimOp(_, lhs, rhs):
            return free_vars(lhs) | free_vars(rhs)
        case If(cond, then, els):
            return free_vars(cond) | free_vars(then) | free_vars(els)
        case _:
            return set()


def contains_obj(e: Expr) -> bool:
    match e:
        case Obj():
            return True
        case Sel(recv, _, args) | App(_, recv, args):
            return contains_obj(recv) or any(contains_obj(a) for a in args)
        case CtrCall(_, args) | New(_, args):
            return any(contains_obj(a) for a in args)
        case PrimOp(_, lhs, rhs):
            return contains_obj(lhs) or contains_obj(rhs)
        case If(cond, then, els):
            return contains_obj(cond) or contains_obj(then) or contains_obj(els)
        case _:
            return False
