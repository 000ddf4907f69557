"""Call-by-value small-step semantics with fuel-bounded evaluation.

Redex search follows the evaluation contexts: receiver before arguments,
arguments left to right.  Boolean operators short-circuit, consuming one step;
integers wrap to 64 bits.
"""

from __future__ import annotations

from dataclasses import dataclass

from .context import GlobalCtx, preprocess
from .syntax import (
    App,
    BoolLit,
    Constructor,
    Consumer,
    CtrCall,
    Expr,
    Generator,
    If,
    IntLit,
    Interface,
    New,
    Obj,
    PrimOp,
    Program,
    SELF,
    Sel,
    subst,
    THIS,
    Var,
)

# ---------------------------------------------------------------------------
# Values and outcomes


class Value:
    """A fully evaluated result."""


@dataclass(frozen=True)
class IntV(Value):
    value: int


@dataclass(frozen=True)
class BoolV(Value):
    value: bool


@dataclass(frozen=True)
class ObjV(Value):
    name: str
    fields: tuple[Value, ...]


@dataclass(frozen=True)
class Stepped:
    next: Expr


@dataclass(frozen=True)
class Done:
    value: Value


@dataclass(frozen=True)
class Stuck:
    reason: str
    expr: Expr | None = None


@dataclass(frozen=True)
class FuelExhausted:
    last: Expr


@dataclass(frozen=True)
class Trace:
    steps: tuple[Expr, ...]
    outcome: Done | FuelExhausted | Stuck


def is_value(e: Expr) -> bool:
    return isinstance(e, (IntLit, BoolLit, Obj))


def to_value(e: Expr) -> Value:
    match e:
        case IntLit(v):
            return IntV(v)
        case BoolLit(v):
            return BoolV(v)
        case Obj(name, args):
            return ObjV(name, tuple(to_value(a) for a in args))
    raise ValueError(f"not a value form: {e!r}")


def value_to_expr(v: Value) -> Expr:
    match v:
        case IntV(x):
            return IntLit(x)
        case BoolV(x):
            return BoolLit(x)
        case ObjV(name, fields):
            return Obj(name, tuple(value_to_expr(f) for f in fields))
    raise ValueError(f"not a value: {v!r}")


def format_value(v: Value) -> str:
    match v:
        case IntV(x):
            return str(x)
        case BoolV(x):
            return "true" if x else "false"
        case ObjV(name, fields):
            return "obj(" + ", ".join([name] + [format_value(f) for f in fields]) + ")"
    raise ValueError(f"not a value: {v!r}")


# ---------------------------------------------------------------------------
# Body lookup


def dtr_body(f: str, c: str, ctx: GlobalCtx) -> tuple[tuple[str, ...], tuple[str, ...], Expr] | None:
    """Field names, parameter names, and body for destructor f on class C.

    The class's own definition wins; otherwise the interface default applies
    with no fields in scope.  None when neither exists.
    """
    g = ctx.defs.get(c)
    if not isinstance(g, Generator):
        return None
    for fun in g.funs:
        if fun.name == f and fun.body is not None:
            return tuple(p.name for p in g.fields), tuple(p.name for p in fun.params), fun.body
    parent = ctx.defs.get(g.parent)
    if isinstance(parent, Interface):
        for m in parent.dtrs:
            if m.name == f and m.body is not None:
                return (), tuple(p.name for p in m.params), m.body
    return None


def csm_body(f: str, c: str, ctx: GlobalCtx) -> tuple[tuple[str, ...], tuple[str, ...], Expr] | None:
    """Pattern variables, parameter names, and body for consumer f on constructor C.

    A clause naming C wins; otherwise the wildcard clause applies with no
    pattern variables.  None when neither exists.
    """
    ctor = ctx.defs.get(c)
    if not isinstance(ctor, Constructor):
        return None
    consumer = ctx.defs.get((f, ctor.parent))
    if not isinstance(consumer, Consumer):
        return None
    params = tuple(p.name for p in consumer.params)
    clause = consumer.clause_for(c)
    if clause is not None:
        return clause.pattern.vars, params, clause.body
    wild = consumer.wildcard_clause()
    if wild is not None:
        return (), params, wild.body
    return None


# ---------------------------------------------------------------------------
# Stepping


def _wrap64(n: int) -> int:
    return (n + 2**63) % 2**64 - 2**63


def _step_args(args: tuple[Expr, ...], ctx: GlobalCtx) -> tuple[int, Stepped | Stuck | None]:
    """Step the leftmost non-value argument; index -1 when all are values."""
    for i, a in enumerate(args):
        if not is_value(a):
            return i, _step(a, ctx)
    return -1, None


def _bind(
    fields: tuple[str, ...],
    field_vals: tuple[Expr, ...],
    params: tuple[str, ...],
    args: tuple[Expr, ...],
    receiver: tuple[str, Expr],
) -> dict[str, Expr] | None:
    # defaults and wildcard clauses bind no fields, so an empty field list is
    # fine regardless of how many field values the object carries
    if fields and len(fields) != len(field_vals):
        return None
    if len(params) != len(args):
        return None
    mapping = {receiver[0]: receiver[1]}
    mapping.update(zip(fields, field_vals))
    mapping.update(zip(params, args))
    return mapping


def _step(e: Expr, ctx: GlobalCtx) -> Stepped | Stuck | None:
    """One reduction; None when e is already a value."""
    match e:
        case IntLit() | BoolLit() | Obj():
            return None
        case Var(name):
            return Stuck(f"unbound variable {name!r}", e)
        case CtrCall(c, args):
            i, sub = _step_args(args, ctx)
            if i >= 0:
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(CtrCall(c, args[:i] + (sub.next,) + args[i + 1 :]))
            if not isinstance(ctx.defs.get(c), Constructor):
                return Stuck(f"{c} is not a constructor", e)
            return Stepped(Obj(c, args))
        case New(c, args):
            i, sub = _step_args(args, ctx)
            if i >= 0:
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(New(c, args[:i] + (sub.next,) + args[i + 1 :]))
            if not isinstance(ctx.defs.get(c), Generator):
                return Stuck(f"{c} is not a class", e)
            return Stepped(Obj(c, args))
        case Sel(recv, f, args):
            if not is_value(recv):
                sub = _step(recv, ctx)
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(Sel(sub.next, f, args))
            i, sub = _step_args(args, ctx)
            if i >= 0:
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(Sel(recv, f, args[:i] + (sub.next,) + args[i + 1 :]))
            if not isinstance(recv, Obj):
                return Stuck(f"selection of {f!r} on a non-object", e)
            found = dtr_body(f, recv.name, ctx)
            if found is None:
                return Stuck(f"no destructor {f!r} on {recv.name}", e)
            fields, params, body = found
            mapping = _bind(fields, recv.args, params, args, (THIS, recv))
            if mapping is None:
                return Stuck(f"arity mismatch invoking {f!r} on {recv.name}", e)
            return Stepped(subst(body, mapping))
        case App(f, recv, args):
            if not is_value(recv):
                sub = _step(recv, ctx)
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(App(f, sub.next, args))
            i, sub = _step_args(args, ctx)
            if i >= 0:
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(App(f, recv, args[:i] + (sub.next,) + args[i + 1 :]))
            if not isinstance(recv, Obj):
                return Stuck(f"consumer {f!r} applied to a non-object", e)
            found = csm_body(f, recv.name, ctx)
            if found is None:
                return Stuck(f"no consumer {f!r} covers {recv.name}", e)
            pat_vars, params, body = found
            mapping = _bind(pat_vars, recv.args, params, args, (SELF, recv))
            if mapping is None:
                return Stuck(f"arity mismatch applying {f!r} to {recv.name}", e)
            return Stepped(subst(body, mapping))
        case PrimOp(op, lhs, rhs):
            if not is_value(lhs):
                sub = _step(lhs, ctx)
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(PrimOp(op, sub.next, rhs))
            if op in ("&&", "||"):
                if not isinstance(lhs, BoolLit):
                    return Stuck(f"{op} on a non-boolean", e)
                if op == "&&":
                    return Stepped(rhs if lhs.value else BoolLit(False))
                return Stepped(BoolLit(True) if lhs.value else rhs)
            if not is_value(rhs):
                sub = _step(rhs, ctx)
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(PrimOp(op, lhs, sub.next))
            if not isinstance(lhs, IntLit) or not isinstance(rhs, IntLit):
                return Stuck(f"{op} on non-integers", e)
            a, b = lhs.value, rhs.value
            match op:
                case "+":
                    return Stepped(IntLit(_wrap64(a + b)))
                case "-":
                    return Stepped(IntLit(_wrap64(a - b)))
                case "*":
                    return Stepped(IntLit(_wrap64(a * b)))
                case "==":
                    return Stepped(BoolLit(a == b))
                case "<=":
                    return Stepped(BoolLit(a <= b))
                case "<":
                    return Stepped(BoolLit(a < b))
            return Stuck(f"unknown operator {op!r}", e)
        case If(cond, then, els):
            if not is_value(cond):
                sub = _step(cond, ctx)
                if isinstance(sub, Stuck):
                    return sub
                return Stepped(If(sub.next, then, els))
            if not isinstance(cond, BoolLit):
                return Stuck("condition of if is not a boolean", e)
            return Stepped(then if cond.value else els)
    return Stuck(f"no rule applies to {e!r}", e)


def step(e: Expr, ctx: GlobalCtx) -> Stepped | Done | Stuck:
    """Reduce exactly one redex, or report the value / stuck state."""
    out = _step(e, ctx)
    if out is None:
        return Done(to_value(e))
    return out


def eval_program(
    program: Program, fuel: int = 100_000, ctx: GlobalCtx | None = None
) -> Done | FuelExhausted | Stuck:
    """Iterate the step relation on the main expression at most fuel times."""
    if ctx is None:
        ctx = preprocess(program)
    e = program.main
    remaining = fuel
    while True:
        out = _step(e, ctx)
        if out is None:
            return Done(to_value(e))
        if isinstance(out, Stuck):
            return out
        if remaining <= 0:
            return FuelExhausted(e)
        remaining -= 1
        e = out.next


def trace(program: Program, fuel: int = 100_000, ctx: GlobalCtx | None = None) -> Trace:
    """The step sequence starting at the main expression, up to value or fuel."""
    if ctx is None:
        ctx = preprocess(program)
    e = program.main
    steps = [e]
    remaining = fuel
    while True:
        out = _step(e, ctx)
        if out is None:
            return Trace(tuple(steps), Done(to_value(e)))
        if isinstance(out, Stuck):
            return Trace(tuple(steps), out)
        if remaining <= 0:
            return Trace(tuple(steps), FuelExhausted(e))
        remaining -= 1
        e = out.next
        steps.append(e)
