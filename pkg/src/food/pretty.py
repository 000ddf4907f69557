"""Pretty-printing of FOOD programs back to concrete syntax.

``parse(pretty(p))`` is structurally equal to ``p`` for any program free of
runtime objects; the fuzz suite exercises that round trip.
"""

from __future__ import annotations

from .syntax import (
    App,
    Arrow,
    BoolLit,
    BoolT,
    Clause,
    Constructor,
    Consumer,
    CtrCall,
    Datatype,
    Def,
    Dtr,
    Expr,
    Generator,
    If,
    IntLit,
    IntT,
    Interface,
    Named,
    New,
    Obj,
    Param,
    PrimOp,
    Program,
    Sel,
    Type,
    Var,
)

# Precedence levels, loosest first.  A child is parenthesized whenever its
# level is below the minimum its position demands.
_IF = 0
_PREC = {"||": 1, "&&": 2, "==": 3, "<=": 3, "<": 3, "+": 4, "-": 4, "*": 5}
_POSTFIX = 6


def pretty_type(t: Type) -> str:
    match t:
        case Named(name):
            return name
        case IntT():
            return "Int"
        case BoolT():
            return "Bool"
        case Arrow(params, ret):
            return "(" + ", ".join(pretty_type(p) for p in params) + ") -> " + pretty_type(ret)
    raise ValueError(f"unknown type: {t!r}")


def _level(e: Expr) -> int:
    match e:
        case If():
            return _IF
        case PrimOp(op, _, _):
            return _PREC[op]
        case _:
            return _POSTFIX


def pretty_expr(e: Expr, min_prec: int = 0, *, runtime: bool = False) -> str:
    """Render one expression; with ``runtime`` set, objects print as obj(...)."""
    text = _expr(e, runtime)
    if _level(e) < min_prec:
        return "(" + text + ")"
    return text


def _args(args: tuple[Expr, ...], runtime: bool) -> str:
    return "(" + ", ".join(pretty_expr(a, runtime=runtime) for a in args) + ")"


def _expr(e: Expr, runtime: bool) -> str:
    match e:
        case Var(name):
            return name
        case IntLit(v):
            return str(v)
        case BoolLit(v):
            return "true" if v else "false"
        case Sel(recv, name, args):
            return pretty_expr(recv, _POSTFIX, runtime=runtime) + "." + name + _args(args, runtime)
        case App(name, recv, args):
            head = name + "(" + pretty_expr(recv, runtime=runtime) + ")"
            return head + (_args(args, runtime) if args else "")
        case CtrCall(name, args):
            return name + _args(args, runtime)
        case New(name, args):
            return "new " + name + _args(args, runtime)
        case Obj(name, args):
            if not runtime:
                raise ValueError("runtime object is not printable source")
            return "obj(" + ", ".join([name] + [pretty_expr(a, runtime=True) for a in args]) + ")"
        case PrimOp(op, lhs, rhs):
            prec = _PREC[op]
            return (
                pretty_expr(lhs, prec, runtime=runtime)
                + f" {op} "
                + pretty_expr(rhs, prec + 1, runtime=runtime)
            )
        case If(cond, then, els):
            return (
                "if ("
                + pretty_expr(cond, runtime=runtime)
                + ") "
                + pretty_expr(then, runtime=runtime)
                + " else "
                + pretty_expr(els, runtime=runtime)
            )
    raise ValueError(f"unknown expression: {e!r}")


def _params(params: tuple[Param, ...]) -> str:
    return "(" + ", ".join(f"{p.name}: {pretty_type(p.type)}" for p in params) + ")"


def _dtr(d: Dtr, indent: str) -> str:
    head = f"{indent}def {d.name}{_params(d.params)}: {pretty_type(d.ret)}"
    if d.body is None:
        return head
    return head + " = " + pretty_expr(d.body)


def _clause(c: Clause, indent: str) -> str:
    if c.pattern.is_wildcard:
        pat = "_"
    else:
        pat = c.pattern.name + "(" + ", ".join(c.pattern.vars) + ")"
    return f"{indent}case {pat} => " + pretty_expr(c.body)


def pretty_def(d: Def) -> str:
    match d:
        case Datatype(name):
            return f"data {name}"
        case Interface(name, dtrs):
            if not dtrs:
                return f"interface {name} {{}}"
            members = "\n".join(_dtr(m, "  ") for m in dtrs)
            return f"interface {name} {{\n{members}\n}}"
        case Constructor(name, fields, parent):
            return f"case {name}{_params(fields)} extends {parent}"
        case Generator(name, fields, parent, funs):
            head = f"class {name}{_params(fields)} implements {parent}"
            if not funs:
                return head + " {}"
            members = "\n".join(_dtr(m, "  ") for m in funs)
            return head + " {\n" + members + "\n}"
        case Consumer(name, self_type, params, ret, clauses, body):
            head = f"def {name}(self: {self_type}){_params(params)}: {pretty_type(ret)} = "
            if body is not None:
                return head + pretty_expr(body)
            if not clauses:
                return head + "match {}"
            lines = "\n".join(_clause(c, "  ") for c in clauses)
            return head + "match {\n" + lines + "\n}"
    raise ValueError(f"unknown definition: {d!r}")


def pretty(program: Program) -> str:
    """Render a whole program; rejects programs containing runtime objects."""
    parts = [pretty_def(d) for d in program.defs]
    parts.append(pretty_expr(program.main))
    return "\n".join(parts) + "\n"
