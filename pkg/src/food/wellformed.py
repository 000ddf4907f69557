"""Static checks assumed before translation.

Collects one diagnostic per violation: scoping (including binder
disjointness, which keeps the evaluation substitutions well defined), exact
interface implementation, pattern exhaustiveness, the pattern/field naming
restriction, constructor/class call arity, and finally a full typing pass so
that a clean check guarantees the transformation cannot fail.
"""

from __future__ import annotations

from .context import GlobalCtx
from .diagnostics import Diagnostic
from .syntax import (
    App,
    Constructor,
    Consumer,
    CtrCall,
    Datatype,
    Dtr,
    Expr,
    Generator,
    If,
    Interface,
    Named,
    New,
    Obj,
    Param,
    PrimOp,
    Program,
    RESERVED_BINDERS,
    SELF,
    Sel,
    THIS,
    Type,
    Var,
)
from .transform import typing_diagnostics


def check(program: Program, ctx: GlobalCtx) -> list[Diagnostic]:
    """Check a desugared program against its unrestricted context.

    Returns the empty list when the program is well formed.
    """
    checker = _Checker(program, ctx)
    checker.run()
    if not checker.diags:
        checker.diags.extend(typing_diagnostics(program, ctx))
    return checker.diags


class _Checker:
    def __init__(self, program: Program, ctx: GlobalCtx):
        self.program = program
        self.ctx = ctx
        self.diags: list[Diagnostic] = []
        self.declared = set(ctx.dt) | set(ctx.it)

    def report(self, message: str, pos: tuple[int, int] | None) -> None:
        line, col = pos or (0, 0)
        self.diags.append(Diagnostic(message, line, col))

    def run(self) -> None:
        for d in self.program.defs:
            match d:
                case Interface():
                    self.check_interface(d)
                case Generator():
                    self.check_generator(d)
                case Constructor():
                    self.check_params(d.fields, f"constructor {d.name}", d.pos)
                case Consumer():
                    self.check_consumer(d)
                case Datatype():
                    pass
        self.check_expr(self.program.main, set(), None)

    # -- helpers

    def check_type(self, t: Type, where: str, pos: tuple[int, int] | None) -> None:
        if isinstance(t, Named) and t.name not in self.declared:
            self.report(f"{where} mentions undeclared type {t.name}", pos)

    def check_params(self, params: tuple[Param, ...], where: str, pos: tuple[int, int] | None) -> list[str]:
        seen: list[str] = []
        for p in params:
            if p.name in RESERVED_BINDERS:
                self.report(f"{where} declares reserved name {p.name!r}", pos)
            if p.name in seen:
                self.report(f"{where} declares {p.name!r} twice", pos)
            seen.append(p.name)
            self.check_type(p.type, where, pos)
        return seen

    # -- definitions

    def check_interface(self, d: Interface) -> None:
        for m in d.dtrs:
            where = f"destructor {m.name} of {d.name}"
            params = self.check_params(m.params, where, d.pos)
            self.check_type(m.ret, where, d.pos)
            if m.body is not None:
                self.check_expr(m.body, {THIS, *params}, d.pos)

    def check_generator(self, d: Generator) -> None:
        where = f"class {d.name}"
        fields = self.check_params(d.fields, where, d.pos)
        if d.parent not in self.ctx.it:
            return  # reported by preprocessing
        declared = {m.name: m for m in self.interface_members(d.parent)}
        required = {name for name, m in declared.items() if m.body is None}
        seen: set[str] = set()
        for fun in d.funs:
            mwhere = f"method {fun.name} of class {d.name}"
            if fun.name in seen:
                self.report(f"{mwhere} is defined twice", d.pos)
            seen.add(fun.name)
            if fun.name not in declared:
                self.report(f"{mwhere} is not declared by interface {d.parent}", d.pos)
                continue
            decl = declared[fun.name]
            if fun.params != decl.params or fun.ret != decl.ret:
                self.report(f"{mwhere} does not match the declared signature", d.pos)
            params = self.check_params(fun.params, mwhere, d.pos)
            overlap = set(params) & set(fields)
            if overlap:
                self.report(f"{mwhere} shadows field(s) {', '.join(sorted(overlap))}", d.pos)
            if fun.body is not None:
                self.check_expr(fun.body, {THIS, *fields, *params}, d.pos)
        for name in sorted(required - seen):
            self.report(f"class {d.name} does not implement {name!r}", d.pos)

    def interface_members(self, name: str) -> tuple[Dtr, ...]:
        d = self.ctx.defs.get(name)
        return d.dtrs if isinstance(d, Interface) else ()

    def check_consumer(self, d: Consumer) -> None:
        where = f"consumer {d.name} on {d.self_type}"
        params = self.check_params(d.params, where, d.pos)
        self.check_type(d.ret, where, d.pos)
        if d.body is not None:
            self.report(f"{where} has not been desugared", d.pos)
            self.check_expr(d.body, {SELF, *params}, d.pos)
            return
        ctors = self.ctx.ctr.get(d.self_type, ())
        wildcard = d.wildcard_clause() is not None
        seen: list[str] = []
        for i, clause in enumerate(d.clauses or ()):
            if clause.pattern.is_wildcard:
                if i != len(d.clauses) - 1:
                    self.report(f"{where}: wildcard clause must be last", d.pos)
                self.check_expr(clause.body, {SELF, *params}, d.pos)
                continue
            c = clause.pattern.name
            if c in seen:
                self.report(f"{where} has two clauses for {c}", d.pos)
            seen.append(c)
            if c not in ctors:
                self.report(f"{where} matches {c}, which is not a constructor of {d.self_type}", d.pos)
                continue
            ctor = self.ctx.defs[c]
            assert isinstance(ctor, Constructor)
            field_names = tuple(p.name for p in ctor.fields)
            if clause.pattern.vars != field_names:
                self.report(
                    f"{where}: pattern for {c} must bind the field names "
                    f"({', '.join(field_names)}) in order",
                    d.pos,
                )
            overlap = set(clause.pattern.vars) & set(params)
            if overlap:
                self.report(f"{where}: pattern for {c} shadows parameter(s) {', '.join(sorted(overlap))}", d.pos)
            self.check_expr(clause.body, {SELF, *clause.pattern.vars, *params}, d.pos)
        if not wildcard:
            for c in ctors:
                if c not in seen:
                    self.report(f"{where} has no clause for constructor {c}", d.pos)

    # -- expressions

    def check_expr(self, e: Expr, bound: set[str], pos: tuple[int, int] | None) -> None:
        match e:
            case Var(name):
                if name not in bound:
                    self.report(f"unbound variable {name!r}", pos)
            case Sel(recv, name, args):
                if not any(k[0] == name for k in self.ctx.dtr_sig):
                    self.report(f"no interface declares a destructor {name!r}", pos)
                self.check_expr(recv, bound, pos)
                for a in args:
                    self.check_expr(a, bound, pos)
            case App(name, recv, args):
                if not any(isinstance(k, tuple) and k[0] == name for k in self.ctx.sig):
                    self.report(f"no datatype has a consumer {name!r}", pos)
                self.check_expr(recv, bound, pos)
                for a in args:
                    self.check_expr(a, bound, pos)
            case CtrCall(name, args):
                d = self.ctx.defs.get(name)
                if not isinstance(d, Constructor):
                    self.report(f"{name} is not a constructor", pos)
                elif len(args) != len(d.fields):
                    self.report(
                        f"constructor {name} takes {len(d.fields)} argument(s), got {len(args)}", pos
                    )
                for a in args:
                    self.check_expr(a, bound, pos)
            case New(name, args):
                d = self.ctx.defs.get(name)
                if not isinstance(d, Generator):
                    self.report(f"{name} is not a class", pos)
                elif len(args) != len(d.fields):
                    self.report(f"class {name} takes {len(d.fields)} argument(s), got {len(args)}", pos)
                for a in args:
                    self.check_expr(a, bound, pos)
            case PrimOp(_, lhs, rhs):
                self.check_expr(lhs, bound, pos)
                self.check_expr(rhs, bound, pos)
            case If(cond, then, els):
                self.check_expr(cond, bound, pos)
                self.check_expr(then, bound, pos)
                self.check_expr(els, bound, pos)
            case Obj():
                self.report("runtime object in source program", pos)
            case _:
                pass  # literals
