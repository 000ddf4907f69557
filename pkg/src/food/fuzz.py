"""Seeded generation of well-formed programs and the property drivers.

The generator builds a style-neutral model of each type hierarchy (its
constructors, operations, and which cases get specific bodies) and then renders
every hierarchy natively in its assigned decomposition style, so the corpus
never depends on the transformation it is used to test.  Recursive calls are
made only on fields, which keeps generated programs terminating except for the
deliberately looping ones that exercise the divergence branch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable

from .context import GlobalCtx, preprocess, restrict, translate_ctx
from .diagnostics import FoodError
from .interp import (
    Done,
    FuelExhausted,
    Stuck,
    _step,
    csm_body,
    dtr_body,
    to_value,
)
from .parser import parse
from .pretty import pretty
from .syntax import (
    App,
    Arrow,
    BOOL,
    BoolLit,
    Clause,
    Constructor,
    Consumer,
    CtrCall,
    Datatype,
    Def,
    Dtr,
    Expr,
    free_vars,
    Generator,
    If,
    INT,
    IntLit,
    Interface,
    Named,
    New,
    Param,
    Pattern,
    PrimOp,
    Program,
    SELF,
    Sel,
    subst,
    THIS,
    Type,
    Var,
    WILDCARD,
    canonicalize,
)
from .transform import transform, transform_expr
from .wellformed import check


@dataclass(frozen=True)
class GenConfig:
    """Knobs for the program generator; generation is a pure function of seed."""

    seed: int
    max_types: int = 3
    max_ctors_per_type: int = 3
    max_ops_per_type: int = 3
    max_field_arity: int = 2
    max_expr_depth: int = 4
    style_mix: float = 0.5  # probability a type is rendered object-oriented
    recursion_bias: float = 0.6  # probability a body recurses on a field
    overload_prob: float = 0.2  # probability an op reuses a name from another type
    diverge_prob: float = 0.0  # probability the program deliberately loops


# ---------------------------------------------------------------------------
# Generator


@dataclass
class _Op:
    name: str
    params: tuple[Param, ...]
    ret: Type
    has_default: bool
    specific: dict[str, Expr] = field(default_factory=dict)  # ctor name -> body
    default_body: Expr | None = None


@dataclass
class _TypeModel:
    name: str
    oo: bool
    ctors: list[tuple[str, tuple[Param, ...]]] = field(default_factory=list)
    ops: list[_Op] = field(default_factory=list)


@dataclass(frozen=True)
class _Binding:
    name: str
    type: Type
    is_field: bool


class _Gen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = random.Random(cfg.seed)
        self.types: list[_TypeModel] = []
        self.ctor_counter = 0
        self.op_counter = 0
        self.diverging: _Op | None = None

    def by_name(self, name: str) -> _TypeModel:
        return next(t for t in self.types if t.name == name)

    # -- structure

    def run(self) -> Program:
        rng, cfg = self.rng, self.cfg
        for i in range(rng.randint(1, cfg.max_types)):
            model = _TypeModel(f"T{i}", oo=rng.random() < cfg.style_mix)
            self.types.append(model)
            for j in range(rng.randint(1, cfg.max_ctors_per_type)):
                fields = tuple(
                    Param(f"y{k}", self.field_type(i, allow_self=j > 0))
                    for k in range(rng.randint(0, cfg.max_field_arity))
                )
                model.ctors.append((f"C{self.ctor_counter}", fields))
                self.ctor_counter += 1
        for model in self.types:
            for _ in range(rng.randint(1, cfg.max_ops_per_type)):
                model.ops.append(self.make_op(model))
        diverge = rng.random() < cfg.diverge_prob
        for model in self.types:
            for op in model.ops:
                self.fill_bodies(model, op)
        if diverge:
            self.plant_loop()
        return self.render(self.main())

    def field_type(self, index: int, allow_self: bool) -> Type:
        pool: list[Type] = [INT, BOOL]
        pool.extend(Named(t.name) for t in self.types[:index])
        if allow_self:
            pool.extend([Named(self.types[index].name)] * 2)
        return self.rng.choice(pool)

    def any_type_pool(self) -> list[Type]:
        return [INT, INT, BOOL] + [Named(t.name) for t in self.types]

    def make_op(self, model: _TypeModel) -> _Op:
        rng = self.rng
        taken = {op.name for op in model.ops}
        reusable = [
            op.name for t in self.types for op in t.ops if t is not model and op.name not in taken
        ]
        if reusable and rng.random() < self.cfg.overload_prob:
            name = rng.choice(reusable)
        else:
            name = f"f{self.op_counter}"
            self.op_counter += 1
        params = tuple(
            Param(f"x{k}", rng.choice(self.any_type_pool())) for k in range(rng.randint(0, 2))
        )
        ret = rng.choice(self.any_type_pool())
        return _Op(name, params, ret, has_default=rng.random() < 0.35)

    def fill_bodies(self, model: _TypeModel, op: _Op) -> None:
        receiver = _Binding(THIS if model.oo else SELF, Named(model.name), is_field=False)
        if op.has_default:
            env = [receiver] + [_Binding(p.name, p.type, False) for p in op.params]
            op.default_body = self.expr(op.ret, env, self.cfg.max_expr_depth - 1)
        for ctor, fields in model.ctors:
            if op.has_default and self.rng.random() < 0.5:
                continue
            env = (
                [receiver]
                + [_Binding(f.name, f.type, True) for f in fields]
                + [_Binding(p.name, p.type, False) for p in op.params]
            )
            op.specific[ctor] = self.expr(op.ret, env, self.cfg.max_expr_depth - 1)

    def plant_loop(self) -> None:
        """Add an op to the first type whose every case applies itself again."""
        model = self.types[0]
        op = _Op(f"f{self.op_counter}", (), INT, has_default=False)
        self.op_counter += 1
        recv = Var(THIS if model.oo else SELF)
        body = Sel(recv, op.name, ()) if model.oo else App(op.name, recv, ())
        for ctor, _ in model.ctors:
            op.specific[ctor] = body
        model.ops.append(op)
        self.diverging = op

    # -- expressions

    def minimal(self, name: str) -> Expr:
        model = self.by_name(name)
        ctor, fields = model.ctors[0]
        args = tuple(self.minimal_of(f.type) for f in fields)
        return New(ctor, args) if model.oo else CtrCall(ctor, args)

    def minimal_of(self, t: Type) -> Expr:
        if t == INT:
            return IntLit(0)
        if t == BOOL:
            return BoolLit(False)
        assert isinstance(t, Named)
        return self.minimal(t.name)

    def construct(self, name: str, env: list[_Binding], depth: int) -> Expr:
        model = self.by_name(name)
        if depth <= 0:
            return self.minimal(name)
        ctor, fields = self.rng.choice(model.ctors)
        args = tuple(self.expr(f.type, env, depth - 1) for f in fields)
        return New(ctor, args) if model.oo else CtrCall(ctor, args)

    def call_candidates(self, target: Type, env: list[_Binding]):
        out = []
        for b in env:
            if not b.is_field or not isinstance(b.type, Named):
                continue
            host = self.by_name(b.type.name)
            for op in host.ops:
                if op.ret == target:
                    out.append((b, host, op))
        return out

    def render_call(self, recv: Expr, host: _TypeModel, op: _Op, env, depth: int) -> Expr:
        args = tuple(self.expr(p.type, env, depth - 1) for p in op.params)
        if host.oo:
            return Sel(recv, op.name, args)
        return App(op.name, recv, args)

    def expr(self, target: Type, env: list[_Binding], depth: int) -> Expr:
        rng = self.rng
        calls = self.call_candidates(target, env) if depth > 0 else []
        if calls and rng.random() < self.cfg.recursion_bias:
            b, host, op = rng.choice(calls)
            return self.render_call(Var(b.name), host, op, env, depth)
        variables = [b for b in env if b.type == target]
        options: list[str] = []
        if variables:
            options += ["var"] * 3
        if depth <= 0:
            if target == INT or target == BOOL or not variables:
                options += ["leaf"]
        else:
            options += ["leaf", "branch", "if"]
        choice = rng.choice(options)
        if choice == "var":
            return Var(rng.choice(variables).name)
        if choice == "if":
            return If(
                self.expr(BOOL, env, depth - 1),
                self.expr(target, env, depth - 1),
                self.expr(target, env, depth - 1),
            )
        if choice == "branch" and target == INT:
            op = rng.choice(["+", "-", "*"])
            return PrimOp(op, self.expr(INT, env, depth - 1), self.expr(INT, env, depth - 1))
        if choice == "branch" and target == BOOL:
            op = rng.choice(["&&", "||", "==", "<=", "<"])
            operand = INT if op in ("==", "<=", "<") else BOOL
            return PrimOp(op, self.expr(operand, env, depth - 1), self.expr(operand, env, depth - 1))
        # leaves (and Named-type branches, which are constructions)
        if target == INT:
            return IntLit(rng.randrange(10))
        if target == BOOL:
            return BoolLit(rng.random() < 0.5)
        assert isinstance(target, Named)
        return self.construct(target.name, env, depth if choice == "branch" else 0)

    # -- main expression

    def main_call(self, target: Type) -> Expr | None:
        candidates = [(t, op) for t in self.types for op in t.ops if op.ret == target]
        if not candidates:
            return None
        host, op = self.rng.choice(candidates)
        recv = self.construct(host.name, [], self.rng.randint(1, 2))
        return self.render_call(recv, host, op, [], 2)

    def main(self) -> Expr:
        rng = self.rng
        if self.diverging is not None:
            host = self.types[0]
            recv = self.minimal(host.name)
            return self.render_call(recv, host, self.diverging, [], 1)
        target = INT if rng.random() < 0.5 else BOOL
        first = self.main_call(target)
        if first is None:
            target, first = INT, IntLit(rng.randrange(10))
        if rng.random() < 0.5:
            second = self.main_call(target) or self.expr(target, [], 1)
            op = rng.choice(["+", "-"]) if target == INT else rng.choice(["&&", "||"])
            return PrimOp(op, first, second)
        return first

    # -- rendering

    def render(self, main: Expr) -> Program:
        defs: list[Def] = []
        for model in self.types:
            if model.oo:
                members = []
                for op in model.ops:
                    members.append(Dtr(op.name, op.params, op.ret, op.default_body))
                defs.append(Interface(model.name, tuple(members)))
                for ctor, fields in model.ctors:
                    funs = tuple(
                        Dtr(op.name, op.params, op.ret, op.specific[ctor])
                        for op in model.ops
                        if ctor in op.specific
                    )
                    defs.append(Generator(ctor, fields, model.name, funs))
            else:
                defs.append(Datatype(model.name))
                for ctor, fields in model.ctors:
                    defs.append(Constructor(ctor, fields, model.name))
                for op in model.ops:
                    clauses = [
                        Clause(Pattern(ctor, tuple(f.name for f in fields)), op.specific[ctor])
                        for ctor, fields in model.ctors
                        if ctor in op.specific
                    ]
                    if op.has_default:
                        clauses.append(Clause(WILDCARD, op.default_body))
                    defs.append(
                        Consumer(op.name, model.name, op.params, op.ret, clauses=tuple(clauses))
                    )
        return Program(tuple(defs), main)


def gen_program(cfg: GenConfig) -> Program:
    """Generate a desugared program that passes the well-formedness check."""
    return _Gen(cfg).run()


# ---------------------------------------------------------------------------
# Property battery


@dataclass(frozen=True)
class PropFail:
    prop: str
    detail: str


@dataclass(frozen=True)
class TrialReport:
    seed: int
    selected: tuple[str, ...]
    failures: tuple[PropFail, ...]
    witness: str  # pretty text of the minimized failing program, "" when ok

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class FuzzReport:
    trials: tuple[TrialReport, ...]

    @property
    def failed(self) -> int:
        return sum(1 for t in self.trials if not t.ok)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures_by_prop(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.trials:
            for f in t.failures:
                out[f.prop] = out.get(f.prop, 0) + 1
        return out


def _typed_run(program: Program, ctx: GlobalCtx, fuel: int):
    """Evaluate the main expression, typing every reached expression.

    Returns (outcome, type_failure_detail).  Types are memoized per
    expression, so looping programs pay for each distinct state once.
    """
    tctx = restrict(ctx, frozenset())
    cache: dict[Expr, Type] = {}

    def type_of(e: Expr) -> Type:
        t = cache.get(e)
        if t is None:
            t = transform_expr(e, tctx, {})[1]
            cache[e] = t
        return t

    e = program.main
    try:
        expected = type_of(e)
    except FoodError as exc:
        return None, f"main expression does not type: {exc}"
    remaining = fuel
    while True:
        out = _step(e, ctx)
        if out is None:
            return Done(to_value(e)), None
        if isinstance(out, Stuck):
            return out, None
        if remaining <= 0:
            return FuelExhausted(e), None
        remaining -= 1
        e = out.next
        try:
            t = type_of(e)
        except FoodError as exc:
            return None, f"step result fails to type: {exc}"
        if t != expected:
            from .pretty import pretty_type

            return None, (
                f"type changed from {pretty_type(expected)} to {pretty_type(t)} "
                "during evaluation"
            )


def _hygiene_failures(p2: Program) -> list[str]:
    out = []
    for d in p2.defs:
        if isinstance(d, Consumer):
            for clause in d.clauses or ():
                if THIS in free_vars(clause.body):
                    out.append(f"'this' inside consumer {d.name} on {d.self_type}")
        elif isinstance(d, Interface):
            for m in d.dtrs:
                if m.body is not None and SELF in free_vars(m.body):
                    out.append(f"'self' inside default {m.name} of {d.name}")
        elif isinstance(d, Generator):
            for m in d.funs:
                if m.body is not None and SELF in free_vars(m.body):
                    out.append(f"'self' inside method {m.name} of {d.name}")
    return out


def _lookup_duality_failures(
    rctx: GlobalCtx, ctx2: GlobalCtx
) -> list[str]:
    """Check that body lookup commutes with translation for every (f, C)."""
    out = []
    for d_name in rctx.it:  # destructor before == consumer after
        for c_name in rctx.gen[d_name]:
            g = rctx.defs[c_name]
            for f in rctx.dtr[d_name]:
                before = dtr_body(f, c_name, rctx)
                if before is None:
                    out.append(f"no body for destructor {f} on {c_name}")
                    continue
                ys, xs, body = before
                fields = {p.name: p.type for p in g.fields} if ys else {}
                params = dict(zip(xs, rctx.dtr_sig[(f, d_name)].params))
                env = {THIS: Named(d_name), **fields, **params}
                translated = subst(transform_expr(body, rctx, env)[0], {THIS: Var(SELF)})
                after = csm_body(f, c_name, ctx2)
                if after != (ys, xs, translated):
                    out.append(f"destructor {f} on {c_name} does not survive translation")
    for d_name in rctx.dt:  # consumer before == destructor after
        for c_name in rctx.ctr[d_name]:
            ctor = rctx.defs[c_name]
            for f in rctx.csm[d_name]:
                before = csm_body(f, c_name, rctx)
                if before is None:
                    out.append(f"no clause covers {c_name} in consumer {f}")
                    continue
                ys, xs, body = before
                fields = {p.name: p.type for p in ctor.fields} if ys else {}
                sig = rctx.sig[(f, d_name)]
                assert isinstance(sig.ret, Arrow)
                params = dict(zip(xs, sig.ret.params))
                env = {SELF: Named(d_name), **fields, **params}
                translated = subst(transform_expr(body, rctx, env)[0], {SELF: Var(THIS)})
                after = dtr_body(f, c_name, ctx2)
                if after != (ys, xs, translated):
                    out.append(f"consumer {f} on {c_name} does not survive translation")
    return out


def check_properties(
    program: Program,
    selected: set[str] | frozenset[str] | None = None,
    fuel: int = 100_000,
    mutate: "Mutator | None" = None,
) -> list[PropFail]:
    """Run the whole property battery against one (program, selection) pair.

    ``mutate``, when given, perturbs the transformed program before the
    properties run; the mutation harness uses it to confirm the properties
    have teeth.
    """
    fails: list[PropFail] = []
    try:
        ctx = preprocess(program)
    except FoodError as exc:
        return [PropFail("wellformed", f"preprocess failed: {exc}")]
    if selected is None:
        selected = set(ctx.type_names())
    diags = check(program, ctx)
    if diags:
        fails.append(PropFail("wellformed", "; ".join(d.render() for d in diags[:3])))
        return fails

    try:
        skip = transform(program, frozenset(), ctx=ctx)
    except FoodError as exc:
        return [PropFail("typecheck", str(exc))]
    t0 = skip.program_type
    if skip.program != program:
        fails.append(PropFail("skip-identity", "transform with no selected types changed the program"))

    try:
        r1 = transform(program, selected, ctx=ctx)
    except FoodError as exc:
        fails.append(PropFail("transform", str(exc)))
        return fails
    p2 = r1.program
    if mutate is not None:
        p2 = mutate(p2)
    if r1.program_type != t0:
        fails.append(PropFail("type-preservation", "transform reported a different program type"))

    try:
        ctx2 = preprocess(p2)
    except FoodError as exc:
        fails.append(PropFail("round-trip", f"transformed program does not preprocess: {exc}"))
        return fails
    diags2 = check(p2, ctx2)
    if diags2:
        fails.append(
            PropFail("wf-preservation", "; ".join(d.render() for d in diags2[:3]))
        )
    for problem in _hygiene_failures(p2):
        fails.append(PropFail("substitution-hygiene", problem))

    try:
        t2 = transform(p2, frozenset(), ctx=ctx2).program_type
        if t2 != t0:
            fails.append(PropFail("type-preservation", "transformed program has a different type"))
    except FoodError as exc:
        fails.append(PropFail("type-preservation", f"transformed program does not type: {exc}"))

    try:
        r2 = transform(p2, selected, ctx=ctx2)
        if canonicalize(r2.program) != canonicalize(program):
            fails.append(PropFail("round-trip", "double transform is not the canonicalized input"))
        elif r2.program_type != t0:
            fails.append(PropFail("round-trip", "double transform reports a different type"))
    except FoodError as exc:
        fails.append(PropFail("round-trip", f"second transform failed: {exc}"))

    rctx = restrict(ctx, selected)
    try:
        expected_ctx = translate_ctx(rctx)
        actual_ctx = restrict(ctx2, set(selected))
        if actual_ctx.duality_parts() != expected_ctx.duality_parts():
            fails.append(PropFail("ctx-duality", "context translation mismatch"))
    except FoodError as exc:
        fails.append(PropFail("ctx-duality", str(exc)))

    try:
        for problem in _lookup_duality_failures(rctx, ctx2):
            fails.append(PropFail("lookup-duality", problem))
    except FoodError as exc:
        fails.append(PropFail("lookup-duality", str(exc)))

    out1, bad1 = _typed_run(program, ctx, fuel)
    out2, bad2 = _typed_run(p2, ctx2, fuel)
    for bad in (bad1, bad2):
        if bad is not None:
            fails.append(PropFail("type-safety", bad))
    for where, out in (("source", out1), ("transformed", out2)):
        if isinstance(out, Stuck):
            fails.append(PropFail("type-safety", f"{where} program got stuck: {out.reason}"))
    if out1 is not None and out2 is not None and not isinstance(out1, Stuck) and not isinstance(out2, Stuck):
        if isinstance(out1, Done) != isinstance(out2, Done):
            fails.append(PropFail("eval-agreement", "only one side terminated within fuel"))
        elif isinstance(out1, Done) and out1.value != out2.value:
            fails.append(PropFail("eval-agreement", "terminating results differ"))

    for label, q in (("source", program), ("transformed", p2)):
        try:
            if parse(pretty(q)) != q:
                fails.append(PropFail("parse-pretty", f"{label} program does not round-trip"))
        except FoodError as exc:
            fails.append(PropFail("parse-pretty", f"{label} program reparse failed: {exc}"))

    return fails


# ---------------------------------------------------------------------------
# Shrinking


def _without_def(program: Program, index: int) -> Program:
    victim = program.defs[index]
    drop_types: set[str] = set()
    drop_ctors: set[str] = set()
    if isinstance(victim, (Datatype, Interface)):
        drop_types.add(victim.name)
    if isinstance(victim, (Constructor, Generator)):
        drop_ctors.add(victim.name)
    defs: list[Def] = []
    for i, d in enumerate(program.defs):
        if i == index:
            continue
        if isinstance(d, (Constructor, Generator)) and d.parent in drop_types:
            continue
        if isinstance(d, Consumer):
            if d.self_type in drop_types:
                continue
            if drop_ctors and d.clauses:
                d = replace(
                    d,
                    clauses=tuple(c for c in d.clauses if c.pattern.name not in drop_ctors),
                )
        defs.append(d)
    return Program(tuple(defs), program.main)


def _shrink_candidates(program: Program):
    for i in range(len(program.defs)):
        yield _without_def(program, i)
    for i, d in enumerate(program.defs):
        if isinstance(d, Consumer) and d.clauses and len(d.clauses) > 1:
            for j in range(len(d.clauses)):
                smaller = replace(d, clauses=d.clauses[:j] + d.clauses[j + 1 :])
                yield Program(program.defs[:i] + (smaller,) + program.defs[i + 1 :], program.main)
        if isinstance(d, Generator) and d.funs:
            for j in range(len(d.funs)):
                smaller = replace(d, funs=d.funs[:j] + d.funs[j + 1 :])
                yield Program(program.defs[:i] + (smaller,) + program.defs[i + 1 :], program.main)
        if isinstance(d, Interface) and d.dtrs:
            for j in range(len(d.dtrs)):
                gone = d.dtrs[j].name
                smaller = replace(d, dtrs=d.dtrs[:j] + d.dtrs[j + 1 :])
                defs = []
                for other in program.defs[:i] + (smaller,) + program.defs[i + 1 :]:
                    if isinstance(other, Generator) and other.parent == d.name:
                        other = replace(other, funs=tuple(f for f in other.funs if f.name != gone))
                    defs.append(other)
                yield Program(tuple(defs), program.main)
    yield Program(program.defs, IntLit(0))


def shrink(
    program: Program,
    prop: str,
    rerun,
) -> Program:
    """Greedy definition/clause deletion keeping the same property failing."""
    current = program
    improved = True
    while improved:
        improved = False
        for candidate in _shrink_candidates(current):
            if len(candidate.defs) >= len(current.defs) and candidate.main == current.main:
                continue
            try:
                fails = rerun(candidate)
            except FoodError:
                continue
            if any(f.prop == prop for f in fails):
                current = candidate
                improved = True
                break
    return current


# ---------------------------------------------------------------------------
# Program mutators (used by the mutation-sensitivity harness)

Mutator = Callable[[Program], Program]


def _map_consumers(program: Program, fn) -> Program:
    done = False
    defs = []
    for d in program.defs:
        if not done and isinstance(d, Consumer):
            replacement = fn(d)
            if replacement is not None:
                defs.append(replacement)
                done = True
                continue
        defs.append(d)
    return Program(tuple(defs), program.main)


def mutate_swap_clause_bodies(program: Program) -> Program:
    """Swap the bodies of the first two clauses of some consumer."""

    def fn(d: Consumer):
        if d.clauses and len(d.clauses) >= 2:
            a, b = d.clauses[0], d.clauses[1]
            swapped = (Clause(a.pattern, b.body), Clause(b.pattern, a.body)) + d.clauses[2:]
            return replace(d, clauses=swapped)
        return None

    return _map_consumers(program, fn)


def mutate_drop_wildcard(program: Program) -> Program:
    """Delete the wildcard clause of the first consumer that has one."""

    def fn(d: Consumer):
        if d.clauses and any(c.pattern.is_wildcard for c in d.clauses) and len(d.clauses) > 1:
            return replace(d, clauses=tuple(c for c in d.clauses if not c.pattern.is_wildcard))
        return None

    return _map_consumers(program, fn)


def mutate_wrong_substitution(program: Program) -> Program:
    """Rewrite self to this in the first consumer clause that mentions it."""

    def fn(d: Consumer):
        for i, clause in enumerate(d.clauses or ()):
            if SELF in free_vars(clause.body):
                bad = Clause(clause.pattern, subst(clause.body, {SELF: Var(THIS)}))
                return replace(d, clauses=d.clauses[:i] + (bad,) + d.clauses[i + 1 :])
        return None

    return _map_consumers(program, fn)


def mutate_wrong_substitution_oo(program: Program) -> Program:
    """Rewrite this to self in the first destructor body that mentions it."""
    defs = []
    done = False
    for d in program.defs:
        if not done and isinstance(d, Interface):
            members = []
            for m in d.dtrs:
                if not done and m.body is not None and THIS in free_vars(m.body):
                    m = replace(m, body=subst(m.body, {THIS: Var(SELF)}))
                    done = True
                members.append(m)
            d = replace(d, dtrs=tuple(members))
        elif not done and isinstance(d, Generator):
            members = []
            for m in d.funs:
                if not done and m.body is not None and THIS in free_vars(m.body):
                    m = replace(m, body=subst(m.body, {THIS: Var(SELF)}))
                    done = True
                members.append(m)
            d = replace(d, funs=tuple(members))
        defs.append(d)
    return Program(tuple(defs), program.main)


def mutate_rename_pattern_var(program: Program) -> Program:
    """Rename the first bound pattern variable without touching the body."""

    def fn(d: Consumer):
        for i, clause in enumerate(d.clauses or ()):
            if clause.pattern.vars:
                pat = Pattern(clause.pattern.name, ("z" + clause.pattern.vars[0],) + clause.pattern.vars[1:])
                bad = Clause(pat, clause.body)
                return replace(d, clauses=d.clauses[:i] + (bad,) + d.clauses[i + 1 :])
        return None

    return _map_consumers(program, fn)


def mutate_drop_consumer(program: Program) -> Program:
    """Delete the first consumer definition outright."""
    for i, d in enumerate(program.defs):
        if isinstance(d, Consumer):
            return Program(program.defs[:i] + program.defs[i + 1 :], program.main)
    return program


def mutate_swap_ctor_fields(program: Program) -> Program:
    """Reverse the field list of the first constructor with two or more fields."""
    defs = []
    done = False
    for d in program.defs:
        if not done and isinstance(d, Constructor) and len(d.fields) >= 2:
            d = replace(d, fields=tuple(reversed(d.fields)))
            done = True
        defs.append(d)
    return Program(tuple(defs), program.main)


def mutate_flip_comparison(program: Program) -> Program:
    """Turn the first == in a consumer clause into <=."""

    def flip(e: Expr) -> tuple[Expr, bool]:
        match e:
            case PrimOp("==", lhs, rhs):
                return PrimOp("<=", lhs, rhs), True
            case PrimOp(op, lhs, rhs):
                l2, hit = flip(lhs)
                if hit:
                    return PrimOp(op, l2, rhs), True
                r2, hit = flip(rhs)
                return PrimOp(op, lhs, r2), hit
            case If(c, t, e2):
                c2, hit = flip(c)
                if hit:
                    return If(c2, t, e2), True
                t2, hit = flip(t)
                if hit:
                    return If(c, t2, e2), True
                e3, hit = flip(e2)
                return If(c, t, e3), hit
            case _:
                return e, False

    def fn(d: Consumer):
        for i, clause in enumerate(d.clauses or ()):
            body2, hit = flip(clause.body)
            if hit:
                bad = Clause(clause.pattern, body2)
                return replace(d, clauses=d.clauses[:i] + (bad,) + d.clauses[i + 1 :])
        return None

    return _map_consumers(program, fn)


def mutate_swap_prim_operands(program: Program) -> Program:
    """Swap the operands of the first subtraction in a consumer clause."""

    def swap(e: Expr) -> tuple[Expr, bool]:
        match e:
            case PrimOp("-", lhs, rhs):
                return PrimOp("-", rhs, lhs), True
            case PrimOp(op, lhs, rhs):
                l2, hit = swap(lhs)
                if hit:
                    return PrimOp(op, l2, rhs), True
                r2, hit = swap(rhs)
                return PrimOp(op, lhs, r2), hit
            case _:
                return e, False

    def fn(d: Consumer):
        for i, clause in enumerate(d.clauses or ()):
            body2, hit = swap(clause.body)
            if hit:
                bad = Clause(clause.pattern, body2)
                return replace(d, clauses=d.clauses[:i] + (bad,) + d.clauses[i + 1 :])
        return None

    return _map_consumers(program, fn)


def mutate_drop_override(program: Program) -> Program:
    """Remove the first generator method that overrides an interface default."""
    defaults: dict[tuple[str, str], bool] = {}
    for d in program.defs:
        if isinstance(d, Interface):
            for m in d.dtrs:
                defaults[(d.name, m.name)] = m.body is not None
    defs = []
    done = False
    for d in program.defs:
        if not done and isinstance(d, Generator):
            for j, m in enumerate(d.funs):
                if defaults.get((d.parent, m.name)):
                    d = replace(d, funs=d.funs[:j] + d.funs[j + 1 :])
                    done = True
                    break
        defs.append(d)
    return Program(tuple(defs), program.main)


MUTATORS = {
    "swap-clause-bodies": mutate_swap_clause_bodies,
    "drop-wildcard": mutate_drop_wildcard,
    "wrong-substitution-fp": mutate_wrong_substitution,
    "wrong-substitution-oo": mutate_wrong_substitution_oo,
    "rename-pattern-var": mutate_rename_pattern_var,
    "drop-consumer": mutate_drop_consumer,
    "swap-ctor-fields": mutate_swap_ctor_fields,
    "flip-comparison": mutate_flip_comparison,
    "swap-prim-operands": mutate_swap_prim_operands,
    "drop-override": mutate_drop_override,
}


# ---------------------------------------------------------------------------
# Driver


def _derive_seed(seed: int, index: int) -> int:
    return (seed * 0x9E3779B97F4A7C15 + index) % 2**63


def _choose_selected(ctx_names: tuple[str, ...], rng: random.Random) -> set[str]:
    if len(ctx_names) <= 1 or rng.random() < 0.7:
        return set(ctx_names)
    k = rng.randint(1, len(ctx_names) - 1)
    return set(rng.sample(list(ctx_names), k))


def run_properties(
    cfg: GenConfig,
    trials: int,
    fuel: int = 100_000,
    mutate: "Mutator | None" = None,
    minimize: bool = True,
) -> FuzzReport:
    """Generate trial programs and run the full property battery on each.

    Failing trials carry their seed and a greedily minimized witness program.
    """
    reports = []
    for index in range(trials):
        seed = _derive_seed(cfg.seed, index)
        program = gen_program(replace(cfg, seed=seed))
        rng = random.Random(_derive_seed(seed, 1))
        names = tuple(t.name for t in _collect_type_names(program))
        selected = _choose_selected(names, rng)
        failures = tuple(check_properties(program, selected, fuel, mutate))
        witness = ""
        if failures and minimize:
            prop = failures[0].prop
            small = shrink(
                program, prop, lambda q: check_properties(q, selected & _names_of(q), fuel, mutate)
            )
            witness = pretty(small)
        elif failures:
            witness = pretty(program)
        reports.append(TrialReport(seed, tuple(sorted(selected)), failures, witness))
    return FuzzReport(tuple(reports))


def _collect_type_names(program: Program):
    for d in program.defs:
        if isinstance(d, (Datatype, Interface)):
            yield d


def _names_of(program: Program) -> set[str]:
    return {d.name for d in _collect_type_names(program)}
