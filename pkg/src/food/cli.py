"""The food command line: check, ctx, transform, roundtrip, eval, trace, fuzz.

Program text goes to stdout, diagnostics to stderr.  Exit code 0 means the
subcommand's semantic result is success, 1 a pipeline failure, 2 a usage
error.
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import sys

from . import __version__
from .context import preprocess, restrict
from .diagnostics import FoodError
from .fuzz import GenConfig, run_properties
from .interp import Done, FuelExhausted, Stuck, eval_program, format_value, trace
from .parser import parse
from .pretty import pretty, pretty_expr
from .syntax import Program, canonicalize, desugar
from .transform import transform
from .wellformed import check


class _Failure(Exception):
    def __init__(self, message: str):
        self.message = message


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _Failure(f"cannot read {path}: {exc.strerror}")


def _load(path: str) -> Program:
    try:
        return desugar(parse(_read(path)))
    except FoodError as exc:
        raise _Failure("\n".join(f"{path}:{d.render()}" for d in exc.diagnostics))


def _checked(path: str) -> Program:
    program = _load(path)
    try:
        ctx = preprocess(program)
    except FoodError as exc:
        raise _Failure("\n".join(f"{path}:{d.render()}" for d in exc.diagnostics))
    diags = check(program, ctx)
    if diags:
        raise _Failure("\n".join(f"{path}:{d.render()}" for d in diags))
    return program


def _selected(arg: str | None) -> set[str] | None:
    if arg is None:
        return None
    return {name.strip() for name in arg.split(",") if name.strip()}


def _fuel(args: argparse.Namespace) -> int:
    if args.fuel is not None:
        return args.fuel
    env = os.environ.get("FOOD_FUEL")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _Failure(f"FOOD_FUEL must be an integer, got {env!r}")
    return 100_000


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- subcommands


def _cmd_check(args: argparse.Namespace) -> int:
    _checked(args.file)
    return 0


def _cmd_ctx(args: argparse.Namespace) -> int:
    program = _load(args.file)
    try:
        ctx = preprocess(program)
        if args.types is not None:
            ctx = restrict(ctx, _selected(args.types) or set())
    except FoodError as exc:
        raise _Failure("\n".join(d.render() for d in exc.diagnostics))
    sys.stdout.write(ctx.dump())
    return 0


def _cmd_transform(args: argparse.Namespace) -> int:
    program = _checked(args.file)
    try:
        result = transform(program, _selected(args.types))
    except FoodError as exc:
        raise _Failure("\n".join(d.render() for d in exc.diagnostics))
    _emit(pretty(canonicalize(result.program)), args.output)
    return 0


def _cmd_roundtrip(args: argparse.Namespace) -> int:
    program = _checked(args.file)
    selected = _selected(args.types)
    try:
        once = transform(program, selected)
        twice = transform(once.program, selected)
    except FoodError as exc:
        raise _Failure("\n".join(d.render() for d in exc.diagnostics))
    expected = pretty(canonicalize(program))
    actual = pretty(canonicalize(twice.program))
    if actual == expected and once.program_type == twice.program_type:
        return 0
    diff = difflib.unified_diff(
        expected.splitlines(keepends=True),
        actual.splitlines(keepends=True),
        fromfile="canonicalized input",
        tofile="double transform",
    )
    sys.stdout.writelines(diff)
    return 1


def _cmd_eval(args: argparse.Namespace) -> int:
    program = _checked(args.file)
    outcome = eval_program(program, _fuel(args))
    match outcome:
        case Done(value):
            print(format_value(value))
            return 0
        case FuelExhausted():
            print("fuel exhausted", file=sys.stderr)
            return 1
        case Stuck(reason, _):
            print(f"stuck: {reason}", file=sys.stderr)
            return 1
    return 1


def _cmd_trace(args: argparse.Namespace) -> int:
    program = _checked(args.file)
    result = trace(program, _fuel(args))
    steps = result.steps if args.limit is None else result.steps[: args.limit]
    for i, e in enumerate(steps):
        print(f"{i:4}  {pretty_expr(e, runtime=True)}")
    match result.outcome:
        case Done(value):
            print(f"   => {format_value(value)}")
            return 0
        case FuelExhausted():
            print("fuel exhausted", file=sys.stderr)
            return 0
        case Stuck(reason, _):
            print(f"stuck: {reason}", file=sys.stderr)
            return 1
    return 1


def _cmd_fuzz(args: argparse.Namespace) -> int:
    cfg = GenConfig(seed=args.seed, diverge_prob=args.diverge_prob)
    report = run_properties(cfg, args.trials, fuel=_fuel(args))
    for t in report.trials:
        line = {"seed": t.seed, "selected": list(t.selected), "ok": t.ok}
        if not t.ok:
            line["failures"] = [{"prop": f.prop, "detail": f.detail} for f in t.failures]
            line["witness"] = t.witness
        print(json.dumps(line))
    summary = {"trials": len(report.trials), "failed": report.failed}
    print(json.dumps(summary))
    return 0 if report.ok else 1


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="food", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(cmd: str, help_text: str) -> argparse.ArgumentParser:
        c = sub.add_parser(cmd, help=help_text)
        c.add_argument("file", help="input program, or - for standard input")
        return c

    with_file("check", "parse and check a program").set_defaults(fn=_cmd_check)

    c = with_file("ctx", "dump the preprocessed global context")
    c.add_argument("--types", help="comma-separated selected types to restrict to")
    c.set_defaults(fn=_cmd_ctx)

    c = with_file("transform", "transform the selected types")
    c.add_argument("--types", help="comma-separated selected types (default: all)")
    c.add_argument("-o", "--output", help="write the result here instead of stdout")
    c.set_defaults(fn=_cmd_transform)

    c = with_file("roundtrip", "transform twice and diff against the input")
    c.add_argument("--types", help="comma-separated selected types (default: all)")
    c.set_defaults(fn=_cmd_roundtrip)

    c = with_file("eval", "evaluate the main expression")
    c.add_argument("--fuel", type=int, help="step budget (default: FOOD_FUEL or 100000)")
    c.set_defaults(fn=_cmd_eval)

    c = with_file("trace", "print the step sequence")
    c.add_argument("--fuel", type=int, help="step budget (default: FOOD_FUEL or 100000)")
    c.add_argument("--limit", type=int, help="print at most this many steps")
    c.set_defaults(fn=_cmd_trace)

    c = sub.add_parser("fuzz", help="generate programs and run the property battery")
    c.add_argument("--trials", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--fuel", type=int, help="step budget (default: FOOD_FUEL or 100000)")
    c.add_argument("--diverge-prob", type=float, default=0.01)
    c.set_defaults(fn=_cmd_fuzz)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _Failure as exc:
        print(exc.message, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
