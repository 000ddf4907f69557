"""Static well-formedness checks."""

from dataclasses import replace

from conftest import GOLDEN_SELECTIONS, load

from food import canonicalize, check, desugar, parse, preprocess, transform
from food.syntax import Consumer, Program


def check_src(src: str):
    p = desugar(parse(src))
    return check(p, preprocess(p))


def test_golden_programs_are_well_formed():
    for name in GOLDEN_SELECTIONS:
        p = load(name)
        assert check(p, preprocess(p)) == [], name


def test_missing_clause_is_non_exhaustive():
    p = load("sets_fp")
    contains = next(d for d in p.defs if isinstance(d, Consumer) and d.name == "contains")
    broken = replace(
        contains, clauses=tuple(c for c in contains.clauses if c.pattern.name != "Empty")
    )
    q = Program(tuple(broken if d is contains else d for d in p.defs), p.main)
    diags = check(q, preprocess(q))
    assert any("no clause for constructor Empty" in d.message for d in diags)


def test_pattern_variables_must_match_field_names():
    from conftest import corpus_text

    src = corpus_text("sets_fp").replace(
        "case Insert(s, n) => n == i || contains(s)(i)",
        "case Insert(t, n) => n == i || contains(t)(i)",
    )
    p = desugar(parse(src))
    diags = check(p, preprocess(p))
    assert any("must bind the field names" in d.message for d in diags)


def test_unbound_variable():
    diags = check_src("data Set\ncase C() extends Set\ndef f(self: Set)(): Int = match { case C() => y }\n1")
    assert any("unbound variable 'y'" in d.message for d in diags)


def test_generator_must_implement_exactly_the_interface():
    missing = check_src("interface I { def f(): Int }\nclass C() implements I {}\n1")
    assert any("does not implement 'f'" in d.message for d in missing)

    extra = check_src(
        "interface I { def f(): Int }\n"
        "class C() implements I { def f(): Int = 1 def g(): Int = 2 }\n1"
    )
    assert any("not declared by interface" in d.message for d in extra)

    defaulted = check_src(
        "interface I { def f(): Int = 1 }\nclass C() implements I {}\nnew C().f()"
    )
    assert defaulted == []


def test_override_requires_exact_signature():
    wrong_type = check_src(
        "interface I { def f(x: Int): Int = x }\n"
        "class C() implements I { def f(x: Bool): Int = 1 }\n1"
    )
    assert any("does not match the declared signature" in d.message for d in wrong_type)

    wrong_name = check_src(
        "interface I { def f(x: Int): Int = x }\n"
        "class C() implements I { def f(y: Int): Int = y }\n1"
    )
    assert any("does not match the declared signature" in d.message for d in wrong_name)


def test_call_kind_and_arity():
    diags = check_src("data Set\ncase C(n: Int) extends Set\nC()")
    assert any("takes 1 argument(s), got 0" in d.message for d in diags)
    diags = check_src("interface I {}\nclass C() implements I {}\nC()")
    assert any("C is not a constructor" in d.message for d in diags)
    diags = check_src("data Set\ncase C() extends Set\nnew C()")
    assert any("C is not a class" in d.message for d in diags)


def test_binder_conflicts_are_rejected():
    # a pattern variable shadowing a consumer parameter would make the
    # evaluation substitution ambiguous
    src = (
        "data Set\ncase C(y: Int) extends Set\n"
        "def f(self: Set)(y: Int): Int = match { case C(y) => y }\n1"
    )
    diags = check_src(src)
    assert any("shadows parameter" in d.message for d in diags)

    src = "interface I { def f(): Int }\nclass C(a: Int) implements I { def f(): Int = a }\n1"
    assert check_src(src) == []
    src = (
        "interface I { def f(a: Int): Int }\n"
        "class C(a: Int) implements I { def f(a: Int): Int = a }\n1"
    )
    diags = check_src(src)
    assert any("shadows field" in d.message for d in diags)


def test_duplicate_parameters():
    diags = check_src("data D\ncase C() extends D\ndef f(self: D)(a: Int, a: Int): Int = 1\n2")
    assert any("declares 'a' twice" in d.message for d in diags)


def test_type_errors_are_reported():
    diags = check_src("1 + true")
    assert any("expected Int" in d.message for d in diags)
    diags = check_src("if (1) 2 else 3")
    assert any("expected Bool" in d.message for d in diags)


def test_duplicate_clause():
    diags = check_src(
        "data D\ncase C() extends D\n"
        "def f(self: D)(): Int = match { case C() => 1 case C() => 2 }\n1"
    )
    assert any("two clauses for C" in d.message for d in diags)


def test_unknown_types_in_signatures():
    diags = check_src("data D\ncase C(x: Mystery) extends D\n1")
    assert any("undeclared type Mystery" in d.message for d in diags)


def test_check_survives_canonicalize():
    for name in GOLDEN_SELECTIONS:
        p = canonicalize(load(name))
        assert check(p, preprocess(p)) == [], name


def test_check_ok_implies_transform_succeeds():
    for name, selected in GOLDEN_SELECTIONS.items():
        p = load(name)
        assert check(p, preprocess(p)) == []
        transform(p, selected)  # must not raise
        transform(p)  # all types selected
