import random

import pytest
from hypothesis import given, strategies as st

from rfun.syntax import (
    Def, ECase, ELeaf, ELet, ERLet, LCtor, LDup, LVar, ParseError,
    check_static, leaves, lvars, parse_program, parse_value, render_program,
)
from rfun.values import TUPLE, render_value

from helpers import ARITH_VOCAB, FIXTURES, load_program, random_value


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def test_parse_identity_program():
    p = parse_program("f x =: x")
    assert p.defs == (Def("f", "x", ELeaf(LVar("x"))),)


def test_parse_sugared_plus_listing():
    src = (FIXTURES / "plus_sugared.rfun").read_text()
    p = parse_program(src)
    d = p.defs[0]
    assert d.name == "plus"
    # tuple parameter desugars to a fresh variable cased on the pattern
    assert isinstance(d.body, ECase)
    assert d.body.scrutinee == LVar(d.param)
    (pattern, inner), = d.body.branches
    assert pattern == LCtor(TUPLE, (LVar("x"), LVar("y")))
    assert isinstance(inner, ECase) and len(inner.branches) == 2


def test_desugared_parameter_is_fresh():
    p = parse_program("id <a, b> =: <a, b>")
    d = p.defs[0]
    assert d.param == "x0"
    assert d.body == ECase(LVar("x0"),
                           ((LCtor(TUPLE, (LVar("a"), LVar("b"))),
                             ELeaf(LCtor(TUPLE, (LVar("a"), LVar("b"))))),))


def test_fresh_parameter_avoids_clashes():
    p = parse_program("f <x0, x1> =: <x1, x0>")
    assert p.defs[0].param == "x2"


def test_parse_let_rlet_case():
    p = parse_program(
        "g w =: let y = f w in rlet z = f y in case z of { A -> B; C(k) -> k }")
    d = p.defs[0]
    assert isinstance(d.body, ELet)
    assert isinstance(d.body.body, ERLet)
    assert isinstance(d.body.body.body, ECase)


def test_parse_unicode_spellings():
    a = parse_program("f x ≜ case x of { Z → ⌊<x>⌋ }")
    b = parse_program("f x =: case x of { Z -> |_ <x> _| }")
    assert a == b


def test_dupeq_brackets_lex_tightly():
    a = parse_program("f x =: |_x_|")
    b = parse_program("f x =: |_ x _|")
    assert a == b


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_program("f x =: case x of { Z -> }")
    assert err.value.line == 1 and err.value.col > 0
    with pytest.raises(ParseError):
        parse_program("f x =:")
    with pytest.raises(ParseError):
        parse_value("x")        # lowercase is a variable, not a value
    with pytest.raises(ParseError):
        parse_value("|_ <A> _|")


def test_function_names_may_end_in_bang():
    p = parse_program("f! x =: x")
    assert p.defs[0].name == "f!"
    with pytest.raises(ParseError):
        parse_program("f x =: ca!se")
    with pytest.raises(ParseError):
        parse_program("f x! =: x!")


# ---------------------------------------------------------------------------
# Static checks
# ---------------------------------------------------------------------------

def test_corpus_programs_pass_static_checks():
    for name in ("arith.rfun", "plus_sugared.rfun", "mirror.rfun",
                 "iseq.rfun", "id.rfun", "loop.rfun", "bad_first_match.rfun"):
        load_program(name)   # raises on violations


def test_variable_used_twice_is_rejected():
    p = parse_program("f x =: <x, x>")
    kinds = [v.kind for v in check_static(p)]
    assert "unbound-variable" in kinds or "linearity" in kinds


def test_unused_variable_is_rejected():
    p = parse_program("f x =: Z")
    [v] = check_static(p)
    assert v.kind == "linearity" and "never used" in v.message


def test_unbound_variable_is_rejected():
    p = parse_program("f x =: case x of { Z -> y }")
    kinds = [v.kind for v in check_static(p)]
    assert "unbound-variable" in kinds


def test_nonlinear_pattern_is_rejected():
    p = parse_program("f x =: case x of { <a, a> -> a }")
    kinds = [v.kind for v in check_static(p)]
    assert "linearity" in kinds


def test_duplicate_function_is_rejected():
    p = parse_program("f x =: x; f y =: y")
    kinds = [v.kind for v in check_static(p)]
    assert kinds.count("duplicate-function") == 1


def test_rebinding_after_consumption_is_fine():
    p = parse_program("g x =: x; f x =: let y = g x in let x = g y in x")
    assert check_static(p) == []


def test_shadowing_live_variable_is_rejected():
    p = parse_program("g x =: x; f x =: case x of { <a, b> -> let a = g b in <a, a> }")
    kinds = [v.kind for v in check_static(p)]
    assert "linearity" in kinds


# ---------------------------------------------------------------------------
# leaves and lvars
# ---------------------------------------------------------------------------

def test_leaves_of_plus_branches():
    plus = load_program("plus_sugared.rfun").defs[0]
    (_, inner), = plus.body.branches
    first, second = inner.branches
    assert leaves(first[1]) == [LDup(LCtor(TUPLE, (LVar("x"),)))]
    assert leaves(second[1]) == [LCtor(TUPLE, (LVar("x'"), LCtor("S", (LVar("u'"),))))]


def test_leaves_single_leaf():
    assert leaves(ELeaf(LVar("x"))) == [LVar("x")]


def test_leaves_of_fib_body():
    fib = load_program("arith.rfun").defs[1]
    assert leaves(fib.body) == [
        LCtor(TUPLE, (LCtor("S", (LCtor("Z"),)), LCtor("S", (LCtor("Z"),)))),
        LVar("z"),
    ]


def test_lvars_order():
    l = LCtor(TUPLE, (LVar("b"), LCtor("S", (LVar("a"),))))
    assert lvars(l) == ["b", "a"]


# ---------------------------------------------------------------------------
# Round-trips
# ---------------------------------------------------------------------------

def test_fixture_programs_roundtrip_through_printer():
    for name in ("arith.rfun", "arith_inv.rfun", "mirror.rfun", "iseq.rfun",
                 "id.rfun", "loop.rfun"):
        p = load_program(name)
        assert parse_program(render_program(p)) == p


_lefts = st.deferred(lambda: (
    st.sampled_from([LVar("x"), LVar("y"), LVar("veryLong'Name")])
    | st.builds(lambda: LCtor("Z"))
    | st.builds(lambda a: LCtor("S", (a,)), _lefts)
    | st.builds(lambda a, b: LCtor(TUPLE, (a, b)), _lefts, _lefts)
    | st.builds(LDup, _lefts)
))

_exprs = st.deferred(lambda: (
    st.builds(ELeaf, _lefts)
    | st.builds(lambda b, a, e: ELet(b, "f", a, e), _lefts, _lefts, _exprs)
    | st.builds(lambda b, a, e: ERLet(b, "g!", a, e), _lefts, _lefts, _exprs)
    | st.builds(lambda s, p1, e1, p2, e2: ECase(s, ((p1, e1), (p2, e2))),
                _lefts, _lefts, _exprs, _lefts, _exprs)
))


@given(_exprs)
def test_printer_parser_roundtrip_on_generated_asts(e):
    # programs need not be statically valid for the syntax round-trip
    src = render_program(type(load_program("id.rfun"))((Def("f", "x", e),)))
    assert parse_program(src).defs[0].body == e


def test_value_text_roundtrip_seeded():
    rng = random.Random(2024)
    for _ in range(200):
        v = random_value(rng, ARITH_VOCAB + [("Leaf", 0), ("Node", 2), (TUPLE, 0)], 5)
        assert parse_value(render_value(v)) == v
