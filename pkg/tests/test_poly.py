from __future__ import annotations

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sdslink.poly import (
    ParseError,
    Poly,
    PolyError,
    VarTable,
    dehomogenize,
    determinant,
    divide,
    divide_exact,
    homogenize,
    invert,
    parse,
    rat,
)

T = VarTable.of("x y z t w")
SMALL = VarTable.of("x y z")


def P(text: str, table: VarTable = T) -> Poly:
    return parse(text, table)


@st.composite
def polys(draw, table: VarTable = SMALL, max_terms: int = 5, max_deg: int = 4) -> Poly:
    n = len(table)
    out = Poly.zero(table)
    for _ in range(draw(st.integers(0, max_terms))):
        exps = tuple(draw(st.integers(0, max_deg)) for _ in range(n))
        num = draw(st.integers(-9, 9))
        den = draw(st.integers(1, 5))
        out = out + Poly.monomial(table, dict(zip(table.names, exps)), mpq(num, den))
    return out


nonzero_polys = polys().filter(lambda p: not p.is_zero())


def test_rationals_are_reduced() -> None:
    assert rat("6/4") == mpq(3, 2)
    assert rat("-0/7") == 0 and rat(0).denominator == 1
    with pytest.raises(PolyError):
        rat(0.5)


def test_var_table_validation() -> None:
    with pytest.raises(PolyError):
        VarTable.of("x x")
    with pytest.raises(PolyError):
        VarTable.of("x y", [1, 0])
    with pytest.raises(PolyError):
        VarTable.of("x 2y")
    assert VarTable.of("x, y").names == ("x", "y")
    assert VarTable.of("x").extend(["x", "y"]).names == ("x", "y")


def test_parse_and_render_round_trip_byte_identical() -> None:
    p = P("-w^2 + x^4*t^2")
    assert len(p) == 2
    assert p.render() == "x^4*t^2 - w^2"
    assert P(p.render()).render() == p.render()


def test_parse_rationals_parentheses_and_powers() -> None:
    assert P("2/3*x - (y+1)^2") == P("-y^2 - 2*y - 1 + 2/3*x")
    assert P("(x+y)^3") == P("x^3 + 3*x^2*y + 3*x*y^2 + y^3")
    assert P("-(-x)") == P("x")
    assert P("x*y/2") == P("1/2*x*y")


@pytest.mark.parametrize("text", ["x+*y", "x^", "(x+y", "q", "x^-1", "1/0", "x..y"])
def test_parse_errors(text: str) -> None:
    with pytest.raises(PolyError):
        P(text)


def test_parse_error_has_offset() -> None:
    with pytest.raises(ParseError) as info:
        P("x+*y")
    assert info.value.offset == 2


def test_zero_and_constants() -> None:
    assert P("x - x").is_zero()
    assert Poly.zero(T).render() == "0"
    assert Poly.const(T, 3).is_constant()
    assert P("3 + x").constant_term() == 3


def test_degrees_weights_and_multiplicity() -> None:
    p = P("-w^2 + x^4*t^2")
    assert p.degree() == 6
    assert p.degree("x") == 4
    assert p.multiplicity() == 2
    assert p.weighted_degree({"x": 2, "t": 1, "w": 3}) == 10
    assert p.weight({"x": 2, "t": 1, "w": 3}) == 6
    assert Poly.zero(T).multiplicity() == float("inf")


def test_graded_parts_and_truncation() -> None:
    p = P("x + y^2 + z^3 + x*y*z")
    parts = p.graded_parts()
    assert parts[1] == P("x") and parts[3] == P("z^3 + x*y*z")
    assert p.truncate(2) == P("x + y^2")
    assert p.graded_part({"x": 2, "y": 1, "z": 1}, 2) == P("x + y^2")
    assert P("x^2 + y*z").is_homogeneous()
    assert not P("x^2 + y").is_homogeneous()


def test_coefficient_slice_and_diff() -> None:
    p = P("x^2*y + x*y^2 + x*z + 7")
    assert p.coefficient("x", 1) == P("y^2 + z")
    assert p.coeff_slice("x", 1, 2) == P("y^2")
    assert p.diff("x") == P("2*x*y + y^2 + z")


def test_substitute_evaluate_value() -> None:
    p = P("x^2 + y*z")
    assert p.substitute({"x": P("y+z")}) == P("y^2 + 3*y*z + z^2")
    assert p.evaluate({"x": 1}) == P("1 + y*z")
    assert p.value({"x": 2, "y": 3, "z": "1/3"}) == 5


def test_linear_change() -> None:
    p = P("x*y")
    assert p.linear_change(["x", "y"], [[1, 1], [0, 1]]) == P("(x+y)*y")


def test_division() -> None:
    q, r = divide(P("x^2 - y^2 + 1"), P("x - y"))
    assert q * P("x - y") + r == P("x^2 - y^2 + 1")
    assert divide_exact(P("x^3 - y^3"), P("x - y")) == P("x^2 + x*y + y^2")
    with pytest.raises(PolyError):
        divide_exact(P("x^2 + 1"), P("x - y"))


def test_determinant_and_inverse() -> None:
    M = [[2, 1], [1, 1]]
    assert determinant([[mpq(a) for a in row] for row in M]) == 1
    assert invert(M) == [[1, -1], [-1, 2]]
    with pytest.raises(PolyError):
        invert([[1, 2], [2, 4]])


def test_homogenize_round_trip() -> None:
    p = P("1 + y + z^3")
    h = homogenize(p, "x")
    assert h == P("x^3 + x^2*y + z^3")
    assert dehomogenize(h, "x") == p


def test_incompatible_tables() -> None:
    with pytest.raises(PolyError):
        P("x") + parse("x", VarTable.of("x y"))


# properties


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(a: Poly, b: Poly, c: Poly) -> None:
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.zero(SMALL)


@settings(max_examples=250, deadline=None)
@given(nonzero_polys, nonzero_polys, st.tuples(*(st.integers(1, 4) for _ in range(3))))
def test_weight_is_additive(p: Poly, q: Poly, w: tuple[int, ...]) -> None:
    assert (p * q).weight(w) == p.weight(w) + q.weight(w)
    assert (p * q).weighted_degree(w) == p.weighted_degree(w) + q.weighted_degree(w)


@settings(max_examples=150, deadline=None)
@given(polys())
def test_render_parse_round_trip(p: Poly) -> None:
    text = p.render()
    again = parse(text, SMALL)
    assert again == p
    assert again.render() == text


@settings(max_examples=60, deadline=None)
@given(polys(max_terms=4, max_deg=3), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_linear_change_inverse(p: Poly, entries: list[int]) -> None:
    M = [entries[:2], entries[2:]]
    if determinant([[mpq(a) for a in row] for row in M]) == 0:
        M = [[1, entries[0]], [0, 1]]
    back = p.linear_change(["x", "y"], M).linear_change(["x", "y"], invert(M))
    assert back == p


@settings(max_examples=80, deadline=None)
@given(nonzero_polys, nonzero_polys)
def test_exact_division_recovers_factor(p: Poly, q: Poly) -> None:
    assert divide_exact(p * q, q) == p
