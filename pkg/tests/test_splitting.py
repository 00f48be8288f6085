from __future__ import annotations

import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sdslink.poly import Poly, VarTable, parse
from sdslink.splitting import (
    SplitError,
    check_precondition,
    h_parts,
    h_symbolic,
    iterated_split,
    split,
    symbolic_table,
    verify_split,
)

from .oracles import residual_by_critical_point, to_sympy

T = VarTable.of("x y z")


def P(text: str) -> Poly:
    return parse(text, T)


def test_small_split_by_hand() -> None:
    s = split(P("x^2 + x*y^2 + z^3"), "x", 6)
    assert s.h == P("z^3 - 1/4*y^4")
    assert s.g == P("1/2*y^2")
    assert s.p == P("1/2*y^2")
    assert s.v == P("1")
    assert verify_split(P("x^2 + x*y^2 + z^3"), s)


@pytest.mark.parametrize("text", ["x*y + z^2", "x^2 + x*y", "2*x^2 + y^2", "y^2 + z^3"])
def test_precondition_violations(text: str) -> None:
    with pytest.raises(SplitError):
        split(P(text), "x", 5)


def test_truncation_must_reach_degree_two() -> None:
    with pytest.raises(SplitError):
        split(P("x^2 + y^3"), "x", 1)


def test_weighted_precondition_uses_weights() -> None:
    vec = check_precondition(P("x^2 + y"), "x", {"y": 2, "z": 1})
    assert vec == (1, 2, 1)


def test_iterated_split_reports_stage() -> None:
    with pytest.raises(SplitError, match="stage 1"):
        iterated_split(P("x^2 + y*z"), ["x", "y"], 5)


def test_h_parts_agree_with_full_split() -> None:
    f = P("x^2 + x*y^2 + x^2*z + y^2 + z^5 + x*y*z^2")
    parts = h_parts(f, "x", 7)
    s = split(f, "x", 7)
    assert sum(parts.values(), Poly.zero(T)) == s.h


def test_symbolic_table_weights() -> None:
    table = symbolic_table(4)
    assert "f_2_0" not in table.names and "f_1_1" not in table.names
    assert table.weights[table.index("f_1_2")] == 2
    assert table.weights[table.index("f_3_0")] == 1


def test_symbolic_low_degrees() -> None:
    h2, h3, h4 = h_symbolic(4)
    table = symbolic_table(4)
    assert h2 == parse("f_0_2", table)
    assert h3 == parse("f_0_3", table)
    assert h4 == parse("f_0_4 - f_1_2^2/4", table)


def test_symbolic_degree_five_and_six() -> None:
    table = symbolic_table(6)
    _, _, _, h5, h6 = h_symbolic(6)
    # the f_{1,2}^2 f_{2,1} term enters with a plus sign
    assert h5 == parse("f_0_5 + f_1_2^2*f_2_1/4 - f_1_2*f_1_3/2", table)
    assert h6 == parse(
        "f_0_6 - f_1_2^3*f_3_0/8 + f_1_2^2*f_2_2/4 - f_1_2^2*f_2_1^2/4"
        " + f_1_2*f_1_3*f_2_1/2 - f_1_2*f_1_4/2 - f_1_3^2/4",
        table,
    )


def _random_form(rng: random.Random, ys: sympy.Symbol, zs: sympy.Symbol, d: int) -> sympy.Expr:
    return sum((rng.randint(-3, 3) * ys**k * zs ** (d - k) for k in range(d + 1)), sympy.Integer(0))


def test_symbolic_h_against_critical_point_oracle() -> None:
    """Instantiate every f_{i,d} with a random binary form and compare both routes."""
    up_to = 6
    table = symbolic_table(up_to)
    hs = h_symbolic(up_to)
    xs, ys, zs = sympy.symbols("x y z")
    rng = random.Random(1)
    values = {}
    f = xs**2
    for name in table.names[1:]:
        _, i, d = name.split("_")
        values[name] = _random_form(rng, ys, zs, int(d))
        f += xs ** int(i) * values[name]
    germ = parse(str(sympy.expand(f)).replace("**", "^"), T)
    oracle = sympy.Poly(residual_by_critical_point(germ, "x", up_to), xs, ys, zs)
    for d, h in enumerate(hs, start=2):
        ours = sympy.expand(to_sympy(h).subs({sympy.Symbol(k): v for k, v in values.items()}))
        part = sum((c * ys**a * zs**b for (_, a, b), c in oracle.terms() if a + b == d), sympy.Integer(0))
        assert sympy.expand(ours - part) == 0, d


@st.composite
def germs(draw, max_deg: int = 5) -> Poly:
    f = P("x^2")
    quad_yz = draw(st.sampled_from(["y^2", "y*z", "-z^2", "0", "y^2 + z^2"]))
    f = f + P(quad_yz)
    for _ in range(draw(st.integers(1, 6))):
        exps = {"x": draw(st.integers(0, 4)), "y": draw(st.integers(0, 4)), "z": draw(st.integers(0, 4))}
        if not 3 <= sum(exps.values()) <= max_deg:
            continue
        f = f + Poly.monomial(T, exps, mpq(draw(st.integers(-5, 5)), draw(st.integers(1, 3))))
    return f


@settings(max_examples=220, deadline=None)
@given(germs(), st.integers(2, 12))
def test_split_round_trip(f: Poly, N: int) -> None:
    s = split(f, "x", N, verify=False)
    assert verify_split(f, s)
    assert "x" not in s.h.variables() and "x" not in s.p.variables()
    assert s.v.truncate(0) == 1
    for part in (s.g, s.h, s.p):
        assert part.is_zero() or part.multiplicity() >= 2
    assert s.h.is_zero() or s.h.degree() <= N


@settings(max_examples=30, deadline=None)
@given(germs(max_deg=4), st.integers(3, 7))
def test_residual_matches_oracle(f: Poly, N: int) -> None:
    ours = to_sympy(split(f, "x", N).h)
    assert sympy.expand(ours - residual_by_critical_point(f, "x", N)) == 0


@settings(max_examples=40, deadline=None)
@given(germs(), st.integers(3, 9))
def test_truncations_are_compatible(f: Poly, N: int) -> None:
    """A higher truncation only adds terms of degree above N."""
    low = split(f, "x", N).h
    high = split(f, "x", N + 2).h
    assert high.truncate(N) == low
