"""Sextic double solids with a cA_n point at P_x = [1, 0, 0, 0, 0].

The double solid is ``V(f)`` in P(1, 1, 1, 1, 3) with variables x, y, z, t, w
and

    f = -w^2 + x^4 t^2 + x^4 xi_2 + x^3 (4 t^3 a_0 + 4 t^2 a_1 + 2 t a_2 + a_3)
        + x^2 (2 t^4 b_0 + ... + b_4) + x (2 t^5 c_0 + ... + c_5)
        + t^6 d_0 + 2 t^5 d_1 + t^4 d_2 + 2 t^3 d_3 + t^2 d_4 + 2 t d_5 + d_6

with xi_j, a_j, b_j, c_j, d_j binary forms of degree j in (y, z).  In
symbolic mode each coefficient is a placeholder variable carrying its
degree as a weight, so the splitting recurrences see the right grading
without expanding the forms.

Successive conditions on the coefficients make the residual series h_2,
h_3, ... of the splitting in t vanish; conditions 2..n give cA_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence


from .forms import (
    binary_gcd,
    discriminant,
    distinct_roots,
    is_squarefree,
    leading_coefficient,
    resultant,
)
from .poly import Poly, PolyError, VarTable, parse, rat
from .splitting import h_parts

COORDS = ("x", "y", "z", "t", "w")

# name -> (y, z)-degree
BASE_PARAMS: dict[str, int] = {"xi_2": 2}
for _letter, _top in (("a", 3), ("b", 4), ("c", 5), ("d", 6)):
    for _j in range(_top + 1):
        BASE_PARAMS[f"{_letter}_{_j}"] = _j

SUBFAMILY_NAMES: dict[str, dict[str, tuple[str, int] | int]] = {
    # symbol role -> (placeholder name, degree) or a fixed constant
    "7.1": {"q": 1, "r": ("r_2", 2), "s": ("s_3", 3), "e": ("e_2", 2)},
    "7.2": {"q": ("q_1", 1), "r": ("r_1", 1), "s": ("s_2", 2), "e": ("e_3", 3)},
    "7.3": {"q": ("q_2", 2), "r": 1, "s": ("s_1", 1), "e": ("e_4", 4)},
    "7.4": {"q": ("q_3", 3), "r": 0, "s": 1, "e": ("e_5", 5)},
}

DERIVED_PARAMS: dict[str, int] = {
    "r_2": 2, "s_3": 3, "e_2": 2,
    "q_1": 1, "r_1": 1, "s_2": 2, "e_3": 3,
    "q_2": 2, "s_1": 1, "e_4": 4,
    "q_3": 3, "e_5": 5,
    "A_0": 0, "B_1": 1, "B_0": 0,
}
# generic symbols of condition 7 used only for display comparisons
GENERIC_SYMBOLS = ("q", "r", "s", "e")

PARAM_DEGREES: dict[str, int] = {**BASE_PARAMS, **DERIVED_PARAMS}

TABLE = VarTable(
    COORDS + tuple(PARAM_DEGREES) + GENERIC_SYMBOLS,
    (1,) * len(COORDS) + tuple(max(d, 1) for d in PARAM_DEGREES.values()) + (1,) * 4,
)

# grading used after the chart x = 1: t, y, z have degree one, placeholders their own degree
GRADING = {"t": 1, "y": 1, "z": 1, **PARAM_DEGREES}

SUBFAMILIES = ("7.1", "7.2", "7.3", "7.4")


def P(text: str) -> Poly:
    return parse(text, TABLE)


class FamilyError(PolyError):
    pass


class ResourceError(RuntimeError):
    """Raised when a symbolic expansion exceeds the configured term ceiling."""


@dataclass(frozen=True)
class FamilyId:
    n: int
    subfamily: str | None = None

    def __post_init__(self):
        if not 1 <= self.n <= 8:
            raise FamilyError("n must lie between 1 and 8")
        if self.n == 7 and self.subfamily not in SUBFAMILIES:
            raise FamilyError("n = 7 needs a subfamily 7.1, 7.2, 7.3 or 7.4")
        if self.n == 8 and self.subfamily not in (None, "7.1"):
            raise FamilyError("condition 8 builds on subfamily 7.1")
        if self.n < 7 and self.subfamily is not None:
            raise FamilyError("subfamilies exist only for n = 7")
        if self.n == 8:
            object.__setattr__(self, "subfamily", "7.1")

    @classmethod
    def parse(cls, text: str) -> "FamilyId":
        text = text.strip()
        if text.startswith("cA"):
            text = text[2:]
        text = text.replace("-", ".")
        if "." in text:
            n, sub = text.split(".", 1)
            return cls(int(n), f"{n}.{sub}")
        return cls(int(text))

    def __str__(self) -> str:
        return self.subfamily if self.n == 7 else str(self.n)


def all_families() -> list[FamilyId]:
    out = [FamilyId(n) for n in range(1, 7)]
    out += [FamilyId(7, s) for s in SUBFAMILIES]
    out.append(FamilyId(8))
    return out


# the generic polynomial

_LAYOUT = {
    # coefficient name -> (power of x, power of t, numeric factor)
    "xi_2": (4, 0, 1),
    "a_0": (3, 3, 4), "a_1": (3, 2, 4), "a_2": (3, 1, 2), "a_3": (3, 0, 1),
    "b_0": (2, 4, 2), "b_1": (2, 3, 2), "b_2": (2, 2, 2), "b_3": (2, 1, 2), "b_4": (2, 0, 1),
    "c_0": (1, 5, 2), "c_1": (1, 4, 2), "c_2": (1, 3, 2), "c_3": (1, 2, 2), "c_4": (1, 1, 2),
    "c_5": (1, 0, 1),
    "d_0": (0, 6, 1), "d_1": (0, 5, 2), "d_2": (0, 4, 1), "d_3": (0, 3, 2), "d_4": (0, 2, 1),
    "d_5": (0, 1, 2), "d_6": (0, 0, 1),
}


def _as_poly(value, table: VarTable = TABLE) -> Poly:
    if isinstance(value, Poly):
        return value.with_table(table) if value.table != table else value
    if isinstance(value, str):
        return parse(value, table)
    return Poly.const(table, value)


def check_homogeneous(name: str, value: Poly) -> None:
    deg = PARAM_DEGREES[name]
    if value.is_zero():
        return
    bad = set(value.variables()) & {"x", "t", "w"}
    if bad:
        raise FamilyError(f"coefficient {name} involves {sorted(bad)}")
    parts = value.graded_parts(GRADING)
    if list(parts) != [deg]:
        raise FamilyError(f"coefficient {name} is not homogeneous of degree {deg}: {value}")


def generic_f(values: Mapping[str, object] | None = None, include_xi: bool = True) -> Poly:
    """The sextic of the family, with supplied coefficients substituted.

    Unsupplied coefficients stay symbolic placeholders.  With
    ``include_xi=False`` the x^4 xi_2 term is left out (condition 2 built in).
    """
    values = dict(values or {})
    x, t, w = (Poly.var(TABLE, v) for v in ("x", "t", "w"))
    f = -w ** 2 + x ** 4 * t ** 2
    for name, (i, j, c) in _LAYOUT.items():
        if name == "xi_2" and not include_xi:
            continue
        coeff = _as_poly(values[name]) if name in values else Poly.var(TABLE, name)
        if name in values:
            check_homogeneous(name, coeff)
        f = f + x ** i * t ** j * coeff * c
    return f


# conditions

CONDITION_TEXT: dict[int, dict[str, str]] = {
    2: {"xi_2": "0"},
    3: {"a_3": "0"},
    4: {"b_4": "a_2^2"},
    5: {"c_5": "2*a_2*b_3 - 4*a_1*a_2^2"},
    6: {"d_6": "2*a_2*c_4 + b_3^2 - 8*a_1*a_2*b_3 - 2*a_2^2*b_2 + 4*a_0*a_2^3 + 16*a_1^2*a_2^2"},
    7: {
        "a_2": "q*r",
        "b_3": "q*s + 4*a_1*q*r",
        "c_4": "2*a_1*q*s - 6*a_0*q^2*r^2 + 8*a_1^2*q*r + e*r",
        "d_5": "2*b_2*q*s - 8*a_1^2*q*s - e*s - b_1*q^2*r^2 + c_3*q*r",
    },
    8: {
        "e_2": "4*A_0*r_2 + b_2 - 6*a_1^2",
        "c_3": "6*a_0*s_3 - 4*A_0*s_3 + 4*a_0*a_1*r_2 - 8*A_0*a_1*r_2 + B_1*r_2 + 2*a_1*b_2 - 4*a_1^3",
        "d_4": "-2*s_3*B_1 + 16*r_2^2*A_0^2 - 8*b_2*r_2*A_0 + 16*a_1^2*r_2*A_0 + 4*b_1*s_3"
               " - 8*a_0*a_1*s_3 - 2*b_0*r_2^2 + 2*c_2*r_2 + b_2^2 - 4*a_1^2*b_2 + 4*a_1^4",
    },
    9: {
        "A_0": "a_0",
        "B_1": "b_1",
        "d_3": "-s_3*B_0 + 2*b_0*s_3 - 2*a_0^2*s_3 + c_1*r_2 - 4*a_0*b_1*r_2 + 16*a_0^2*a_1*r_2"
               " + b_1*b_2 - 4*a_0*a_1*b_2 - 2*a_1^2*b_1 + 8*a_0*a_1^3",
        "c_2": "r_2*B_0 - 6*a_0^2*r_2 + 2*a_0*b_2 + 2*a_1*b_1 - 12*a_0*a_1^2",
    },
    10: {
        "B_0": "b_0",
        "d_2": "2*c_0*r_2 - 8*a_0*b_0*r_2 + 16*a_0^3*r_2 + 2*b_0*b_2 - 4*a_0^2*b_2 + b_1^2"
               " - 8*a_0*a_1*b_1 - 4*a_1^2*b_0 + 24*a_0^2*a_1^2",
        "c_1": "2*a_0*b_1 + 2*a_1*b_0 - 12*a_0^2*a_1",
    },
    11: {
        "c_0": "2*a_0*b_0 - 4*a_0^3",
        "d_1": "b_0*b_1 - 2*a_0^2*b_1 - 4*a_0*a_1*b_0 + 8*a_0^3*a_1",
    },
    12: {"d_0": "b_0^2 - 4*a_0^2*b_0 + 4*a_0^4"},
}

Step = tuple[int, dict[str, Poly]]


def subfamily_values(sub: str) -> dict[str, Poly]:
    """Images of the generic q, r, s, e for one cA_7 subfamily."""
    out = {}
    for role, spec in SUBFAMILY_NAMES[sub].items():
        out[role] = Poly.var(TABLE, spec[0]) if isinstance(spec, tuple) else Poly.const(TABLE, spec)
    return out


def condition_step(k: int, sub: str | None = None) -> dict[str, Poly]:
    images = {name: P(text) for name, text in CONDITION_TEXT[k].items()}
    if k == 7:
        if sub is None:
            return images
        roles = subfamily_values(sub)
        images = {name: img.substitute(roles) for name, img in images.items()}
    return images


def apply_conditions(fid: FamilyId) -> list[Step]:
    """Ordered substitutions for conditions 2..n of the family."""
    return [(k, condition_step(k, fid.subfamily)) for k in range(2, fid.n + 1)]


def extended_chain(n: int) -> list[Step]:
    """Conditions 2..8 followed by 9..n (n between 9 and 12)."""
    if not 9 <= n <= 12:
        raise FamilyError("extended conditions run from 9 to 12")
    return apply_conditions(FamilyId(8)) + [(k, condition_step(k)) for k in range(9, n + 1)]


def run_chain(p: Poly, chain: Sequence[Step]) -> Poly:
    for _, images in chain:
        p = p.substitute(images)
    return p


# residual series


def chart(f: Poly) -> Poly:
    """The affine piece x = 1 with the -w^2 absorbed, as split by the residual computation."""
    return (f + Poly.var(TABLE, "w", 2)).evaluate({"x": 1})


def residual_series(f: Poly, top: int, max_terms: int | None = 200_000) -> dict[int, Poly]:
    """h_2..h_top of the splitting of the chart polynomial in t."""
    g = chart(f)
    if max_terms is not None and len(g) > max_terms:
        raise ResourceError(f"input has {len(g)} terms, above the ceiling {max_terms}")
    parts = h_parts(g, "t", top, GRADING)
    if max_terms is not None:
        for d, h in parts.items():
            if len(h) > max_terms:
                raise ResourceError(f"h_{d} has {len(h)} terms, above the ceiling {max_terms}")
    return parts


def residual_h(fid: FamilyId, k: int, *, guard: bool = True) -> Poly:
    """Symbolic h_k after conditions 2..n of the family."""
    if guard and k > fid.n + 2:
        raise ResourceError(f"k = {k} exceeds n + 2 = {fid.n + 2}; pass guard=False to override")
    f = run_chain(generic_f(), apply_conditions(fid))
    return residual_series(f, k)[k]


H7_EXPECTED = "q*(r*(-12*a_0*q^2*r*s+4*b_2*q*s-2*b_1*q^2*r^2+2*c_3*q*r-2*d_5) - s*(2*c_4-4*a_1*q*s))"


# parameter counting


def free_parameters(fid: FamilyId) -> dict[str, int]:
    """Placeholder symbols left free by the conditions, with their degrees."""
    f = run_chain(generic_f(), apply_conditions(fid))
    return {v: PARAM_DEGREES[v] for v in f.variables() if v in PARAM_DEGREES}


def param_dim(fid: FamilyId) -> int:
    """Number of free rational coefficients after conditions 2..n."""
    total = sum(d + 1 for d in free_parameters(fid).values())
    if fid.subfamily == "7.2" and fid.n == 7:
        total -= 1  # q_1 is monic
    return total


# concrete coefficient sets


@dataclass
class SDSCoefficients:
    """Coefficient forms by name; missing names stay symbolic."""

    values: dict[str, Poly] = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, data: Mapping[str, object]) -> "SDSCoefficients":
        vals = {}
        for name, v in data.items():
            key = normalize_name(name)
            if key not in PARAM_DEGREES:
                raise FamilyError(f"unknown coefficient {name!r}")
            poly = _as_poly(v)
            check_homogeneous(key, poly)
            vals[key] = poly
        return cls(vals)

    @classmethod
    def from_text(cls, text: str) -> "SDSCoefficients":
        data = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line and ":" not in line:
                raise FamilyError(f"line {lineno}: expected 'name = polynomial'")
            sep = "=" if "=" in line else ":"
            name, body = line.split(sep, 1)
            data[name.strip()] = body.strip()
        return cls.from_mapping(data)

    def get(self, name: str) -> Poly:
        return self.values.get(name, Poly.var(TABLE, name))

    def is_concrete(self, names: Sequence[str]) -> bool:
        return all(n in self.values and not (set(self.values[n].variables()) - {"y", "z"}) for n in names)

    def f(self) -> Poly:
        base = {k: v for k, v in self.values.items() if k in BASE_PARAMS}
        return generic_f(base)


def normalize_name(name: str) -> str:
    name = name.strip().replace("ξ", "xi")
    if name.startswith("xi") and "_" not in name:
        name = "xi_" + name[2:]
    return name


@dataclass
class ConditionResult:
    condition: str
    passed: bool
    witness: str

    def as_dict(self) -> dict:
        return {"passed": self.passed, "witness": self.witness}


@dataclass
class ConditionReport:
    family: str
    results: list[ConditionResult]
    residual_next: Poly | None
    lower_residuals_vanish: bool | None
    derived: dict[str, Poly]
    verdict: str

    @property
    def member(self) -> bool:
        return self.verdict.startswith("member")

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "conditions": {r.condition: r.as_dict() for r in self.results},
            "derived": {k: v.render() for k, v in sorted(self.derived.items())},
            "residual_next": None if self.residual_next is None else self.residual_next.render(),
            "lower_residuals_vanish": self.lower_residuals_vanish,
            "verdict": self.verdict,
        }


def _eq(cond: str, lhs: Poly, rhs: Poly) -> ConditionResult:
    diff = lhs - rhs
    return ConditionResult(cond, diff.is_zero(), diff.render())


def _exact_quotient(num: Poly, den: Poly) -> Poly | None:
    from .poly import divide

    if den.is_zero():
        return None if num else Poly.zero(num.table)
    q, r = divide(num, den)
    return None if r else q


def _solve_condition7(c: SDSCoefficients, sub: str) -> tuple[list[ConditionResult], dict[str, Poly]]:
    """Find q, r, s, e for the subfamily, or report why they cannot exist."""
    g = c.get
    a0, a1, a2, b1, b2, b3, c3, c4, d5 = (g(n) for n in ("a_0", "a_1", "a_2", "b_1", "b_2", "b_3", "c_3", "c_4", "d_5"))
    results: list[ConditionResult] = []
    spec = SUBFAMILY_NAMES[sub]
    names = {role: (s[0] if isinstance(s, tuple) else None) for role, s in spec.items()}
    supplied = {role: c.values[n] for role, n in names.items() if n and n in c.values}
    fixed = {role: Poly.const(TABLE, s) for role, s in spec.items() if not isinstance(s, tuple)}
    one = Poly.const(TABLE, 1)
    q = r = s = e = None
    if len(supplied) + len(fixed) == 4:
        vals = {**fixed, **supplied}
        q, r, s, e = vals["q"], vals["r"], vals["s"], vals["e"]
    else:
        if not c.is_concrete(["a_0", "a_1", "a_2", "b_2", "b_3", "c_4", "d_5"]):
            raise FamilyError(
                "condition 7 needs concrete a_0, a_1, a_2, b_2, b_3, c_4, d_5 or explicit q, r, s, e"
            )
        rest = b3 - a1 * a2 * 4
        if sub == "7.4":
            q, r, s = b3, Poly.zero(TABLE), one
            results.append(ConditionResult("7:r=0", a2.is_zero(), a2.render()))
            e = q * b2 * 2 - a1 ** 2 * q * 8 - d5
        else:
            if a2.is_zero():
                results.append(ConditionResult("7:a_2 nonzero", False, "a_2 = 0 forces subfamily 7.4"))
                return results, {}
            gcd = binary_gcd(a2, rest, ("y", "z"))
            want = {"7.1": 0, "7.2": 1, "7.3": 2}[sub]
            ok_deg = gcd.degree() == want
            results.append(ConditionResult(f"7:deg q = {want}", ok_deg, f"gcd(a_2, b_3 - 4*a_1*a_2) = {gcd}"))
            if not ok_deg:
                return results, {}
            if sub == "7.1":
                q = one
            elif sub == "7.2":
                q = gcd
            else:
                q = a2
            r = _exact_quotient(a2, q)
            s = _exact_quotient(rest, q)
            num = c4 - a1 * q * s * 2 + a0 * q ** 2 * r ** 2 * 6 - a1 ** 2 * q * r * 8
            e = _exact_quotient(num, r)
            if e is None:
                results.append(ConditionResult("7:c_4", False, f"r = {r} does not divide {num}"))
                return results, {}
    derived = {"q": q, "r": r, "s": s, "e": e}
    results.append(_eq("7:a_2", a2, q * r))
    results.append(_eq("7:b_3", b3, q * s + a1 * q * r * 4))
    results.append(_eq("7:c_4", c4, a1 * q * s * 2 - a0 * q ** 2 * r ** 2 * 6 + a1 ** 2 * q * r * 8 + e * r))
    results.append(_eq("7:d_5", d5, b2 * q * s * 2 - a1 ** 2 * q * s * 8 - e * s - b1 * q ** 2 * r ** 2 + c3 * q * r))
    if sub == "7.2":
        ok = not q.is_zero() and leading_coefficient(q, ("y", "z")) == 1
        results.append(ConditionResult("7:q monic", ok, q.render()))
    if all(not set(v.variables()) - {"y", "z"} for v in (q, r, s, e)):
        try:
            g_rs = binary_gcd(r, s, ("y", "z"))
            results.append(ConditionResult("7:gcd(r, s) = 1", g_rs.degree() == 0, g_rs.render()))
        except PolyError:
            results.append(ConditionResult("7:gcd(r, s) = 1", False, "r = s = 0"))
        try:
            g_qe = binary_gcd(q, e, ("y", "z"))
            results.append(ConditionResult("7:gcd(q, e) = 1", g_qe.degree() == 0, g_qe.render()))
        except PolyError:
            results.append(ConditionResult("7:gcd(q, e) = 1", False, "q = e = 0"))
    for role, name in names.items():
        if name:
            derived[name] = derived[role]
    return results, derived


def _solve_condition8(c: SDSCoefficients, d7: dict[str, Poly]) -> tuple[list[ConditionResult], dict[str, Poly]]:
    g = c.get
    a0, a1, b0, b1, b2, c2, c3, d4 = (g(n) for n in ("a_0", "a_1", "b_0", "b_1", "b_2", "c_2", "c_3", "d_4"))
    r2, s3, e2 = d7["r"], d7["s"], d7["e"]
    results = []
    if "A_0" in c.values and "B_1" in c.values:
        A0, B1 = c.values["A_0"], c.values["B_1"]
    else:
        A0 = _exact_quotient(e2 - b2 + a1 ** 2 * 6, r2 * 4)
        if A0 is None or not A0.is_constant():
            results.append(ConditionResult("8:A_0", False, "(e_2 - b_2 + 6*a_1^2)/(4*r_2) is not a constant"))
            return results, {}
        rest = a0 * s3 * 6 - A0 * s3 * 4 + a0 * a1 * r2 * 4 - A0 * a1 * r2 * 8 + a1 * b2 * 2 - a1 ** 3 * 4
        B1 = _exact_quotient(c3 - rest, r2)
        if B1 is None:
            results.append(ConditionResult("8:B_1", False, "r_2 does not divide the c_3 remainder"))
            return results, {}
    results.append(_eq("8:e_2", e2, A0 * r2 * 4 + b2 - a1 ** 2 * 6))
    results.append(_eq("8:c_3", c3, a0 * s3 * 6 - A0 * s3 * 4 + a0 * a1 * r2 * 4 - A0 * a1 * r2 * 8
                       + B1 * r2 + a1 * b2 * 2 - a1 ** 3 * 4))
    results.append(_eq("8:d_4", d4, -s3 * B1 * 2 + r2 ** 2 * A0 ** 2 * 16 - b2 * r2 * A0 * 8
                       + a1 ** 2 * r2 * A0 * 16 + b1 * s3 * 4 - a0 * a1 * s3 * 8 - b0 * r2 ** 2 * 2
                       + c2 * r2 * 2 + b2 ** 2 - a1 ** 2 * b2 * 4 + a1 ** 4 * 4))
    return results, {"A_0": A0, "B_1": B1}


def check_membership(coeffs: SDSCoefficients, fid: FamilyId, *, residual: bool = True) -> ConditionReport:
    """Verify conditions 2..n exactly and compute the next residual h_{n+1}."""
    g = coeffs.get
    results: list[ConditionResult] = []
    for k in range(2, min(fid.n, 6) + 1):
        for name, img in condition_step(k).items():
            rhs = img.substitute({v: g(v) for v in img.variables() if v in PARAM_DEGREES})
            results.append(_eq(f"{k}:{name}", g(name), rhs))
    derived: dict[str, Poly] = {}
    if fid.n >= 7:
        guard_ok = not (g("a_2").is_zero() and g("b_3").is_zero())
        results.append(ConditionResult("guard:a_2 or b_3 nonzero", guard_ok, "" if guard_ok else "a_2 = b_3 = 0"))
        r7, d7 = _solve_condition7(coeffs, fid.subfamily)
        results += r7
        derived.update(d7)
        if fid.n == 8 and d7:
            r8, d8 = _solve_condition8(coeffs, d7)
            results += r8
            derived.update(d8)
        elif fid.n == 8:
            results.append(ConditionResult("8", False, "condition 7.1 could not be solved"))
    passed = all(r.passed for r in results)
    h_next = None
    lower_ok = None
    if residual:
        parts = residual_series(coeffs.f(), fid.n + 1)
        lower_ok = all(parts[d].is_zero() for d in range(2, fid.n + 1))
        h_next = parts[fid.n + 1]
    if passed and lower_ok is not False:
        if h_next is None:
            verdict = "member"
        elif h_next.is_zero():
            verdict = f"member; h_{fid.n + 1} vanishes so the point is worse than cA_{fid.n}"
        else:
            verdict = f"member; h_{fid.n + 1} nonzero, cA_{fid.n} candidate (isolatedness not certified)"
    else:
        failed = [r.condition for r in results if not r.passed]
        verdict = "not a member: " + ", ".join(failed) if failed else "not a member: residuals disagree"
    return ConditionReport(str(fid), results, h_next, lower_ok, derived, verdict)


# point checks


def point_jacobian(f: Poly, point: Mapping[str, object]) -> tuple[Poly, ...]:
    """Values of f and of its partials in x, y, z, t, w at a point."""
    if all(rat(point.get(v, 0)) == 0 for v in COORDS if v in point) and all(
        rat(point.get(v, 0)) == 0 for v in COORDS
    ):
        raise FamilyError("all coordinates are zero")
    vals = {v: point.get(v, 0) for v in COORDS}
    return tuple(h.evaluate(vals) for h in [f] + [f.diff(v) for v in COORDS])


def generic_forms(names: Sequence[str] | None = None) -> tuple[VarTable, dict[str, Poly]]:
    """Each placeholder expanded into a binary form with fresh coefficient symbols.

    The symbol for the coefficient of y^i z^(j-i) in a_j is ``a_j_i``.
    """
    names = list(names or BASE_PARAMS)
    extra = []
    for n in names:
        extra += [f"{n}_{i}" for i in range(PARAM_DEGREES[n] + 1)]
    table = TABLE.extend(extra)
    y, z = Poly.var(table, "y"), Poly.var(table, "z")
    forms = {}
    for n in names:
        d = PARAM_DEGREES[n]
        forms[n] = sum((Poly.var(table, f"{n}_{i}") * y ** i * z ** (d - i) for i in range(d + 1)),
                       Poly.zero(table))
    return table, forms


def expanded_generic_f() -> Poly:
    table, forms = generic_forms()
    return generic_f().with_table(table).substitute(forms)


# extended conditions


CURVE_WITNESS = ("w", "t", "s_3 + 2*a_1*r_2 + x*r_2")

IDENTITY_LHS = ("x^3*a_3 + x^2*b_4 + x*c_5 + d_6", "x^3*a_2 + x^2*b_3 + x*c_4 + d_5")
IDENTITY_RHS = (
    "(s_3 + 2*a_1*r_2 + x*r_2)^2",
    "(s_3 + 2*a_1*r_2 + x*r_2)*(-2*a_0*r_2 + b_2 - 2*a_1^2 + 2*x*a_1 + x^2)",
)


class IdentityError(ArithmeticError):
    """A displayed identity failed; indicates a transcription error."""


@dataclass
class ExtendedConditions:
    n: int
    chain: list[Step]
    identities: list[tuple[str, str, bool]]
    curve: tuple[str, ...] = CURVE_WITNESS


def extended_conditions(n: int) -> ExtendedConditions:
    """Conditions 9..n on top of 2..8, with the two factorizations verified."""
    chain = extended_chain(n)
    after9 = extended_chain(9)
    checks = []
    for lhs, rhs in zip(IDENTITY_LHS, IDENTITY_RHS):
        ok = run_chain(P(lhs), after9) == P(rhs)
        checks.append((lhs, rhs, ok))
        if not ok:
            raise IdentityError(f"{lhs} = {rhs} fails after condition 9")
    return ExtendedConditions(n, chain, checks)


# generality


@dataclass
class GeneralityVerdict:
    family: str
    passed: bool
    checks: list[ConditionResult]
    point_count: int | None = None
    note: str = "necessary conditions only; the full open set is not certified"

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "passed": self.passed,
            "point_count": self.point_count,
            "checks": {r.condition: r.as_dict() for r in self.checks},
            "note": self.note,
        }


def count_points(F: Poly, G: Poly, wvar: str = "w", pair: tuple[str, str] = ("y", "z")) -> tuple[int | None, str]:
    """Distinct points of V(F, G) in P(1, 1, k), where wvar has weight k.

    Returns (count, explanation); count is None when the solutions are not
    all distinct or the elimination degenerates.
    """
    if F.degree(wvar) > G.degree(wvar):
        F, G = G, F
    table = F.table
    origin = {pair[0]: 0, pair[1]: 0, wvar: 1}
    if F.evaluate(origin).is_zero() and G.evaluate(origin).is_zero():
        return None, "the point with y = z = 0 is a solution"
    if F.degree(wvar) <= 0:
        if F.is_zero():
            return None, "first equation vanishes identically"
        k = G.degree(wvar)
        lc = G.coefficient(wvar, k)
        if not lc.is_constant():
            return None, "leading coefficient in the eliminated variable is not constant"
        if not is_squarefree(F, pair):
            return None, f"{F} has a repeated factor"
        if k == 0:
            return None, "both equations are free of the weighted variable"
        disc = discriminant(G, wvar) if k > 1 else Poly.const(table, 1)
        common = binary_gcd(F, disc, pair) if not disc.is_zero() else F
        if common.degree() > 0:
            return None, f"the fibre over {common} has a repeated solution"
        return F.degree() * k, f"{F.degree()} points of V({F}) with {k} solutions each"
    lcs = (F.coefficient(wvar, F.degree(wvar)), G.coefficient(wvar, G.degree(wvar)))
    if not any(lc.is_constant() for lc in lcs):
        return None, "neither equation has a constant leading coefficient in the eliminated variable"
    R = resultant(F, G, wvar)
    if R.is_zero():
        return None, "the resultant vanishes identically"
    if not is_squarefree(R, pair):
        return None, f"resultant has {distinct_roots(R, pair)} distinct roots but degree {R.degree()}"
    return R.degree(), f"resultant of degree {R.degree()} is squarefree"


GENERALITY_FAMILIES = ("cA4", "cA5", "cA6", "cA7.1", "cA7.2", "cA7.3", "cA8")


def check_generality(family: str, coeffs: SDSCoefficients) -> GeneralityVerdict:
    """Necessary generality conditions for the links of each family."""
    fam = family if family.startswith("cA") else "cA" + family
    fam = fam.replace("-", ".")
    g = coeffs.get
    checks: list[ConditionResult] = []
    count = None
    w = Poly.var(TABLE, "w")

    def need(*names):
        if not coeffs.is_concrete(names):
            raise FamilyError(f"generality check for {fam} needs concrete {', '.join(names)}")

    if fam == "cA4":
        need("a_2", "c_5", "d_6")
        count, why = count_points(w * g("a_2") * 2 + g("c_5"), w ** 2 - g("d_6"))
        checks.append(ConditionResult("V(2*w*a_2 + c_5, w^2 - d_6) is 10 points", count == 10, f"{count}: {why}"))
    elif fam == "cA5":
        need("a_2", "d_6")
        count, why = count_points(g("a_2"), -w ** 2 + g("d_6"))
        checks.append(ConditionResult("V(a_2, -w^2 + d_6) is 4 points", count == 4, f"{count}: {why}"))
    elif fam == "cA6":
        need("a_0", "a_1", "a_2", "b_2", "b_3", "c_4", "d_5")
        a0, a1, a2, b2, b3, c4, d5 = (g(n) for n in ("a_0", "a_1", "a_2", "b_2", "b_3", "c_4", "d_5"))
        expr = c4 - a1 * b3 * 2 - a2 * b2 + a0 * a2 ** 2 * 2 + a1 ** 2 * a2 * 6
        checks.append(ConditionResult("c_4 - 2*a_1*b_3 - a_2*b_2 + 2*a_0*a_2^2 + 6*a_1^2*a_2 != 0",
                                      not expr.is_zero(), expr.render()))
        two = (not a2.is_zero()) and a2.degree() == 2 and is_squarefree(a2, ("y", "z"))
        checks.append(ConditionResult("V(a_2) is two distinct points", two, a2.render()))
        if not a2.is_zero():
            common = a2
            for h in (b3, c4, d5):
                common = binary_gcd(common, h, ("y", "z"))
            checks.append(ConditionResult("b_3, c_4 or d_5 nonzero at each point of V(a_2)",
                                          common.degree() == 0, common.render()))
            count = distinct_roots(a2, ("y", "z")) if two else None
    elif fam == "cA7.1":
        need("a_0", "a_1", "b_2", "r_2", "e_2")
        form = -g("e_2") + g("a_0") * g("r_2") * 4 + g("b_2") - g("a_1") ** 2 * 6
        ok = (not form.is_zero()) and form.degree() == 2 and is_squarefree(form, ("y", "z"))
        count = distinct_roots(form, ("y", "z")) if not form.is_zero() else None
        checks.append(ConditionResult("V(-e_2 + 4*a_0*r_2 + b_2 - 6*a_1^2) is two distinct points", ok, form.render()))
    elif fam == "cA7.2":
        need("q_1", "r_1")
        gcd = binary_gcd(g("r_1"), g("q_1"), ("y", "z"))
        checks.append(ConditionResult("r_1 and q_1 coprime", gcd.degree() == 0, gcd.render()))
    elif fam == "cA7.3":
        need("q_2")
        q2 = g("q_2")
        ok = (not q2.is_zero()) and is_squarefree(q2, ("y", "z"))
        checks.append(ConditionResult("q_2 is not a square", ok, q2.render()))
    elif fam == "cA8":
        need("a_0", "A_0")
        diff = g("a_0") - g("A_0")
        checks.append(ConditionResult("a_0 != A_0", not diff.is_zero(), diff.render()))
    elif fam == "cA7.4":
        return GeneralityVerdict(fam, False, [], None, "this family is not Q-factorial; no link conditions")
    else:
        raise FamilyError(f"unknown family {family!r}")
    return GeneralityVerdict(fam, all(c.passed for c in checks), checks, count)
