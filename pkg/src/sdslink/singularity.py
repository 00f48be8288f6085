"""Classification of hypersurface germs as cA_n and Kawakita blowup data."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from gmpy2 import mpq

from .poly import INF, Poly, PolyError, Rat, VarTable, Weighting, rat
from .splitting import split


# quadratic part


@dataclass(frozen=True)
class QuadForm:
    rank: int
    matrix: list  # x_i -> sum_j M[i][j] x_j
    diagonal: tuple  # coefficient of x_k^2 after the change, first `rank` nonzero
    f: Poly
    variables: tuple


def _gram(q: Poly, names: Sequence[str]) -> list[list[Rat]]:
    n = len(names)
    idx = [q.table.index(v) for v in names]
    G = [[mpq(0)] * n for _ in range(n)]
    for m, c in q.terms.items():
        nz = [k for k, i in enumerate(idx) if m[i]]
        if len(nz) == 1:
            G[nz[0]][nz[0]] += c
        else:
            a, b = nz
            G[a][b] += c / 2
            G[b][a] += c / 2
    return G


def quad_diagonalize(f: Poly, variables: Sequence[str] | None = None) -> QuadForm:
    """Rational linear change making the quadratic part diagonal.

    The change is ``x_i -> sum_j M[i][j] x_j``; afterwards the quadratic part
    is ``sum_k lambda_k x_k^2`` with the nonzero ``lambda_k`` first.
    """
    names = tuple(variables) if variables is not None else tuple(f.table.names)
    std = {v: 1 for v in names}
    if f.graded_part(std, 0):
        raise PolyError("f has a nonzero constant term")
    lin = f.graded_part(std, 1)
    if lin:
        raise PolyError(f"f has a nonzero linear part: {lin}")
    n = len(names)
    G = _gram(f.graded_part(std, 2), names)
    P = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]

    def col_add(dst: int, src: int, c: Rat) -> None:
        # x_dst' absorbs c * x_src': congruence G <- E^T G E with E = I + c e_src e_dst^T
        for r in range(n):
            P[r][dst] += c * P[r][src]
        for r in range(n):
            G[r][dst] += c * G[r][src]
        for r in range(n):
            G[dst][r] += c * G[src][r]

    def swap(a: int, b: int) -> None:
        for r in range(n):
            P[r][a], P[r][b] = P[r][b], P[r][a]
        G[a], G[b] = G[b], G[a]
        for row in G:
            row[a], row[b] = row[b], row[a]

    k = 0
    for _ in range(n):
        if k >= n:
            break
        if not G[k][k]:
            piv = next((j for j in range(k + 1, n) if G[j][j]), None)
            if piv is not None:
                swap(k, piv)
            else:
                off = next((j for j in range(k + 1, n) if G[k][j]), None)
                if off is None:
                    # row k is zero: move it to the end
                    nz = next((j for j in range(k + 1, n) if any(G[j])), None)
                    if nz is None:
                        break
                    swap(k, nz)
                    continue
                col_add(k, off, mpq(1))
        for j in range(k + 1, n):
            if G[k][j]:
                col_add(j, k, -G[k][j] / G[k][k])
        k += 1
    diag = [G[i][i] for i in range(n)]
    order = sorted(range(n), key=lambda i: (diag[i] == 0, i))
    P = [[P[r][c] for c in order] for r in range(n)]
    diag = tuple(diag[i] for i in order)
    rank = sum(1 for d in diag if d)
    g = f.linear_change(names, P)
    return QuadForm(rank, P, diag, g, names)


# classification


@dataclass(frozen=True)
class GermReport:
    quad_rank: int
    residual_h: Poly | None
    index: int | None
    label: str
    certified: bool
    trunc_degree: int
    notes: tuple = ()

    def as_dict(self) -> dict:
        return {
            "quad_rank": self.quad_rank,
            "residual_h": None if self.residual_h is None else self.residual_h.render(),
            "index": self.index,
            "label": self.label,
            "certified": self.certified,
            "trunc_degree": self.trunc_degree,
            "notes": list(self.notes),
        }


def translate(f: Poly, point: Mapping[str, object]) -> Poly:
    """Move ``point`` to the origin."""
    return f.substitute({v: Poly.var(f.table, v) + rat(c) for v, c in point.items() if rat(c)})


def _residual(g: Poly, first: str, second: str, lam1: Rat, lam2: Rat, N: int, vec) -> Poly:
    h1 = split(g * (1 / lam1), first, N, vec, verify=False).h
    return split(h1 * (lam1 / lam2), second, N, vec, verify=False).h


def classify_cAn(
    f: Poly,
    point: Mapping[str, object] | None = None,
    N: int = 20,
    variables: Sequence[str] | None = None,
) -> GermReport:
    """Compound Du Val cA_n index of the germ of V(f) at ``point``.

    Rank >= 3 gives n = 1; rank 2 splits off both squares and reads
    n = mult(h) - 1; rank <= 1 is not cA.  The residual is computed at
    increasing truncations up to ``N``; if it still vanishes the verdict
    is indeterminate rather than a guess.
    """
    names = tuple(variables) if variables is not None else tuple(f.table.names)
    prefix = "cA" if len(names) >= 4 else "A"
    if point:
        f = translate(f, point)
    vec = {v: 1 for v in names}
    if f.graded_part(vec, 0):
        raise PolyError("the point does not lie on V(f)")
    if f.graded_part(vec, 1):
        return GermReport(0, None, 0, "smooth", True, N, ("linear part nonzero",))
    qf = quad_diagonalize(f, names)
    if qf.rank <= 1:
        return GermReport(qf.rank, None, None, f"not {prefix} (corank > 2)", True, N)
    g = qf.f
    first, second = names[0], names[1]
    lam1, lam2 = qf.diagonal[0], qf.diagonal[1]
    notes = [f"quadratic part diagonalised with entries {', '.join(str(d) for d in qf.diagonal)}"]
    n_try = min(N, 4)
    while True:
        h = _residual(g, first, second, lam1, lam2, n_try, vec)
        if h or n_try >= N:
            break
        n_try = min(N, 2 * n_try)
    if not h:
        return GermReport(qf.rank, h, None, f"{prefix}_n with n >= {N}", False, N,
                          tuple(notes) + ("residual vanishes to the truncation degree",))
    n = int(h.multiplicity()) - 1
    return GermReport(qf.rank, h, n, f"{prefix}_{n}", True, n_try, tuple(notes))


# Kawakita weights


@dataclass(frozen=True)
class KawakitaWeights:
    r1: int
    r2: int
    a: int = 1

    def __post_init__(self):
        r1, r2, a = self.r1, self.r2, self.a
        if min(r1, r2, a) < 1:
            raise PolyError("Kawakita weights must be positive")
        if r1 < r2:
            raise PolyError("convention r1 >= r2 violated")
        if (r1 + r2) % a:
            raise PolyError("a must divide r1 + r2")
        if math.gcd(a, r1) != 1 or math.gcd(a, r2) != 1:
            raise PolyError("a must be coprime to r1 and r2")
        if self.n < 2:
            raise PolyError("n = (r1 + r2)/a - 1 must be at least 2")

    @property
    def n(self) -> int:
        return (self.r1 + self.r2) // self.a - 1

    def vector(self) -> tuple[int, int, int, int]:
        return (self.r1, self.r2, self.a, 1)


@dataclass(frozen=True)
class KawakitaVerdict:
    weight: float | int
    weight_ok: bool
    low_terms: Poly | None
    normal_form: bool
    monomial_ok: bool | None
    passed: bool

    def summary(self) -> str:
        parts = [f"wt = {self.weight} ({'ok' if self.weight_ok else 'wrong'})"]
        if self.normal_form:
            parts.append("x3 monomial " + ("present" if self.monomial_ok else "absent"))
        else:
            parts.append("not in x1*x2 + g(x3, x4) form; monomial condition not checked")
        return "; ".join(parts)


def _roles(f: Poly, variables: Sequence[str] | None) -> tuple[str, str, str, str]:
    names = tuple(variables) if variables is not None else tuple(f.table.names[:4])
    if len(names) != 4:
        raise PolyError("need exactly four coordinates (x1, x2, x3, x4)")
    return names  # type: ignore[return-value]


def normal_form_part(f: Poly, variables: Sequence[str] | None = None) -> Poly | None:
    """Return g when f = c*x1*x2 + g(x3, x4) with c a nonzero constant."""
    x1, x2, x3, x4 = _roles(f, variables)
    i1, i2 = f.table.index(x1), f.table.index(x2)
    cross = None
    rest = {}
    for m, c in f.terms.items():
        if m[i1] or m[i2]:
            if m[i1] == 1 and m[i2] == 1 and sum(m) == 2 and cross is None:
                cross = c
                continue
            return None
        rest[m] = c
    if cross is None:
        return None
    return Poly(f.table, rest) * (1 / cross)


def kawakita_check(f: Poly, kw: KawakitaWeights, variables: Sequence[str] | None = None) -> KawakitaVerdict:
    """Weight and monomial conditions for a (r1, r2, a, 1) blowup of V(f)."""
    names = _roles(f, variables)
    extra = set(f.variables()) - set(names)
    if extra:
        raise PolyError(f"f involves variables outside the four coordinates: {sorted(extra)}")
    w = dict(zip(names, kw.vector()))
    wt = f.weight(w)
    target = kw.r1 + kw.r2
    low = f.truncate(target - 1, w) if wt < target else None
    g = normal_form_part(f, names)
    monomial_ok = None
    if g is not None:
        monomial_ok = bool(g.coefficient(names[2], target // kw.a).coefficient(names[3], 0).constant_term())
    ok = wt == target and monomial_ok is not False
    return KawakitaVerdict(wt, wt == target, low, g is not None, monomial_ok, ok)


def type_a(f: Poly, variables: Sequence[str] | None = None) -> int | float | None:
    """Largest a with wt_(a,1)(g) = a(n+1) for f = x1*x2 + g(x3, x4) as given.

    Only the given coordinates are examined.  Returns ``inf`` when every
    a works (g is a multiple of x3^(n+1), a non-isolated germ) and None
    when f is not in that form.
    """
    names = _roles(f, variables)
    g = normal_form_part(f, names)
    if g is None or g.is_zero():
        return None
    x3, x4 = names[2], names[3]
    n1 = int(g.multiplicity())
    i3, i4 = g.table.index(x3), g.table.index(x4)
    if all(m[i3] >= n1 for m in g.terms):
        return INF
    bound = max(m[i4] for m in g.terms)
    best = None
    for a in range(1, bound + 1):
        if g.weight({x3: a, x4: 1}) == a * n1:
            best = a
    return best


# blowup ideals


@dataclass(frozen=True)
class BlowupPresentation:
    kind: str  # "I", "J" or "J'"
    generators: tuple
    ambient_weights: dict
    section: dict  # new variable -> polynomial in the old coordinates
    table: VarTable


def _wtrunc(p: Poly, w: dict, k: int) -> Poly:
    return p.truncate(k - 1, w) if k > 0 else Poly.zero(p.table)


def build_blowup_ideal(
    f: Poly,
    kw: KawakitaWeights,
    variables: Sequence[str] | None = None,
    names: tuple[str, str] = ("alpha", "beta"),
    N: int | None = None,
) -> BlowupPresentation:
    """Ideal whose weighted blowup realises the (r1, r2, a, 1) Kawakita blowup.

    ``f`` must read ``-x1^2 + x2^2 + F`` with mult(F) >= 3 in the given
    coordinates.  The general ideal I is returned, or the smaller J when
    F does not involve x1, or J' when moreover r1 = r2.
    """
    x1, x2, x3, x4 = _roles(f, variables)
    al, be = names
    table = f.table.extend([al, be])
    f = f.with_table(table)
    r1, r2 = kw.r1, kw.r2
    N = N or 2 * (r1 + r2)
    std = {v: 1 for v in (x1, x2, x3, x4)}
    F = f + Poly.var(table, x1, 2) - Poly.var(table, x2, 2)
    if F.graded_part(std, 2) or F.truncate(1, std):
        raise PolyError("f must equal -x1^2 + x2^2 + F with mult(F) >= 3")
    s1 = split(-f, x1, N, std)
    q, w = s1.p, s1.v
    s2 = split(-s1.h, x2, N, std)
    p, v = s2.p, s2.v
    mult_q = q.multiplicity()
    mult_p = p.multiplicity()
    m = int(min(r2, mult_q))
    m2 = int(min(r2, mult_p))
    wp = {x1: m, x2: m2, x3: kw.a, x4: 1}
    one = Poly.const(table, 1)
    X1, X2 = Poly.var(table, x1), Poly.var(table, x2)
    A, B = Poly.var(table, al), Poly.var(table, be)
    v_lo = one if r1 == r2 else _wtrunc(v, wp, r1 - r2)
    w_lo = one if r1 == m else _wtrunc(w, wp, r1 - m)
    p_r1 = _wtrunc(p, wp, r1)
    p_r2 = _wtrunc(p, wp, r2)
    beta_sec = X2 + p_r2
    gen_beta = -B + beta_sec
    x1_free = F.degree(x1) <= 0
    if x1_free and r1 == r2:
        weights = {x1: r1, be: r2, x2: m2, x3: kw.a, x4: 1}
        return BlowupPresentation("J'", (f, gen_beta), weights, {be: beta_sec}, table)
    if x1_free:
        alpha_sec = X1 + (X2 + p_r1) * v_lo
        first = -(A - (X2 + p_r1) * v_lo) ** 2 + X2 ** 2 + F
        weights = {al: r1, be: r2, x2: m2, x3: kw.a, x4: 1}
        return BlowupPresentation("J", (first, gen_beta), weights, {al: alpha_sec, be: beta_sec}, table)
    q_r1 = _wtrunc(q, wp, r1)
    alpha_sec = (X1 + q_r1) * w_lo + (X2 + p_r1) * v_lo
    weights = {al: r1, be: r2, x1: m, x2: m2, x3: kw.a, x4: 1}
    return BlowupPresentation(
        "I", (f, -A + alpha_sec, gen_beta), weights, {al: alpha_sec, be: beta_sec}, table
    )


def pullback_chart(g: Poly, w: Weighting, chart_var: str = "u") -> tuple[Poly, int]:
    """Substitute x_i -> u^(w_i) x_i and divide by the largest power of u.

    Variables absent from a weighting mapping get weight 0.  The table is
    extended by ``chart_var`` when needed.
    """
    if g.is_zero():
        raise PolyError("pullback of the zero polynomial")
    table = g.table if chart_var in g.table else g.table.extend([chart_var])
    g = g.with_table(table)
    if isinstance(w, Mapping):
        vec = table.weight_vector({k: v for k, v in w.items()})
    else:
        vec = tuple(w) + (0,) * (len(table) - len(tuple(w)))
        vec = table.weight_vector(vec)
    iu = table.index(chart_var)
    if vec[iu]:
        raise PolyError("the chart variable cannot carry a weight")
    order = int(g.weight(vec))
    out = {}
    for m, c in g.terms.items():
        d = sum(a * b for a, b in zip(m, vec))
        e = list(m)
        e[iu] += d - order
        out[tuple(e)] = c
    return Poly(table, out), order
