"""Explicit splitting lemma by degree-wise recurrences.

Given ``f = x^2 + (terms without x) + (higher order)``, we compute truncated
series ``g, h, p, v`` with

    f = (x + g)^2 + h = (v * (x + p))^2 + h

where ``h`` and ``p`` do not involve ``x`` and ``v`` has constant term 1.
Write ``f = sum x^i f_{i,d}`` with ``f_{i,d}`` homogeneous of degree ``d`` in
the other variables.  Comparing coefficients of ``x^i`` in degree ``d`` gives
triangular recurrences for ``g_{i,d}``, ``h_d``, ``p_d`` and ``v_{i,d}``; each
entry only reads entries of strictly smaller total degree ``i + d``, so a
truncation at total degree ``N`` loses nothing below ``N + 1``.

Degrees may be taken with respect to a weighting of the remaining
variables.  This is how symbolic coefficients are handled: a placeholder
standing for a form of degree ``j`` simply carries weight ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .poly import Poly, PolyError, VarTable, Weighting

HALF = mpq(1, 2)


class SplitError(PolyError):
    """The input violates the splitting precondition."""


@dataclass(frozen=True)
class SplitSeries:
    var: str
    g: Poly
    h: Poly
    p: Poly
    v: Poly
    N: int
    weights: tuple[int, ...]


def _grading(table: VarTable, var: str, w: Weighting) -> tuple[int, ...]:
    vec = list(table.weight_vector(w) if w is not None else (1,) * len(table))
    k = table.index(var)
    if w is not None and vec[k] not in (0, 1):
        raise SplitError(f"split variable {var} must have weight 1")
    vec[k] = 1
    return tuple(vec)


def check_precondition(f: Poly, var: str, w: Weighting = None) -> tuple[int, ...]:
    """Validate the quadratic part; returns the grading used for degrees."""
    vec = _grading(f.table, var, w)
    if f.is_zero():
        raise SplitError("multiplicity precondition: f is zero")
    low = [d for d in f.graded_parts(vec) if d < 2]
    if low:
        bad = f.truncate(1, vec)
        raise SplitError(f"multiplicity precondition: f has terms of degree < 2: {bad}")
    q = f.graded_part(vec, 2)
    involving = q - q.coefficient(var, 0)
    if involving != Poly.var(f.table, var, 2):
        raise SplitError(
            f"quadratic part must be {var}^2 + (terms without {var}); "
            f"offending degree-2 terms: {involving}"
        )
    return vec


class _Recurrence:
    """Memo tables f[i,d], g[i,d], h[d], p[d], v[i,d] for one input."""

    def __init__(self, f: Poly, var: str, vec: tuple[int, ...], top: int):
        self.table = f.table
        self.var = var
        self.k = f.table.index(var)
        self.vec = vec
        self.zero = Poly.zero(f.table)
        self.fs: dict[tuple[int, int], dict] = {}
        k = self.k
        for m, c in f.terms.items():
            i = m[k]
            d = sum(a * b for a, b in zip(m, vec)) - i
            if i + d <= top:
                rest = m[:k] + (0,) + m[k + 1:]
                self.fs.setdefault((i, d), {})[rest] = c
        self.g: dict[tuple[int, int], Poly] = {}
        self.h: dict[int, Poly] = {}
        self.p: dict[int, Poly] = {}
        self.v: dict[tuple[int, int], Poly] = {(0, 0): Poly.const(f.table, 1)}

    def f(self, i: int, d: int) -> Poly:
        t = self.fs.get((i, d))
        return Poly(self.table, t) if t else self.zero

    def g_at(self, i: int, d: int) -> Poly:
        return self.g.get((i, d), self.zero)

    def fill_g(self, total: int) -> None:
        for s in range(2, total + 1):
            for i in range(s, -1, -1):
                d = s - i
                if (i, d) == (1, 0):
                    continue
                acc = self.f(i + 1, d)
                for k in range(d + 1):
                    for j in range(max(0, 2 - k), i + 2):
                        j2, k2 = i + 1 - j, d - k
                        if j2 + k2 < 2 or j2 + k2 > s - 1:
                            continue
                        a = self.g.get((j, k))
                        if a is None:
                            continue
                        b = self.g.get((j2, k2))
                        if b is None:
                            continue
                        acc = acc - a * b
                if acc:
                    self.g[(i, d)] = acc * HALF

    def fill_h(self, N: int) -> None:
        for d in range(2, N + 1):
            acc = self.f(0, d)
            for j in range(2, d - 1):
                a, b = self.g.get((0, j)), self.g.get((0, d - j))
                if a is not None and b is not None:
                    acc = acc - a * b
            if acc:
                self.h[d] = acc

    def fill_pv(self, N: int) -> None:
        for d in range(0, N + 1):
            if d >= 2:
                acc = self.g_at(0, d)
                for j in range(2, d):
                    a, b = self.v.get((0, d - j)), self.p.get(j)
                    if a is not None and b is not None:
                        acc = acc - a * b
                if acc:
                    self.p[d] = acc
            for i in range(0, N - d + 1):
                if (i, d) == (0, 0):
                    continue
                acc = self.g_at(i + 1, d)
                for j in range(2, d + 1):
                    a, b = self.v.get((i + 1, d - j)), self.p.get(j)
                    if a is not None and b is not None:
                        acc = acc - a * b
                if acc:
                    self.v[(i, d)] = acc

    def xpow(self, i: int) -> Poly:
        return Poly.var(self.table, self.var, i) if i else Poly.const(self.table, 1)

    def assemble(self, table: dict, N: int) -> Poly:
        out = self.zero
        for (i, d), c in table.items():
            if i + d <= N:
                out = out + self.xpow(i) * c
        return out


def split(f: Poly, var: str, N: int, w: Weighting = None, *, verify: bool = True) -> SplitSeries:
    """Split off ``var`` from ``f`` up to total degree ``N``.

    ``w`` optionally assigns degrees to the remaining variables (the split
    variable always has degree one).  The result satisfies both identities
    modulo terms of degree ``N + 1``; this is checked before returning
    unless ``verify`` is false.
    """
    if N < 2:
        raise SplitError("truncation degree must be at least 2")
    vec = check_precondition(f, var, w)
    rec = _Recurrence(f, var, vec, N + 1)
    rec.fill_g(N + 1)
    rec.fill_h(N)
    rec.fill_pv(N)
    g = rec.assemble(rec.g, N)
    h = rec.assemble({(0, d): c for d, c in rec.h.items()}, N)
    p = rec.assemble({(0, d): c for d, c in rec.p.items()}, N)
    v = rec.assemble(rec.v, N)
    s = SplitSeries(var, g, h, p, v, N, vec)
    if verify and not verify_split(f, s):
        raise ArithmeticError("splitting identity failed")
    return s


def h_parts(f: Poly, var: str, N: int, w: Weighting = None) -> dict[int, Poly]:
    """Homogeneous parts h_2..h_N of the residual, skipping g, p and v assembly."""
    vec = check_precondition(f, var, w)
    rec = _Recurrence(f, var, vec, N)
    rec.fill_g(N - 1)
    rec.fill_h(N)
    return {d: rec.h.get(d, rec.zero) for d in range(2, N + 1)}


def verify_split(f: Poly, s: SplitSeries) -> bool:
    """Check f = (x+g)^2 + h = (v(x+p))^2 + h modulo degree N+1."""
    x = Poly.var(f.table, s.var)
    if x.table != s.g.table:
        return False
    N, vec = s.N, s.weights
    xg = x + s.g
    lhs1 = xg.mul_truncated(xg, N, vec) + s.h - f.truncate(N, vec)
    if lhs1:
        return False
    vxp = s.v.mul_truncated(x + s.p, N, vec)
    lhs2 = vxp.mul_truncated(vxp, N, vec) + s.h - f.truncate(N, vec)
    if lhs2:
        return False
    if s.h.coefficient(s.var, 0) != s.h or s.p.coefficient(s.var, 0) != s.p:
        return False
    return s.v.truncate(0, s.weights) == 1


def iterated_split(f: Poly, split_vars: Sequence[str], N: int, w: Weighting = None) -> Poly:
    """Split off each variable in turn, feeding the residual to the next stage."""
    h = f
    for stage, var in enumerate(split_vars):
        try:
            h = split(h, var, N, w).h
        except SplitError as exc:
            raise SplitError(f"stage {stage} ({var}): {exc}") from None
    return h


def symbolic_table(up_to: int, var: str = "x") -> VarTable:
    """Variables ``x`` and ``f_i_d`` (weight d) for 2 <= i + d <= up_to + 1."""
    names = [var]
    weights = [1]
    for s in range(2, up_to + 2):
        for i in range(s + 1):
            d = s - i
            if (i, d) in ((2, 0), (1, 1)):
                continue
            names.append(f"f_{i}_{d}")
            weights.append(max(d, 1))
    return VarTable(tuple(names), tuple(weights))


def h_symbolic(up_to: int) -> list[Poly]:
    """h_2, ..., h_up_to in terms of the symbols f_{i,d}.

    Here ``f = x^2 + sum x^i f_{i,d}`` with every admissible ``f_{i,d}`` a
    free symbol of degree ``d``.
    """
    table = symbolic_table(up_to)
    grading = {n: (0 if n == "x" else int(n.rsplit("_", 1)[1])) for n in table.names}
    grading["x"] = 1
    f = Poly.var(table, "x", 2)
    for n in table.names[1:]:
        _, i, d = n.split("_")
        f = f + Poly.var(table, "x", int(i)) * Poly.var(table, n) if int(i) else f + Poly.var(table, n)
    parts = h_parts(f, "x", up_to, grading)
    return [parts[d] for d in range(2, up_to + 1)]
