"""Binary forms: gcd, Sylvester resultant, squarefree tests and root counts."""

from __future__ import annotations

from typing import Sequence

from gmpy2 import mpq

from .poly import Poly, PolyError, divide_exact

Pair = tuple[str, str]


def _pair(polys: Sequence[Poly], variables: Sequence[str] | None) -> Pair:
    if variables is not None:
        if len(variables) != 2:
            raise PolyError("a binary form needs exactly two variables")
        return variables[0], variables[1]
    table = polys[0].table
    used = set()
    for p in polys:
        used.update(p.variables())
    if len(used) > 2:
        raise PolyError(f"not a binary form: variables {sorted(used)}")
    ordered = [n for n in table.names if n in used]
    for n in table.names:
        if len(ordered) == 2:
            break
        if n not in ordered:
            ordered.append(n)
    if len(ordered) < 2:
        raise PolyError("the variable table has fewer than two variables")
    ordered.sort(key=table.index)
    return ordered[0], ordered[1]


def _coeffs(F: Poly, y: str, z: str) -> list:
    """Coefficient list c[k] of y^k z^(n-k) for a homogeneous form of degree n."""
    iy, iz = F.table.index(y), F.table.index(z)
    n = F.degree()
    c = [mpq(0)] * (n + 1)
    for m, v in F.terms.items():
        if any(e for i, e in enumerate(m) if i not in (iy, iz)):
            raise PolyError("binary form contains other variables")
        if m[iy] + m[iz] != n:
            raise PolyError("binary form is not homogeneous")
        c[m[iy]] = v
    return c


def _from_coeffs(table, c: list, y: str, z: str) -> Poly:
    n = len(c) - 1
    iy, iz = table.index(y), table.index(z)
    terms = {}
    for k, v in enumerate(c):
        if v:
            e = [0] * len(table)
            e[iy] = k
            e[iz] = n - k
            terms[tuple(e)] = v
    return Poly(table, terms)


def _strip(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def _udivmod(a: list, b: list) -> tuple[list, list]:
    a = _strip(a)
    b = _strip(b)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    q = [mpq(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        f = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = f
        for i, bv in enumerate(b):
            a[shift + i] -= f * bv
        a = _strip(a)
    return q, a


def ugcd(a: list, b: list) -> list:
    """Monic gcd of univariate coefficient lists (ascending powers)."""
    a, b = _strip(a), _strip(b)
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [x / a[-1] for x in a]


def _normalize(F: Poly, y: str, z: str) -> Poly:
    """Scale so the coefficient of the highest power of z is one (order y < z)."""
    c = _coeffs(F, y, z)
    lead = next(v for v in c if v)
    return F * (1 / lead)


def leading_coefficient(F: Poly, variables: Sequence[str] | None = None):
    y, z = _pair([F], variables)
    return next(v for v in _coeffs(F, y, z) if v)


def binary_gcd(a: Poly, b: Poly, variables: Sequence[str] | None = None) -> Poly:
    """Greatest common divisor of two binary forms, monic under y < z."""
    if a.is_zero() and b.is_zero():
        raise PolyError("gcd of two zero polynomials is undefined")
    y, z = _pair([a, b], variables)
    if a.is_zero() or b.is_zero():
        return _normalize(b if a.is_zero() else a, y, z)
    ca, cb = _coeffs(a, y, z), _coeffs(b, y, z)
    # powers of z dividing each form; the rest is a polynomial in y/z
    oz_a = len(ca) - len(_strip(ca))
    oz_b = len(cb) - len(_strip(cb))
    g = ugcd(ca, cb)
    deg = len(g) - 1 + min(oz_a, oz_b)
    full = [mpq(0)] * (deg + 1)
    for k, v in enumerate(g):
        full[k] = v
    return _normalize(_from_coeffs(a.table, full, y, z), y, z)


def is_binary_form(F: Poly, variables: Sequence[str] | None = None) -> bool:
    try:
        y, z = _pair([F], variables)
        _coeffs(F, y, z)
    except PolyError:
        return False
    return True


def repeated_factor(F: Poly, variables: Sequence[str] | None = None) -> Poly:
    """gcd of the two partial derivatives: the product of l^(e-1) over linear factors l^e."""
    y, z = _pair([F], variables)
    if F.is_zero():
        raise PolyError("the zero form has no factorization")
    if F.degree() == 0:
        return Poly.const(F.table, 1)
    return binary_gcd(F.diff(y), F.diff(z), (y, z))


def is_squarefree(F: Poly, variables: Sequence[str] | None = None) -> bool:
    """True when no square of a linear form divides the nonzero binary form F."""
    if F.is_zero():
        return False
    return repeated_factor(F, variables).degree() == 0


def distinct_roots(F: Poly, variables: Sequence[str] | None = None) -> int:
    """Number of distinct points of V(F) in the projective line."""
    return F.degree() - repeated_factor(F, variables).degree()


def divides(a: Poly, b: Poly) -> bool:
    try:
        divide_exact(b, a)
    except PolyError:
        return False
    return True


def _poly_det(M: list[list[Poly]]) -> Poly:
    """Fraction-free (Bareiss) determinant of a matrix with Poly entries."""
    n = len(M)
    if n == 0:
        raise PolyError("empty matrix")
    table = M[0][0].table
    A = [row[:] for row in M]
    sign = 1
    prev = Poly.const(table, 1)
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if A[r][k]), None)
        if piv is None:
            return Poly.zero(table)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = divide_exact(num, prev) if prev != 1 else num
            A[i][k] = Poly.zero(table)
        prev = A[k][k]
    return A[n - 1][n - 1] * sign


def sylvester_matrix(a: Poly, b: Poly, var: str) -> list[list[Poly]]:
    m, n = a.degree(var), b.degree(var)
    ca = [a.coefficient(var, i) for i in range(m, -1, -1)]
    cb = [b.coefficient(var, i) for i in range(n, -1, -1)]
    size = m + n
    zero = Poly.zero(a.table)
    rows = []
    for i in range(n):
        rows.append([zero] * i + ca + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + cb + [zero] * (size - n - 1 - i))
    return rows


def resultant(a: Poly, b: Poly, var: str) -> Poly:
    """Classical Sylvester resultant of ``a`` and ``b`` with respect to ``var``."""
    if a.table != b.table:
        raise PolyError("polynomials live over different variable tables")
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.table)
    m, n = a.degree(var), b.degree(var)
    if m == 0 and n == 0:
        return Poly.const(a.table, 1)
    if m == 0:
        return a ** n
    if n == 0:
        return b ** m
    return _poly_det(sylvester_matrix(a, b, var))


def discriminant(a: Poly, var: str) -> Poly:
    """Resultant of ``a`` and its derivative divided by the leading coefficient (up to sign)."""
    n = a.degree(var)
    lc = a.coefficient(var, n)
    r = divide_exact(resultant(a, a.diff(var), var), lc)
    return r * (-1 if (n * (n - 1) // 2) % 2 else 1)
