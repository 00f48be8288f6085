"""Independent reference computations built on sympy.

These deliberately avoid the package's recurrences and toric routines so the
tests compare two unrelated routes to the same answer.
"""

from __future__ import annotations

import math

import sympy
from sympy import QQ
from sympy.polys.rings import ring

from sdslink.poly import Poly


def to_sympy(p: Poly) -> sympy.Expr:
    syms = {n: sympy.Symbol(n) for n in p.table.names}
    return sympy.sympify(p.render().replace("^", "**"), locals=syms)


def _trunc(q, N: int):
    return q.ring.from_dict({m: c for m, c in q.terms() if sum(m) <= N})


def _compose_truncated(f, i: int, value, N: int):
    """f with generator i replaced by value, Horner style, dropping degrees above N."""
    R = f.ring
    by_power: dict[int, object] = {}
    for m, c in f.terms():
        rest = m[:i] + (0,) + m[i + 1 :]
        by_power[m[i]] = by_power.get(m[i], R.zero) + R({rest: c})
    out = R.zero
    for k in range(max(by_power, default=0), -1, -1):
        out = _trunc(out * value, N) + by_power.get(k, R.zero)
    return out


def residual_by_critical_point(f: Poly, var: str, N: int) -> sympy.Expr:
    """h(y) = f(x*(y), y) with x* the critical point of f in var, to degree N.

    For f = (x + g)^2 + h the derivative is 2 (x + g)(1 + dg/dx), so the
    critical point is x + g = 0 and the value there is h.
    """
    R, *gens = ring(",".join(f.table.names), QQ)
    F = R(to_sympy(f))
    i = f.table.index(var)
    fx = F.diff(gens[i])
    root = R.zero
    for _ in range(N + 1):
        root = _trunc(root - _compose_truncated(fx, i, root, N) * QQ(1, 2), N)
    return _trunc(_compose_truncated(F, i, root, N), N).as_expr()


def sorted_ray_groups(columns: dict[str, tuple[int, int]]) -> list[list[str]]:
    """Group columns by ray and order the rays anticlockwise using atan2.

    The start is the ray after the widest angular gap, which is where a
    strictly convex cone begins.
    """
    angles: dict[float, list[str]] = {}
    for name, (a, b) in columns.items():
        angle = round(math.atan2(b, a) % (2 * math.pi), 12)
        angles.setdefault(angle, []).append(name)
    keys = sorted(angles)
    gaps = [(keys[(i + 1) % len(keys)] - keys[i]) % (2 * math.pi) for i in range(len(keys))]
    start = (max(range(len(keys)), key=lambda i: gaps[i]) + 1) % len(keys)
    order = keys[start:] + keys[:start]
    return [angles[k] for k in order]
