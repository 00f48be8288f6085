"""Rank-two toric varieties given by a 2 x n action matrix.

A ``Rank2Toric`` is the quotient of C^n minus an irrelevant locus by a
two-dimensional torus.  Column i is the bidegree of variable i; the
irrelevant ideal is (first block) ∩ (second block), the blocks being the
variables before and after the ``wall`` index.  The columns span rays in
the plane; the cones between consecutive rays are the chambers of the
secondary fan, and crossing a ray inside the movable cone is a toric flip,
flop or isomorphism.  The two ends of the movable cone give a divisorial
contraction or a fibration.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from gmpy2 import mpq

from .poly import Poly, PolyError, Rat, VarTable, rat

Vec = tuple[Rat, Rat]

DEFAULT_BOUND = 24


class ToricError(PolyError):
    pass


class BoundExceeded(ToricError):
    """The generator search needs exponents beyond the configured bound."""


def cross(a: Sequence, b: Sequence) -> Rat:
    """Positive when b lies anticlockwise of a (within a half-turn)."""
    return rat(a[0]) * rat(b[1]) - rat(a[1]) * rat(b[0])


def primitive(v: Sequence) -> tuple[int, int]:
    """The primitive integral vector on the ray through v."""
    a, b = rat(v[0]), rat(v[1])
    if a == 0 and b == 0:
        raise ToricError("zero column")
    den = math.lcm(int(a.denominator), int(b.denominator))
    ia, ib = int(a * den), int(b * den)
    g = math.gcd(ia, ib)
    return ia // g, ib // g


@dataclass(frozen=True)
class Rank2Toric:
    names: tuple[str, ...]
    action: tuple[tuple[Rat, ...], tuple[Rat, ...]]
    wall: int

    def __post_init__(self):
        names = tuple(self.names)
        rows = tuple(tuple(rat(x) for x in row) for row in self.action)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "action", rows)
        if len(rows) != 2 or any(len(r) != len(names) for r in rows):
            raise ToricError("action matrix must have two rows with one entry per variable")
        if len(set(names)) != len(names):
            raise ToricError("variable names must be distinct")
        for i, n in enumerate(names):
            if rows[0][i] == 0 and rows[1][i] == 0:
                raise ToricError(f"variable {n} has a zero column")
        if not 0 < self.wall < len(names):
            raise ToricError("the wall index must split the variables into two nonempty blocks")

    @classmethod
    def from_rows(cls, names: str | Sequence[str], rows: Sequence[Sequence], wall: int) -> "Rank2Toric":
        if isinstance(names, str):
            names = names.split()
        return cls(tuple(names), (tuple(rows[0]), tuple(rows[1])), wall)

    def column(self, name_or_index) -> Vec:
        i = name_or_index if isinstance(name_or_index, int) else self.names.index(name_or_index)
        return self.action[0][i], self.action[1][i]

    def columns(self) -> list[Vec]:
        return [self.column(i) for i in range(len(self.names))]

    def rows_int(self) -> list[list]:
        """Rows with integral entries rendered as ints, others kept rational."""
        return [[int(x) if x.denominator == 1 else x for x in row] for row in self.action]

    def with_wall(self, wall: int) -> "Rank2Toric":
        return Rank2Toric(self.names, self.action, wall)

    def anticanonical(self) -> Vec:
        return sum((c[0] for c in self.columns()), mpq(0)), sum((c[1] for c in self.columns()), mpq(0))

    def render(self) -> str:
        cells = [[n for n in self.names]] + [[str(x) for x in row] for row in self.rows_int()]
        width = [max(len(r[i]) for r in cells) for i in range(len(self.names))]
        lines = []
        for r in cells:
            left = " ".join(c.rjust(w) for c, w in zip(r[: self.wall], width))
            right = " ".join(c.rjust(w) for c, w in zip(r[self.wall:], width[self.wall:]))
            lines.append(f"{left} | {right}")
        return "\n".join(lines)


def normalize(T: Rank2Toric, M: Sequence[Sequence]) -> Rank2Toric:
    """Change the torus basis: the action matrix becomes M times the old one."""
    m = [[rat(x) for x in row] for row in M]
    if len(m) != 2 or any(len(r) != 2 for r in m):
        raise ToricError("basis change must be a 2 x 2 matrix")
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] == 0:
        raise ToricError("basis change is singular")
    a = T.action
    rows = tuple(
        tuple(m[i][0] * a[0][j] + m[i][1] * a[1][j] for j in range(len(T.names))) for i in range(2)
    )
    return Rank2Toric(T.names, rows, T.wall)


# chambers


@dataclass(frozen=True)
class Ray:
    direction: tuple[int, int]
    names: tuple[str, ...]


@dataclass(frozen=True)
class Chamber:
    left: int
    right: int
    mori: bool


@dataclass(frozen=True)
class ChamberData:
    rays: tuple[Ray, ...]
    effective: tuple[int, int]
    movable: tuple[int, int]
    chambers: tuple[Chamber, ...]
    current: int

    def ray_of(self, name: str) -> int:
        for i, r in enumerate(self.rays):
            if name in r.names:
                return i
        raise ToricError(f"unknown variable {name}")

    def as_dict(self) -> dict:
        return {
            "rays": [{"direction": list(r.direction), "variables": list(r.names)} for r in self.rays],
            "effective": [list(self.rays[i].names) for i in self.effective],
            "movable": [list(self.rays[i].names) for i in self.movable],
            "chambers": [
                {"between": [list(self.rays[c.left].names), list(self.rays[c.right].names)], "mori": c.mori}
                for c in self.chambers
            ],
            "current": self.current,
        }


def chambers(T: Rank2Toric) -> ChamberData:
    """Rays sorted anticlockwise, effective and movable cones, and all chambers."""
    groups: dict[tuple[int, int], list[str]] = {}
    for name, col in zip(T.names, T.columns()):
        groups.setdefault(primitive(col), []).append(name)
    dirs = list(groups)
    if len(dirs) < 2:
        raise ToricError("all columns lie on one ray")
    for d in dirs:
        if (-d[0], -d[1]) in groups:
            raise ToricError("the effective cone is not strictly convex")
    start = [d for d in dirs if all(cross(d, e) >= 0 for e in dirs)]
    if len(start) != 1:
        raise ToricError("the effective cone is not strictly convex")
    first = start[0]

    def cmp(a, b):
        c = cross(a, b)
        return -1 if c > 0 else (1 if c < 0 else 0)

    rest = sorted((d for d in dirs if d != first), key=functools.cmp_to_key(cmp))
    ordered = [first] + rest
    for a, b in zip(ordered, ordered[1:]):
        if cross(a, b) <= 0:
            raise ToricError("the effective cone is not strictly convex")
    rays = tuple(Ray(d, tuple(groups[d])) for d in ordered)
    k = len(rays)
    lo = 1 if len(rays[0].names) == 1 else 0
    hi = k - 2 if len(rays[-1].names) == 1 else k - 1
    chs = tuple(Chamber(i, i + 1, lo <= i and i + 1 <= hi) for i in range(k - 1))
    left_name, right_name = T.names[T.wall - 1], T.names[T.wall]
    li = next(i for i, r in enumerate(rays) if left_name in r.names)
    ri = next(i for i, r in enumerate(rays) if right_name in r.names)
    if abs(li - ri) != 1:
        raise ToricError(
            f"the wall between {left_name} and {right_name} does not separate adjacent rays"
        )
    return ChamberData(rays, (0, k - 1), (lo, hi), chs, min(li, ri))


# ample models


@dataclass(frozen=True)
class MonoGen:
    """A monomial with possibly fractional exponents and its degree along the ray."""

    exponents: tuple[tuple[str, Fraction], ...]
    degree: Fraction

    def render(self) -> str:
        parts = []
        for name, e in self.exponents:
            if e == 1:
                parts.append(name)
            elif e.denominator == 1:
                parts.append(f"{name}^{e.numerator}")
            else:
                parts.append(f"{name}^({e.numerator}/{e.denominator})")
        return "*".join(parts) if parts else "1"

    def as_poly(self, table: VarTable) -> Poly:
        if any(e.denominator != 1 for _, e in self.exponents):
            raise ToricError("fractional monomial has no polynomial form")
        return Poly.monomial(table, {n: int(e) for n, e in self.exponents})


@dataclass(frozen=True)
class MonomialMap:
    generators: tuple[MonoGen, ...]
    target: str
    weights: tuple[int, ...] | None = None
    determinant: int | None = None
    aux: str | None = None

    def rendered(self) -> list[str]:
        return [g.render() for g in self.generators]

    def as_dict(self) -> dict:
        return {
            "generators": self.rendered(),
            "degrees": [str(g.degree) for g in self.generators],
            "target": self.target,
            "weights": None if self.weights is None else list(self.weights),
            "determinant": self.determinant,
            "aux": self.aux,
        }


def _ray_weights(T: Rank2Toric, rho: tuple[int, int]) -> list[int]:
    ks = [cross(rho, c) for c in T.columns()]
    den = math.lcm(*(int(k.denominator) for k in ks))
    ints = [int(k * den) for k in ks]
    g = math.gcd(*ints) or 1
    # primitive so that the weights, and the search bound, do not depend on the basis
    return [k // g for k in ints]


def _degree_on_ray(T: Rank2Toric, rho: tuple[int, int], exps: Sequence) -> Fraction:
    c0 = sum((rat(e) * c[0] for e, c in zip(exps, T.columns())), mpq(0))
    c1 = sum((rat(e) * c[1] for e, c in zip(exps, T.columns())), mpq(0))
    d = c0 / rho[0] if rho[0] else c1 / rho[1]
    return Fraction(int(d.numerator), int(d.denominator))


def section_generators(T: Rank2Toric, rho: tuple[int, int], bound: int = DEFAULT_BOUND) -> list[tuple[int, ...]]:
    """Minimal generators of the monoid of exponent vectors with bidegree on the ray."""
    k = _ray_weights(T, rho)
    n = len(k)
    pos = [i for i in range(n) if k[i] > 0]
    neg = [i for i in range(n) if k[i] < 0]
    zero = [i for i in range(n) if k[i] == 0]
    maxpos = max((k[i] for i in pos), default=0)
    maxneg = max((-k[i] for i in neg), default=0)
    if maxpos + maxneg > bound:
        raise BoundExceeded(
            f"generator search needs total exponent up to {maxpos + maxneg}, above the bound {bound}"
        )
    gens: list[tuple[int, ...]] = []
    for i in zero:
        e = [0] * n
        e[i] = 1
        gens.append(tuple(e))
    if pos and neg:

        def vectors(idx, limit):
            out: dict[int, list[tuple[int, ...]]] = {}
            for total in range(1, limit + 1):
                for combo in itertools.combinations_with_replacement(idx, total):
                    e = [0] * n
                    for i in combo:
                        e[i] += 1
                    s = sum(abs(k[i]) * e[i] for i in idx)
                    out.setdefault(s, []).append(tuple(e))
            return out

        P = vectors(pos, maxneg)
        N = vectors(neg, maxpos)
        cands = []
        for s, plist in P.items():
            for a in plist:
                for b in N.get(s, []):
                    cands.append(tuple(x + y for x, y in zip(a, b)))
        cands.sort(key=sum)
        mixed: list[tuple[int, ...]] = []
        for c in cands:
            if not any(all(x <= y for x, y in zip(g, c)) for g in mixed):
                mixed.append(c)
        gens += mixed
    return gens


def ample_model(T: Rank2Toric, ray: str | int, bound: int = DEFAULT_BOUND) -> MonomialMap:
    """The ample model of the divisor class on a ray.

    ``ray`` is a variable name lying on the ray or a ray index from
    ``chambers``.  At a ray with exactly one variable strictly beyond it
    (clockwise or anticlockwise, whichever side is not effective-interior)
    the model is a weighted projective space given by variables times
    powers of that variable, possibly fractional.
    """
    data = chambers(T)
    idx = data.ray_of(ray) if isinstance(ray, str) else ray
    rho = data.rays[idx].direction
    cols = T.columns()
    before = [n for r in data.rays[:idx] for n in r.names]
    after = [n for r in data.rays[idx + 1:] for n in r.names]
    beyond = None
    if not before or not after:
        beyond = []
    elif len(before) == 1:
        beyond = before
    elif len(after) == 1:
        beyond = after
    if beyond == []:
        on = data.rays[idx].names
        gens = []
        for n in on:
            e = tuple((m, Fraction(1)) for m in [n])
            gens.append(MonoGen(e, _degree_on_ray(T, rho, [1 if x == n else 0 for x in T.names])))
        weights = tuple(int(g.degree) for g in gens)
        target = "P(" + ", ".join(str(w) for w in weights) + ")"
        return MonomialMap(tuple(gens), target, weights)
    if beyond is not None:
        e = beyond[0]
        ce = T.column(e)
        det = cross(rho, ce)
        gens = []
        for n, c in zip(T.names, cols):
            if n == e:
                continue
            alpha = cross(c, ce) / det
            beta = cross(rho, c) / det
            exps = []
            if beta:
                exps.append((e, Fraction(int((-beta).numerator), int((-beta).denominator))))
            exps.append((n, Fraction(1)))
            gens.append((Fraction(int(alpha.numerator), int(alpha.denominator)), T.names.index(n), tuple(exps)))
        L = math.lcm(*(g[0].denominator for g in gens))
        gens.sort(key=lambda g: (g[0], g[1]))
        out = tuple(MonoGen(ex, a) for a, _, ex in gens)
        weights = tuple(int(a * L) for a, _, _ in gens)
        target = "P(" + ", ".join(str(w) for w in weights) + ")"
        return MonomialMap(out, target, weights, abs(int(det)) if det.denominator == 1 else None, e)
    vecs = section_generators(T, rho, bound)
    zero_first = sorted(
        (v for v in vecs if sum(v) == 1), key=lambda v: v.index(1)
    )
    mixed = sorted((v for v in vecs if sum(v) > 1), reverse=True)
    gens = []
    for v in zero_first + mixed:
        ex = tuple((n, Fraction(e)) for n, e in zip(T.names, v) if e)
        gens.append(MonoGen(ex, _degree_on_ray(T, rho, v)))
    degrees = ", ".join(str(g.degree) for g in gens)
    target = "Proj C[" + ", ".join(g.render() for g in gens) + f"] in P({degrees})"
    return MonomialMap(tuple(gens), target)


# the link


@dataclass(frozen=True)
class LinkStep:
    kind: str
    ray: tuple[str, ...]
    wall_signature: tuple[tuple[str, int], ...]
    monomial_map: MonomialMap
    target: str
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "ray": list(self.ray),
            "signature": {n: w for n, w in self.wall_signature},
            "monomial_map": self.monomial_map.as_dict(),
            "target": self.target,
            "note": self.note,
        }

    def transcript(self) -> str:
        sig = ", ".join(f"{n}:{w}" for n, w in self.wall_signature)
        head = f"{self.kind} at ray of {', '.join(self.ray)}"
        lines = [head, f"  signature ({sig})", f"  map [{', '.join(self.monomial_map.rendered())}]",
                 f"  target {self.target}"]
        if self.note:
            lines.append(f"  {self.note}")
        return "\n".join(lines)


def wall_signature(T: Rank2Toric, rho: Sequence) -> tuple[tuple[str, int], ...]:
    """Weights of all variables on the wall ray, positive on the clockwise side."""
    p = primitive(rho)
    out = []
    for n, c in zip(T.names, T.columns()):
        v = -cross(p, c)
        out.append((n, int(v) if v.denominator == 1 else v))
    return tuple(out)


def _wall_label(rho, anti: Vec) -> str:
    c = cross(rho, anti)
    if c == 0:
        return "flop wall (anticanonical class on the wall)"
    return "flip wall" if c < 0 else "antiflip wall"


def walk_link(
    T: Rank2Toric,
    anticanonical: Vec | None = None,
    bound: int = DEFAULT_BOUND,
) -> list[LinkStep]:
    """Ambient 2-ray game across the movable cone.

    ``anticanonical`` is the class used to label interior walls; it
    defaults to the toric one (sum of the columns).  Pass the class of a
    subvariety (columns minus the degrees of its equations) to label the
    restricted walls.
    """
    data = chambers(T)
    lo, hi = data.movable
    if lo >= hi:
        raise ToricError("the movable cone has empty interior")
    anti = anticanonical or T.anticanonical()
    steps = []
    for idx in range(lo, hi + 1):
        ray = data.rays[idx]
        mm = ample_model(T, idx, bound)
        sig = wall_signature(T, ray.direction)
        if idx in (lo, hi):
            side = data.rays[:idx] if idx == lo else data.rays[idx + 1:]
            beyond = [n for r in side for n in r.names]
            if beyond:
                steps.append(LinkStep("divisorial-contraction", ray.names, sig, mm, mm.target,
                                      f"contracts V({beyond[0]})"))
            else:
                steps.append(LinkStep("fibration", ray.names, sig, mm, mm.target))
        else:
            steps.append(LinkStep("wall-crossing", ray.names, sig, mm, mm.target,
                                  _wall_label(ray.direction, anti)))
    return steps


def variety_anticanonical(T: Rank2Toric, degrees: Sequence[Vec]) -> Vec:
    a0, a1 = T.anticanonical()
    for d in degrees:
        a0 -= rat(d[0])
        a1 -= rat(d[1])
    return a0, a1


def bidegree(T: Rank2Toric, p: Poly, extra: Mapping[str, Vec] | None = None) -> Vec | None:
    """Bidegree of a bihomogeneous polynomial in the Cox ring, or None when inhomogeneous.

    ``extra`` gives bidegrees of coefficient symbols; other variables of
    the table outside ``T.names`` count as degree zero constants.
    """
    cols = {n: T.column(n) for n in T.names}
    cols.update({n: (rat(v[0]), rat(v[1])) for n, v in (extra or {}).items()})
    seen = None
    for m, _ in p.items():
        d0 = d1 = mpq(0)
        for n, e in zip(p.table.names, m):
            if e and n in cols:
                d0 += e * cols[n][0]
                d1 += e * cols[n][1]
        if seen is None:
            seen = (d0, d1)
        elif seen != (d0, d1):
            return None
    return seen


# restriction bookkeeping


@dataclass(frozen=True)
class StrictTransform:
    generators: tuple[Poly, ...]
    orders: tuple[int, ...]

    def as_dict(self) -> dict:
        return {"generators": [g.render() for g in self.generators], "orders": list(self.orders)}


def pullback_weights(T: Rank2Toric, ray: str, extra: Mapping[str, int] | None = None) -> dict[str, int]:
    """Exponent of the exceptional variable acquired by each variable under the ample model at ``ray``.

    ``extra`` assigns exceptional weights to coefficient placeholders.
    """
    mm = ample_model(T, ray)
    if mm.aux is None:
        raise ToricError("the ample model at this ray is not a contraction of one divisor")
    out = {}
    for g in mm.generators:
        names = dict(g.exponents)
        var = next(n for n in names if n != mm.aux)
        e = names.get(mm.aux, Fraction(0))
        if e.denominator != 1:
            raise ToricError("pullback with fractional exponents has no polynomial form")
        out[var] = int(e)
    out.update(extra or {})
    return out


def strict_transform(
    T: Rank2Toric,
    gens: Sequence[Poly],
    exceptional: str,
    ray: str | None = None,
    extra_weights: Mapping[str, int] | None = None,
) -> StrictTransform:
    """Pull each generator back along the ample model and divide by the exceptional variable."""
    from .singularity import pullback_chart

    if ray is None:
        data = chambers(T)
        ray = data.rays[data.movable[0]].names[0]
    w = pullback_weights(T, ray, extra_weights)
    if exceptional in w:
        raise ToricError("the exceptional variable cannot carry a pullback weight")
    outs, orders = [], []
    for g in gens:
        p, k = pullback_chart(g, w, exceptional)
        outs.append(p)
        orders.append(k)
    return StrictTransform(tuple(outs), tuple(orders))


@dataclass(frozen=True)
class WallRestriction:
    equations: tuple[Poly, ...]
    zero_variables: tuple[str, ...]
    killed: tuple[str, ...]
    count: int | None
    detail: str

    def as_dict(self) -> dict:
        return {
            "equations": [e.render() for e in self.equations],
            "wall_variables": list(self.zero_variables),
            "set_to_zero": list(self.killed),
            "points": self.count,
            "detail": self.detail,
        }


def restrict_wall(
    T: Rank2Toric,
    gens: Sequence[Poly],
    wall: str | Sequence,
    side: str = "negative",
    specialize: Mapping[str, Poly] | None = None,
) -> WallRestriction:
    """Equations of the contracted locus V(side variables) on the wall quotient.

    ``wall`` is a variable on the wall ray or a direction vector.  The
    variables on ``side`` of the signature are set to zero; the wall
    quotient is the weighted projective space of the zero-weight
    variables.  ``specialize`` substitutes concrete forms for coefficient
    placeholders before counting points.
    """
    from .families import count_points

    rho = T.column(wall) if isinstance(wall, str) else tuple(wall)
    sig = dict(wall_signature(T, rho))
    killed = tuple(n for n in T.names if (sig[n] < 0 if side == "negative" else sig[n] > 0))
    other = tuple(n for n in T.names if (sig[n] > 0 if side == "negative" else sig[n] < 0))
    zero = tuple(n for n in T.names if sig[n] == 0)
    eqs = []
    for g in gens:
        h = g.evaluate({n: 0 for n in killed})
        if specialize:
            h = h.substitute(specialize)
        if h:
            eqs.append(h)
    if not eqs:
        return WallRestriction((), zero, killed, None, "zero ideal: the whole wall quotient")
    left = sorted({v for e in eqs for v in e.variables() if v in other})
    if left:
        return WallRestriction(tuple(eqs), zero, killed, None,
                               f"equations still involve {left}; elimination needed")
    count, detail = None, "point count needs two equations in a weighted plane"
    if len(eqs) == 2 and len(zero) == 3:
        free = {v for e in eqs for v in e.variables()}
        if free <= set(zero):
            weights = {n: _degree_on_ray(T, primitive(rho), [1 if x == n else 0 for x in T.names]) for n in zero}
            ones = [n for n in zero if weights[n] == 1]
            heavy = [n for n in zero if weights[n] != 1]
            if len(ones) == 2 and len(heavy) == 1:
                count, detail = count_points(eqs[0], eqs[1], heavy[0], (ones[0], ones[1]))
            else:
                detail = "wall quotient is not of the form P(1, 1, k)"
        else:
            detail = "equations involve symbolic coefficients; specialize them to count points"
    return WallRestriction(tuple(eqs), zero, killed, count, detail)


def parse_link_file(text: str) -> tuple[Rank2Toric, dict[str, str]]:
    """Read a link definition.

    Format (one item per line, ``#`` comments)::

        names: u x y z alpha xi t
        row: 0 1 1 1 3 5 1
        row: -1 0 1 1 3 6 2
        wall: 2
        gen: <polynomial>            (optional, repeatable)
        exceptional: u               (optional)
        weight: C_5 = 5              (optional placeholder pullback weight)
        table: extra names           (optional symbols used by generators)
    """
    names: list[str] = []
    rows: list[list] = []
    wall = None
    meta: dict[str, list[str]] = {"gen": [], "weight": [], "table": [], "exceptional": [], "basis": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ToricError(f"line {lineno}: expected 'key: value'")
        key, val = (s.strip() for s in line.split(":", 1))
        if key == "names":
            names = val.split()
        elif key == "row":
            rows.append([Fraction(x) for x in val.split()])
        elif key == "wall":
            wall = int(val)
        elif key in meta:
            meta[key].append(val)
        else:
            raise ToricError(f"line {lineno}: unknown key {key!r}")
    if len(rows) != 2 or wall is None or not names:
        raise ToricError("a link file needs names, two rows and a wall index")
    T = Rank2Toric.from_rows(names, [[mpq(x.numerator, x.denominator) for x in r] for r in rows], wall)
    return T, meta
