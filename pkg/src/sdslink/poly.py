"""Exact sparse multivariate polynomials over the rationals.

A :class:`Poly` is a finite map from exponent tuples to nonzero rational
coefficients, tied to a :class:`VarTable` that names the variables and
carries their default weights.  Values are immutable; every operation
returns a new polynomial.

Rendering lists terms in graded reverse lexicographic order (largest
first), so two equal polynomials always print identically.
"""

from __future__ import annotations

import math
import operator
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence, Union

from gmpy2 import mpq

Rat = type(mpq())
Weighting = Union[Sequence[int], Mapping[str, int], None]
INF = math.inf

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class PolyError(ValueError):
    """Raised for malformed polynomial input or incompatible operands."""


class ParseError(PolyError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


def rat(value) -> Rat:
    """Coerce ints, strings like ``"3/4"``, Fractions and mpq to an exact rational."""
    if isinstance(value, float):
        raise PolyError("floating-point coefficients are not allowed")
    return mpq(value)


@dataclass(frozen=True)
class VarTable:
    """Ordered, named variables with a default positive weight each."""

    names: tuple[str, ...]
    weights: tuple[int, ...] = ()
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(set(names)) != len(names):
            raise PolyError(f"duplicate variable names in {names}")
        for n in names:
            if not _IDENT.match(n):
                raise PolyError(f"invalid identifier {n!r}")
        weights = tuple(self.weights) if self.weights else (1,) * len(names)
        if len(weights) != len(names):
            raise PolyError("weights must align with names")
        if any(int(w) < 1 for w in weights):
            raise PolyError("variable weights must be >= 1")
        object.__setattr__(self, "weights", tuple(int(w) for w in weights))
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @classmethod
    def of(cls, names: str | Iterable[str], weights: Sequence[int] = ()) -> "VarTable":
        if isinstance(names, str):
            names = names.replace(",", " ").split()
        return cls(tuple(names), tuple(weights))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PolyError(f"unknown variable {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def extend(self, names: Iterable[str], weights: Sequence[int] = ()) -> "VarTable":
        """Append new variables (existing names are skipped)."""
        new = [n for n in names if n not in self._index]
        w = list(weights) if weights else [1] * len(new)
        return VarTable(self.names + tuple(new), self.weights + tuple(w[: len(new)]))

    def weight_vector(self, w: Weighting = None) -> tuple[int, ...]:
        """Resolve a weighting to a tuple aligned with the table.

        Explicit weightings may contain zeros (degree-zero parameters);
        variables missing from a mapping get weight 0.
        """
        if w is None:
            return self.weights
        if isinstance(w, Mapping):
            for k in w:
                self.index(k)
            vec = tuple(int(w.get(n, 0)) for n in self.names)
        else:
            vec = tuple(int(x) for x in w)
            if len(vec) != len(self.names):
                raise PolyError("weighting length does not match the variable table")
        if any(x < 0 for x in vec):
            raise PolyError("weights must be non-negative")
        return vec


def _grevlex_key(exps: tuple[int, ...]):
    return (sum(exps), tuple(-e for e in reversed(exps)))


class Poly:
    """Sparse polynomial with exact rational coefficients."""

    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VarTable, terms: Mapping[tuple[int, ...], object] | None = None):
        self.table = table
        clean: dict[tuple[int, ...], Rat] = {}
        if terms:
            n = len(table)
            for m, c in terms.items():
                c = rat(c)
                if c:
                    if len(m) != n:
                        raise PolyError("monomial length does not match the variable table")
                    clean[tuple(m)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table: VarTable, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.table = table
        p._terms = terms
        p._hash = None
        return p

    # construction
    @classmethod
    def zero(cls, table: VarTable) -> "Poly":
        return cls._raw(table, {})

    @classmethod
    def const(cls, table: VarTable, c) -> "Poly":
        c = rat(c)
        return cls._raw(table, {(0,) * len(table): c} if c else {})

    @classmethod
    def var(cls, table: VarTable, name: str, power: int = 1) -> "Poly":
        e = [0] * len(table)
        e[table.index(name)] = power
        return cls._raw(table, {tuple(e): mpq(1)})

    @classmethod
    def monomial(cls, table: VarTable, exps: Mapping[str, int], coeff=1) -> "Poly":
        e = [0] * len(table)
        for k, v in exps.items():
            e[table.index(k)] = int(v)
        return cls(table, {tuple(e): coeff})

    # basic access
    @property
    def terms(self) -> dict[tuple[int, ...], Rat]:
        return dict(self._terms)

    def items(self) -> list[tuple[tuple[int, ...], Rat]]:
        """Terms in canonical (descending graded reverse lexicographic) order."""
        return sorted(self._terms.items(), key=lambda t: _grevlex_key(t[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], Rat]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Rat:
        return self._terms.get((0,) * len(self.table), mpq(0))

    def variables(self) -> list[str]:
        used = [False] * len(self.table)
        for m in self._terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return [n for n, u in zip(self.table.names, used) if u]

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        if var is None:
            return max(sum(m) for m in self._terms)
        i = self.table.index(var)
        return max(m[i] for m in self._terms)

    def leading_term(self) -> tuple[tuple[int, ...], Rat]:
        if not self._terms:
            raise PolyError("zero polynomial has no leading term")
        m = max(self._terms, key=_grevlex_key)
        return m, self._terms[m]

    # comparison
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.table == other.table and self._terms == other._terms
        if isinstance(other, (int, Rat)):
            return self == Poly.const(self.table, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.table.names, frozenset(self._terms.items())))
        return self._hash

    # arithmetic
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.table != self.table:
                raise PolyError("polynomials live over different variable tables")
            return other
        if isinstance(other, (int, Rat)) or type(other).__name__ == "Fraction":
            return Poly.const(self.table, other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Rat)):
            c = mpq(other)
            if not c:
                return Poly.zero(self.table)
            return Poly._raw(self.table, {m: v * c for m, v in self._terms.items()})
        other = self._coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        add = operator.add
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple(map(add, ma, mb))
                s = get(m)
                out[m] = ca * cb if s is None else s + ca * cb
        return Poly._raw(self.table, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def mul_truncated(self, other: "Poly", n: int, w: Weighting = None) -> "Poly":
        """Product with every term of weighted degree above ``n`` discarded."""
        other = self._coerce(other)
        vec = self.table.weight_vector(w)

        def graded(terms):
            out = [(sum(map(operator.mul, m, vec)), m, c) for m, c in terms.items()]
            out.sort(key=lambda t: t[0])
            return out

        a, b = graded(self._terms), graded(other._terms)
        add = operator.add
        out: dict = {}
        for da, ma, ca in a:
            if b and da + b[0][0] > n:
                break
            for db, mb, cb in b:
                if da + db > n:
                    break
                m = tuple(map(add, ma, mb))
                s = out.get(m)
                out[m] = ca * cb if s is None else s + ca * cb
        return Poly._raw(self.table, {m: c for m, c in out.items() if c})

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return divide_exact(self, other)
        c = mpq(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise PolyError("exponent must be a non-negative integer")
        result = Poly.const(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # grading
    def weight(self, w: Weighting = None) -> float | int:
        """Least weighted degree of a term; ``inf`` for zero."""
        if not self._terms:
            return INF
        vec = self.table.weight_vector(w)
        return min(sum(map(operator.mul, m, vec)) for m in self._terms)

    def multiplicity(self) -> float | int:
        return self.weight((1,) * len(self.table))

    def weighted_degree(self, w: Weighting = None) -> int:
        if not self._terms:
            return -1
        vec = self.table.weight_vector(w)
        return max(sum(map(operator.mul, m, vec)) for m in self._terms)

    def graded_part(self, w: Weighting, d: int) -> "Poly":
        vec = self.table.weight_vector(w)
        return Poly._raw(
            self.table,
            {m: c for m, c in self._terms.items() if sum(map(operator.mul, m, vec)) == d},
        )

    def graded_parts(self, w: Weighting = None) -> dict[int, "Poly"]:
        vec = self.table.weight_vector(w)
        parts: dict[int, dict] = {}
        for m, c in self._terms.items():
            parts.setdefault(sum(map(operator.mul, m, vec)), {})[m] = c
        return {d: Poly._raw(self.table, t) for d, t in sorted(parts.items())}

    def truncate(self, n: int, w: Weighting = None) -> "Poly":
        """Drop every term of weighted degree above ``n``."""
        vec = self.table.weight_vector(w)
        return Poly._raw(
            self.table,
            {m: c for m, c in self._terms.items() if sum(map(operator.mul, m, vec)) <= n},
        )

    def is_homogeneous(self, w: Weighting = None) -> bool:
        return len(self.graded_parts(w)) <= 1

    def coefficient(self, var: str, i: int) -> "Poly":
        """Coefficient of ``var**i`` as a polynomial free of ``var``."""
        k = self.table.index(var)
        out = {}
        for m, c in self._terms.items():
            if m[k] == i:
                out[m[:k] + (0,) + m[k + 1:]] = c
        return Poly._raw(self.table, out)

    def coeff_slice(self, var: str, i: int, d: int, w: Weighting = None) -> "Poly":
        """The degree-``d`` part of the coefficient of ``var**i`` (written f_{i,d})."""
        return self.coefficient(var, i).graded_part(w, d)

    # calculus and evaluation
    def diff(self, var: str) -> "Poly":
        k = self.table.index(var)
        out = {}
        for m, c in self._terms.items():
            e = m[k]
            if e:
                out[m[:k] + (e - 1,) + m[k + 1:]] = c * e
        return Poly._raw(self.table, out)

    def substitute(self, assignments: Mapping[str, "Poly | int | Rat"]) -> "Poly":
        """Simultaneous substitution of variables by polynomials."""
        if not assignments:
            return self
        images = {}
        target = None
        for name, img in assignments.items():
            idx = self.table.index(name)
            if isinstance(img, Poly):
                if target is None:
                    target = img.table
                elif img.table != target:
                    raise PolyError("substitution images live over different tables")
            images[idx] = img
        target = target or self.table
        if target != self.table:
            for n in self.table.names:
                if n not in target:
                    raise PolyError(f"target table lacks variable {n!r}")
        images = {i: (v if isinstance(v, Poly) else Poly.const(target, v)) for i, v in images.items()}
        keep = [i for i in range(len(self.table)) if i not in images]
        tidx = [target.index(self.table.names[i]) for i in keep]
        power_cache: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            key = (i, e)
            if key not in power_cache:
                power_cache[key] = images[i] if e == 1 else power(i, e - 1) * images[i]
            return power_cache[key]

        # group terms by their exponents in the substituted variables
        groups: dict[tuple, dict] = {}
        sub_idx = sorted(images)
        n = len(target)
        for m, c in self._terms.items():
            key = tuple(m[i] for i in sub_idx)
            e = [0] * n
            for i, j in zip(keep, tidx):
                e[j] = m[i]
            groups.setdefault(key, {})[tuple(e)] = c
        result = Poly.zero(target)
        for key, rest in groups.items():
            factor = Poly.const(target, 1)
            for i, e in zip(sub_idx, key):
                if e:
                    factor = factor * power(i, e)
            result = result + factor * Poly._raw(target, rest)
        return result

    def evaluate(self, point: Mapping[str, object]) -> "Poly":
        """Substitute rational values; returns a (possibly constant) Poly."""
        return self.substitute({k: Poly.const(self.table, v) for k, v in point.items()})

    def value(self, point: Mapping[str, object]) -> Rat:
        p = self.evaluate(point)
        if not p.is_constant():
            raise PolyError(f"variables {p.variables()} left unassigned")
        return p.constant_term()

    def with_table(self, table: VarTable) -> "Poly":
        """Re-express over a table containing every variable that occurs."""
        if table == self.table:
            return self
        used = self.variables()
        pos = [(self.table.index(n), table.index(n)) for n in used]
        out = {}
        n = len(table)
        for m, c in self._terms.items():
            e = [0] * n
            for i, j in pos:
                e[j] = m[i]
            out[tuple(e)] = c
        return Poly._raw(table, out)

    def linear_change(self, names: Sequence[str], M: Sequence[Sequence[object]]) -> "Poly":
        """Replace the variables ``names`` by ``M`` applied to them."""
        k = len(names)
        if len(M) != k or any(len(row) != k for row in M):
            raise PolyError("matrix size must match the number of variables")
        if determinant([[rat(x) for x in row] for row in M]) == 0:
            raise PolyError("linear change matrix is singular")
        vs = [Poly.var(self.table, n) for n in names]
        images = {}
        for i, n in enumerate(names):
            img = Poly.zero(self.table)
            for j in range(k):
                if M[i][j]:
                    img = img + vs[j] * rat(M[i][j])
            images[n] = img
        return self.substitute(images)

    # output
    def render(self) -> str:
        return render(self)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Poly({render(self)!r})"


def _fmt_rat(c: Rat) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def render(p: Poly) -> str:
    """Deterministic text form: canonical order, explicit ``*``, no unary ``+``."""
    if not p._terms:
        return "0"
    names = p.table.names
    pieces = []
    for m, c in p.items():
        factors = []
        for n, e in zip(names, m):
            if e == 1:
                factors.append(n)
            elif e:
                factors.append(f"{n}^{e}")
        mag = abs(c)
        if not factors:
            body = _fmt_rat(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = _fmt_rat(mag) + "*" + "*".join(factors)
        pieces.append((c < 0, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    raw = text.encode()
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", len(text[:pos].encode()))
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        offset = len(text[:start].encode())
        if m.group(1):
            tokens.append(("num", m.group(1), offset))
        elif m.group(2):
            tokens.append(("id", m.group(2), offset))
        else:
            op = m.group(3)
            tokens.append(("op", "^" if op == "**" else op, offset))
        pos = m.end()
    tokens.append(("end", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, text: str, table: VarTable):
        self.tokens = _tokenize(text)
        self.i = 0
        self.table = table

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, off = self.take()
        if val != value or kind != "op":
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", off)

    def expr(self) -> Poly:
        kind, val, _ = self.peek()
        sign = 1
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term() * sign
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in ("+", "-"):
                self.take()
                t = self.term()
                result = result + t if val == "+" else result - t
            else:
                return result

    def term(self) -> Poly:
        result = self.factor()
        while True:
            kind, val, off = self.peek()
            if kind == "op" and val == "*":
                self.take()
                result = result * self.factor()
            elif kind == "op" and val == "/":
                self.take()
                k2, v2, o2 = self.take()
                if k2 != "num":
                    raise ParseError("division is only allowed by an integer literal", o2)
                if int(v2) == 0:
                    raise ParseError("division by zero", o2)
                result = result * mpq(1, int(v2))
            else:
                return result

    def factor(self) -> Poly:
        kind, val, off = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        kind, val, off = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2, o2 = self.take()
            if k2 != "num":
                raise ParseError("exponent must be a non-negative integer literal", o2)
            base = base ** int(v2)
        return base

    def atom(self) -> Poly:
        kind, val, off = self.take()
        if kind == "num":
            return Poly.const(self.table, int(val))
        if kind == "id":
            if val not in self.table:
                raise ParseError(f"unknown identifier {val!r}", off)
            return Poly.var(self.table, val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", off)


def parse(text: str, table: VarTable) -> Poly:
    """Parse the polynomial grammar (``+ - * / ^``, parentheses, rationals)."""
    p = _Parser(text, table)
    result = p.expr()
    kind, val, off = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing {val!r}", off)
    return result


# exact division


def divide(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Multivariate division by a single divisor; returns (quotient, remainder).

    The remainder is zero exactly when ``q`` divides ``p``, since one
    polynomial is always a Groebner basis of the ideal it generates.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.table != q.table:
        raise PolyError("polynomials live over different variable tables")
    lm, lc = q.leading_term()
    rest = [(m, c) for m, c in q._terms.items() if m != lm]
    work = dict(p._terms)
    quot: dict = {}
    rem: dict = {}
    sub = operator.sub
    add = operator.add
    while work:
        m = max(work, key=_grevlex_key)
        c = work.pop(m)
        if all(a >= b for a, b in zip(m, lm)):
            qm = tuple(map(sub, m, lm))
            qc = c / lc
            quot[qm] = qc
            for rm, rc in rest:
                t = tuple(map(add, qm, rm))
                v = work.get(t, 0) - qc * rc
                if v:
                    work[t] = v
                else:
                    work.pop(t, None)
        else:
            rem[m] = c
    return Poly._raw(p.table, quot), Poly._raw(p.table, rem)


def divide_exact(p: Poly, q: Poly) -> Poly:
    quot, rem = divide(p, q)
    if rem:
        raise PolyError(f"{render(q)} does not divide {render(p)}")
    return quot


def determinant(M: list[list[Rat]]) -> Rat:
    """Determinant of a rational square matrix by Gaussian elimination."""
    A = [[mpq(x) for x in row] for row in M]
    n = len(A)
    det = mpq(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            return mpq(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for r in range(col + 1, n):
            f = A[r][col] / A[col][col]
            if f:
                for k in range(col, n):
                    A[r][k] -= f * A[col][k]
    return det


def invert(M: Sequence[Sequence[object]]) -> list[list[Rat]]:
    """Inverse of a rational square matrix; raises on singular input."""
    n = len(M)
    A = [[rat(x) for x in row] + [mpq(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col]), None)
        if piv is None:
            raise PolyError("matrix is singular")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A]


def dehomogenize(p: Poly, var: str) -> Poly:
    """Affine chart ``var = 1``."""
    return p.evaluate({var: 1})


def homogenize(p: Poly, var: str, degree: int | None = None, w: Weighting = None) -> Poly:
    """Multiply each term by a power of ``var`` (weight 1) up to ``degree``."""
    vec = p.table.weight_vector(w)
    k = p.table.index(var)
    if degree is None:
        degree = p.weighted_degree(w)
    out = {}
    for m, c in p._terms.items():
        d = sum(map(operator.mul, m, vec))
        if d > degree:
            raise PolyError("term above the homogenizing degree")
        e = list(m)
        e[k] += degree - d
        out[tuple(e)] = c
    return Poly._raw(p.table, out)
