"""Exact scalars, generalized binomials, truncated bivariate series, and a
configurable-precision float used by the asymptotic backend.

``Rational`` is :class:`fractions.Fraction`: it is already arbitrary
precision, always reduced, and keeps a positive denominator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from numbers import Rational as _RationalABC
from typing import Iterator, Mapping

import gmpy2

from .errors import DomainError, ParseError, UsageError

Rational = Fraction

DEFAULT_PRECISION = 128

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)(?:/([+-]?\d+))?\s*")


def rational_parse(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/r"`` into a reduced rational.

    Decimal and exponent notation are rejected on purpose: every parameter
    must be given exactly.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    m = _RATIONAL_RE.fullmatch(text)
    if m is None:
        raise ParseError(f"malformed rational {text!r}; expected 'p' or 'p/r'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def render(x) -> str:
    """Render a rational as ``"p/r"``, or ``"p"`` when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/r"`` strings; refuse floats."""
    if isinstance(x, str):
        return rational_parse(x)
    if isinstance(x, bool):
        raise UsageError("booleans are not rationals")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise UsageError(f"expected an exact rational, got {x!r}")


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Square root of a non-negative rational if it is itself rational."""
    x = Fraction(x)
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def binom_general(a, k: int) -> Fraction:
    """Generalized binomial coefficient a(a-1)...(a-k+1)/k!."""
    if k < 0:
        raise UsageError("binomial index must be non-negative")
    a = Fraction(a)
    out = Fraction(1)
    for t in range(k):
        out = out * (a - t) / (t + 1)
    return out


# ---------------------------------------------------------------------------
# BigFloat
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def mpfr_context(precision: int):
    """Shared gmpy2 context at the given mantissa precision."""
    return gmpy2.context(precision=precision)


def to_mpfr(x, precision: int):
    if isinstance(x, BigFloat):
        x = x.value
    elif isinstance(x, Fraction):
        x = gmpy2.mpq(x.numerator, x.denominator)
    return gmpy2.mpfr(x, precision)


class BigFloat:
    """Binary floating-point scalar at a fixed mantissa precision.

    Thin wrapper over MPFR (via gmpy2): every operation is correctly rounded
    at ``precision`` bits, the larger of the two operands' precisions.
    """

    __slots__ = ("value", "precision")

    def __init__(self, value, precision: int = DEFAULT_PRECISION):
        if precision < 53:
            raise DomainError(f"precision must be >= 53 bits, got {precision}")
        self.precision = int(precision)
        self.value = to_mpfr(value, self.precision)

    @classmethod
    def _wrap(cls, value, precision):
        obj = cls.__new__(cls)
        obj.value = value
        obj.precision = precision
        return obj

    def _binary(self, other, op, reverse=False):
        if isinstance(other, BigFloat):
            p = max(self.precision, other.precision)
            o = other.value
        elif isinstance(other, (int, Fraction)):
            p = self.precision
            o = to_mpfr(other, p) if isinstance(other, Fraction) else other
        else:
            return NotImplemented
        ctx = mpfr_context(p)
        a, b = (o, self.value) if reverse else (self.value, o)
        return BigFloat._wrap(getattr(ctx, op)(a, b), p)

    def __add__(self, other):
        return self._binary(other, "add")

    def __radd__(self, other):
        return self._binary(other, "add", reverse=True)

    def __sub__(self, other):
        return self._binary(other, "sub")

    def __rsub__(self, other):
        return self._binary(other, "sub", reverse=True)

    def __mul__(self, other):
        return self._binary(other, "mul")

    def __rmul__(self, other):
        return self._binary(other, "mul", reverse=True)

    def __truediv__(self, other):
        return self._binary(other, "div")

    def __rtruediv__(self, other):
        return self._binary(other, "div", reverse=True)

    def __neg__(self):
        return BigFloat._wrap(-self.value, self.precision)

    def __abs__(self):
        return BigFloat._wrap(abs(self.value), self.precision)

    def sqrt(self) -> "BigFloat":
        if self.value < 0:
            raise DomainError("square root of a negative BigFloat")
        return BigFloat._wrap(mpfr_context(self.precision).sqrt(self.value), self.precision)

    def _cmp_value(self, other):
        if isinstance(other, BigFloat):
            return other.value
        if isinstance(other, Fraction):
            return gmpy2.mpq(other.numerator, other.denominator)
        return other

    def __eq__(self, other):
        return self.value == self._cmp_value(other)

    def __lt__(self, other):
        return self.value < self._cmp_value(other)

    def __le__(self, other):
        return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        return self.value > self._cmp_value(other)

    def __ge__(self, other):
        return self.value >= self._cmp_value(other)

    def __hash__(self):
        return hash(self.value)

    def __bool__(self):
        return bool(self.value)

    def __float__(self):
        return float(self.value)

    def to_rational(self) -> Fraction:
        q = gmpy2.mpq(self.value)
        return Fraction(int(q.numerator), int(q.denominator))

    def __str__(self):
        digits = int(self.precision * 0.30103) + 2
        return format(self.value, f".{digits}g")

    def __repr__(self):
        return f"BigFloat('{self}', precision={self.precision})"


# ---------------------------------------------------------------------------
# BiSeries
# ---------------------------------------------------------------------------

_ZERO = Fraction(0)


@dataclass(frozen=True)
class BiSeries:
    """Dense truncated series in two variables ``w`` and ``wbar``.

    ``coeffs[i][j]`` is the coefficient of w**i * wbar**j for
    0 <= i, j <= nmax. Anything outside that square is zero.
    """

    nmax: int
    coeffs: tuple

    def __post_init__(self):
        n = self.nmax + 1
        if self.nmax < 0 or len(self.coeffs) != n or any(len(r) != n for r in self.coeffs):
            raise UsageError("coefficient table must be (nmax+1) x (nmax+1)")

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], object], nmax: int) -> "BiSeries":
        rows = [[_ZERO] * (nmax + 1) for _ in range(nmax + 1)]
        for (i, j), c in terms.items():
            if 0 <= i <= nmax and 0 <= j <= nmax:
                rows[i][j] += as_rational(c)
        return cls(nmax, tuple(tuple(r) for r in rows))

    @classmethod
    def constant(cls, c, nmax: int) -> "BiSeries":
        return cls.from_terms({(0, 0): c}, nmax)

    def __getitem__(self, key) -> Fraction:
        i, j = key
        if 0 <= i <= self.nmax and 0 <= j <= self.nmax:
            return self.coeffs[i][j]
        return _ZERO

    def nonzero(self) -> Iterator[tuple[int, int, Fraction]]:
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c:
                    yield i, j, c

    def _check(self, other: "BiSeries"):
        if not isinstance(other, BiSeries):
            raise UsageError("expected a BiSeries")
        if other.nmax != self.nmax:
            raise UsageError(f"truncation mismatch: {self.nmax} vs {other.nmax}")

    def __add__(self, other):
        self._check(other)
        return BiSeries(self.nmax, tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.coeffs, other.coeffs)
        ))

    def __neg__(self):
        return BiSeries(self.nmax, tuple(tuple(-a for a in r) for r in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "BiSeries":
        c = as_rational(c)
        return BiSeries(self.nmax, tuple(tuple(c * a for a in r) for r in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, BiSeries):
            return biseries_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__


def biseries_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    """Cauchy product truncated at ``nmax`` in each variable."""
    a._check(b)
    n = a.nmax
    out = [[_ZERO] * (n + 1) for _ in range(n + 1)]
    bc = b.coeffs
    for i, j, c in a.nonzero():
        for p in range(n + 1 - i):
            brow = bc[p]
            orow = out[i + p]
            for r in range(n + 1 - j):
                if brow[r]:
                    orow[j + r] += c * brow[r]
    return BiSeries(n, tuple(tuple(r) for r in out))


def biseries_pow(base: BiSeries, a) -> BiSeries:
    """``base**a`` for a series with constant term 1 and rational ``a``.

    Equal to the truncated binomial series sum_k binom(a, k) (base - 1)**k,
    but computed from the identity base * E(P) = a * P * E(base), with E the
    total-degree Euler operator, which costs one pass over the output times
    the number of nonzero terms of ``base``.
    """
    if base[0, 0] != 1:
        raise DomainError("biseries_pow needs a unit constant term")
    a = as_rational(a)
    n = base.nmax
    terms = [(x, y, c) for x, y, c in base.nonzero() if (x, y) != (0, 0)]
    out = [[_ZERO] * (n + 1) for _ in range(n + 1)]
    out[0][0] = Fraction(1)
    for t in range(1, 2 * n + 1):
        for p in range(max(0, t - n), min(t, n) + 1):
            r = t - p
            acc = _ZERO
            for x, y, c in terms:
                if x <= p and y <= r:
                    v = out[p - x][r - y]
                    if v:
                        acc += c * (a * (x + y) - (t - x - y)) * v
            out[p][r] = acc / t
    return BiSeries(n, tuple(tuple(row) for row in out))
