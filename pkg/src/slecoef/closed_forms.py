"""Explicit solutions ((1-w)(1-wbar))^a (1-w wbar)^b expanded exactly."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import BiSeries, as_rational, binom_general, biseries_mul, biseries_pow, render
from .errors import DomainError, UsageError
from .solver.two_point import EXACT, MomentMatrix
from .stencil.params import INTERIOR, Brownian, Params


@dataclass(frozen=True)
class ClosedFormSpec:
    """Exponent ``a`` on (1-w) and (1-wbar), ``b`` on (1 - w wbar)."""

    a: Fraction
    b: Fraction
    q: Fraction
    kappa: Fraction

    @classmethod
    def family(cls, kappa) -> "ClosedFormSpec":
        kappa = as_rational(kappa)
        if kappa <= 0:
            raise DomainError("the explicit family needs kappa > 0")
        return cls(
            a=(6 + kappa) / (2 * kappa),
            b=-(6 + kappa) ** 2 / (8 * kappa),
            q=(2 + kappa) * (6 + kappa) / (8 * kappa),
            kappa=kappa,
        )


# Written out independently of ``family`` so a slip in the family algebra
# cannot hide behind the two special cases.
KAPPA6 = ClosedFormSpec(a=Fraction(1), b=Fraction(-3), q=Fraction(2), kappa=Fraction(6))
KAPPA2 = ClosedFormSpec(a=Fraction(2), b=Fraction(-4), q=Fraction(2), kappa=Fraction(2))


def closed_form_series(spec: ClosedFormSpec, nmax: int) -> BiSeries:
    """(1-w)^a (1-wbar)^a (1-w wbar)^b truncated at degree ``nmax`` per variable."""
    one_w = BiSeries.from_terms({(0, 0): 1, (1, 0): -1}, nmax)
    one_wb = BiSeries.from_terms({(0, 0): 1, (0, 1): -1}, nmax)
    one_ww = BiSeries.from_terms({(0, 0): 1, (1, 1): -1}, nmax)
    out = biseries_mul(biseries_pow(one_w, spec.a), biseries_pow(one_wb, spec.a))
    return biseries_mul(out, biseries_pow(one_ww, spec.b))


def expand_closed_form(spec: ClosedFormSpec, nmax: int) -> MomentMatrix:
    """rho_{ij} = [w^(i-1) wbar^(j-1)] / (i j) for 1 <= i, j <= nmax."""
    if spec.kappa <= 0:
        raise DomainError("closed forms need kappa > 0")
    series = closed_form_series(spec, nmax - 1)
    rows = [[series[i - 1, j - 1] / (i * j) for j in range(1, nmax + 1)] for i in range(1, nmax + 1)]
    params = Params(spec.q, Brownian(spec.kappa), INTERIOR)
    return MomentMatrix(params, nmax, EXACT, rows, source="closed-form")


def closed_form_diagonal(spec: ClosedFormSpec, nmax: int) -> list[Fraction]:
    """Only the diagonal rho_{ii}, i = 1..nmax, in O(nmax^2) operations."""
    ca = [Fraction(1)]
    cb = [Fraction(1)]
    for k in range(1, nmax):
        # coefficients of (1-x)^a: (-1)^k binom(a, k), by the ratio recurrence
        ca.append(-ca[-1] * (spec.a - (k - 1)) / k)
        cb.append(-cb[-1] * (spec.b - (k - 1)) / k)
    sq = [c * c for c in ca]
    out = []
    for p in range(nmax):
        total = sum((cb[t] * sq[p - t] for t in range(p + 1)), Fraction(0))
        out.append(total / ((p + 1) * (p + 1)))
    return out


@dataclass(frozen=True)
class Difference:
    i: int
    j: int
    lhs: object
    rhs: object

    def to_json(self) -> dict:
        fmt = lambda v: render(v) if isinstance(v, Fraction) else str(v)
        return {"i": self.i, "j": self.j, "lhs": fmt(self.lhs), "rhs": fmt(self.rhs)}


class Report(list):
    """Differing entries in row-major order; empty means exact equality."""

    def to_json(self) -> list:
        return [d.to_json() for d in self]


def compare(a: MomentMatrix, b: MomentMatrix) -> Report:
    if a.mode != b.mode or a.nmax != b.nmax:
        raise UsageError(
            f"incompatible shapes: {a.mode}/{a.nmax} vs {b.mode}/{b.nmax}"
        )
    report = Report()
    for i in a.indices():
        for j in a.indices():
            x, y = a[i, j], b[i, j]
            if x != y:
                report.append(Difference(i, j, x, y))
    return report


__all__ = [
    "KAPPA2",
    "KAPPA6",
    "ClosedFormSpec",
    "Difference",
    "Report",
    "binom_general",
    "closed_form_diagonal",
    "closed_form_series",
    "compare",
    "expand_closed_form",
]
