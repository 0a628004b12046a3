"""Mechanical translation of a Loewner-type second-order operator into the
recurrence stencil acting on series coefficients.

An operator is a sum of terms ``coef * N(x) / prod (x_v - 1)**p_v * E``
where ``x`` are the 2n variables (w_1..w_n, wbar_1..wbar_n), ``N`` is a
polynomial, ``p_v <= 2`` and ``E`` is a function of the Euler derivations
x_v d/dx_v. On a monomial x**e the Euler factor acts as multiplication by
E(e), so after clearing denominators by prod (x_v - 1)**2 the coefficient of
x**(index + shift) collects, for each monomial x**s of the cleared
numerator, E evaluated at the exponent of the shifted monomial. That is the
stencil entry for offset ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence, Union

from .params import EtaSequence, EXTERIOR, INTERIOR, MODES
from .poly import Poly
from ..arith import as_rational
from ..errors import CompileError, UsageError


@dataclass(frozen=True)
class EulerPoly:
    """Polynomial in the Euler derivations, stored over the exponents."""

    poly: Poly

    def __call__(self, exps):
        return self.poly(exps)


@dataclass(frozen=True)
class EtaOfDifference:
    """eta(sum_v weights[v] * x_v d/dx_v) for a symmetric exponent sequence."""

    eta: EtaSequence
    weights: tuple

    def __call__(self, exps):
        return self.eta[sum(w * x for w, x in zip(self.weights, exps))]


EulerFactor = Union[EulerPoly, EtaOfDifference]


@dataclass(frozen=True)
class Term:
    coefficient: Fraction
    numerator: Poly
    poles: tuple
    euler: EulerFactor


@dataclass(frozen=True)
class OperatorDescription:
    """Operator L together with the eigen-equation L[rho] = rhs * rho.

    ``exponent_shift`` maps a series index onto the exponent of its monomial:
    -1 for the interior expansion in w**(i-1), +1 for the exterior expansion
    written in u = 1/w, where it reads u**(i+1).
    """

    rank: int
    terms: tuple
    rhs: Fraction
    exponent_shift: int
    label: str = ""

    @property
    def nvars(self) -> int:
        return 2 * self.rank


class Stencil:
    """Compiled 3^(2n)-point recurrence table.

    ``coefficient(index, offset)`` is the weight of s_{index - offset} in the
    equation for ``index`` (both tuples of length 2n: w-indices then
    wbar-indices), where s = (prod of indices) * rho.
    """

    def __init__(self, rank: int, shift: int, polys: dict, etas: dict, label: str = ""):
        self.rank = rank
        self.shift = shift
        self.label = label
        self._polys = polys
        self._etas = etas
        self.offsets = tuple(sorted(set(polys) | set(etas)))
        self._compiled = {
            s: (tuple(polys[s].terms.items()) if s in polys else (), tuple(etas.get(s, ())))
            for s in self.offsets
        }

    def coefficient(self, index: Sequence[int], offset: Sequence[int]) -> Fraction:
        offset = tuple(offset)
        entry = self._compiled.get(offset)
        if entry is None:
            return Fraction(0)
        exps = [x - o + self.shift for x, o in zip(index, offset)]
        poly_terms, eta_terms = entry
        total = Fraction(0)
        for mono, c in poly_terms:
            m = 1
            for x, p in zip(exps, mono):
                if p:
                    m *= x ** p
            total += c * m
        for c, factor in eta_terms:
            total += c * factor(exps)
        return total

    def __call__(self, i, j, l, k) -> Fraction:
        as_t = lambda x: (x,) if isinstance(x, int) else tuple(x)
        return self.coefficient(as_t(i) + as_t(j), as_t(l) + as_t(k))

    def pivot_offset(self) -> tuple:
        return (0,) * (2 * self.rank)

    def __repr__(self):
        return f"Stencil(rank={self.rank}, offsets={len(self.offsets)}, label={self.label!r})"


def compile_stencil(op: OperatorDescription) -> Stencil:
    nv = op.nvars
    clear = [Poly.var(v, nv) - 1 for v in range(nv)]
    polys: dict[tuple, Poly] = {}
    etas: dict[tuple, list] = {}
    unit = Term(Fraction(-op.rhs), Poly.constant(1, nv), (0,) * nv,
                EulerPoly(Poly.constant(1, nv)))
    for term in tuple(op.terms) + (unit,):
        if len(term.poles) != nv:
            raise CompileError("pole vector has wrong arity")
        if any(p < 0 for p in term.poles):
            raise CompileError("negative pole order")
        if any(p > 2 for p in term.poles):
            raise CompileError(f"pole order {max(term.poles)} > 2 at x = 1 in {op.label or 'operator'}")
        cleared = term.numerator * term.coefficient
        for v, p in enumerate(term.poles):
            cleared = cleared * clear[v] ** (2 - p)
        for s, c in cleared.terms.items():
            if any(x > 2 for x in s):
                raise CompileError(f"cleared numerator reaches offset {s} beyond the 3-point stencil")
            if isinstance(term.euler, EulerPoly):
                polys[s] = polys.get(s, Poly(nv)) + term.euler.poly * c
            else:
                etas.setdefault(s, []).append((c, term.euler))
    polys = {s: p for s, p in polys.items() if p.terms}
    return Stencil(op.rank, op.exponent_shift, polys, etas, op.label)


def loewner_operator(qs: Sequence, kappa=None, eta: EtaSequence | None = None,
                     mode: str = INTERIOR) -> OperatorDescription:
    """The 2n-point operator for Brownian (``kappa``) or Levy (``eta``) driving.

    The exterior operator is written in u = 1/w, where it keeps the interior
    form except that 1/(w-1)^2 becomes u^2/(u-1)^2.
    """
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}")
    if (kappa is None) == (eta is None):
        raise UsageError("give exactly one of kappa or eta")
    qs = tuple(as_rational(q) for q in qs)
    n = len(qs)
    if n < 1:
        raise UsageError("need at least one point pair")
    nv = 2 * n
    e = [Poly.var(v, nv) for v in range(nv)]
    x = e  # same generators, read as variables in the numerators
    one = Poly.constant(1, nv)
    none = (0,) * nv
    terms = []

    if eta is not None:
        if n != 1:
            raise UsageError("Levy operators are only defined for one point pair")
        terms.append(Term(Fraction(-1), one, none, EtaOfDifference(eta, (1, -1))))
    else:
        kappa = as_rational(kappa)
        quad = Poly(nv)
        for a in range(n):
            for b in range(a + 1, n):
                quad = quad + (e[a] - e[b]) ** 2 + (e[n + a] - e[n + b]) ** 2
        for a in range(n):
            for b in range(n):
                quad = quad - (e[a] - e[n + b]) ** 2
        terms.append(Term(kappa / 2, one, none, EulerPoly(quad)))

    for v in range(nv):
        poles = tuple(1 if u == v else 0 for u in range(nv))
        terms.append(Term(Fraction(1), x[v] + 1, poles, EulerPoly(e[v])))

    for m, q in enumerate(qs):
        for v in (m, n + m):
            poles = tuple(2 if u == v else 0 for u in range(nv))
            num = one if mode == INTERIOR else x[v] ** 2
            terms.append(Term(-q, num, poles, EulerPoly(one)))
        terms.append(Term(q, one, none, EulerPoly(one)))

    sigma = -1 if mode == INTERIOR else 1
    return OperatorDescription(
        rank=n,
        terms=tuple(terms),
        rhs=sigma * sum(qs, Fraction(0)),
        exponent_shift=-1 if mode == INTERIOR else 1,
        label=f"{mode} rank-{n} {'levy' if eta is not None else 'brownian'}",
    )


def offsets(rank: int):
    return tuple(product(range(3), repeat=2 * rank))
