"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from ..errors import UsageError


class Poly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            if len(exps) != nvars:
                raise UsageError(f"exponent {exps} has wrong arity for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[tuple(exps)] = clean.get(tuple(exps), 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, c, nvars: int) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, v: int, nvars: int) -> "Poly":
        exps = [0] * nvars
        exps[v] = 1
        return cls(nvars, {tuple(exps): 1})

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise UsageError("variable count mismatch")
            return other
        return Poly.constant(other, self.nvars)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise UsageError("negative polynomial power")
        out = Poly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __call__(self, point: Iterable):
        point = tuple(point)
        total = Fraction(0)
        for exps, c in self.terms.items():
            m = 1
            for x, p in zip(point, exps):
                if p:
                    m *= x ** p
            total += c * m
        return total

    def degree_in(self, v: int) -> int:
        return max((e[v] for e in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for e, c in sorted(self.terms.items()):
            mono = "*".join(f"x{v}^{p}" if p > 1 else f"x{v}" for v, p in enumerate(e) if p)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return "Poly(" + " + ".join(parts) + ")"
