"""Evolution parameters and characteristic-exponent sequences."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence, Union

import gmpy2

from ..arith import as_rational, render
from ..errors import DomainError, EtaRangeError, ParseError, UsageError

INTERIOR = "interior"
EXTERIOR = "exterior"
MODES = (INTERIOR, EXTERIOR)


def _exact_power(n: int, alpha: Fraction) -> Fraction:
    """n**alpha for n >= 0, only when the result is rational."""
    if n == 0:
        return Fraction(0)
    p, r = alpha.numerator, alpha.denominator
    base = n ** abs(p)
    root, exact = gmpy2.iroot(gmpy2.mpz(base), r)
    if not exact:
        raise DomainError(f"{n}**{render(alpha)} is irrational; pick an integer alpha")
    root = int(root)
    return Fraction(root) if p >= 0 else Fraction(1, root)


class EtaSequence:
    """Symmetric characteristic exponent eta_n = eta_{-n}, n >= 0.

    Either a finite explicit table or the closed-form stable generator
    eta_n = c * |n|**alpha. Finite tables are never extrapolated.
    """

    def __init__(self, values: Sequence | None = None, *, stable: tuple | None = None):
        if (values is None) == (stable is None):
            raise UsageError("give exactly one of an explicit table or a stable generator")
        self._cache: dict[int, Fraction] = {}
        if values is not None:
            vals = tuple(as_rational(v) for v in values)
            if not vals:
                raise DomainError("eta table is empty")
            if vals[0] != 0:
                raise DomainError("eta_0 must vanish")
            if any(v < 0 for v in vals):
                raise DomainError("eta_n must be non-negative")
            self.values: tuple[Fraction, ...] | None = vals
            self.stable_params = None
        else:
            c, alpha = (as_rational(x) for x in stable)
            if c < 0:
                raise DomainError("stable scale c must be non-negative")
            if alpha <= 0:
                raise DomainError("stable index alpha must be positive")
            self.values = None
            self.stable_params = (c, alpha)

    @classmethod
    def brownian(cls, kappa) -> "EtaSequence":
        """eta_n = kappa n^2 / 2."""
        return cls(stable=(as_rational(kappa) / 2, 2))

    @property
    def max_index(self) -> int | None:
        return None if self.values is None else len(self.values) - 1

    def __getitem__(self, n: int) -> Fraction:
        n = abs(int(n))
        if self.values is not None:
            if n >= len(self.values):
                raise EtaRangeError(n, len(self.values) - 1)
            return self.values[n]
        v = self._cache.get(n)
        if v is None:
            c, alpha = self.stable_params
            v = c * _exact_power(n, alpha)
            self._cache[n] = v
        return v

    def table(self, nmax: int) -> list[Fraction]:
        return [self[n] for n in range(nmax + 1)]

    def to_json(self) -> dict:
        if self.values is not None:
            return {"eta": [render(v) for v in self.values]}
        c, alpha = self.stable_params
        return {"stable": {"c": render(c), "alpha": render(alpha)}}

    @classmethod
    def from_json(cls, obj: dict) -> "EtaSequence":
        if not isinstance(obj, dict):
            raise ParseError("eta file must hold a JSON object")
        if "eta" in obj and "stable" not in obj:
            if not isinstance(obj["eta"], list):
                raise ParseError('"eta" must be a list of "p/r" strings')
            return cls([_json_rational(v) for v in obj["eta"]])
        if "stable" in obj and "eta" not in obj:
            st = obj["stable"]
            try:
                return cls(stable=(_json_rational(st["c"]), _json_rational(st["alpha"])))
            except (KeyError, TypeError) as exc:
                raise ParseError('"stable" needs "c" and "alpha"') from exc
        raise ParseError('eta file needs exactly one of "eta" or "stable"')

    @classmethod
    def load(cls, path) -> "EtaSequence":
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
        return cls.from_json(obj)

    def __eq__(self, other):
        if not isinstance(other, EtaSequence):
            return NotImplemented
        return self.values == other.values and self.stable_params == other.stable_params

    def __hash__(self):
        return hash((self.values, self.stable_params))

    def __repr__(self):
        if self.values is not None:
            head = ", ".join(render(v) for v in self.values[:6])
            tail = ", ..." if len(self.values) > 6 else ""
            return f"EtaSequence([{head}{tail}])"
        c, alpha = self.stable_params
        return f"EtaSequence(stable=({render(c)}, {render(alpha)}))"


def _json_rational(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise ParseError(f"expected a rational string, got {v!r}")
    return as_rational(str(v))


@dataclass(frozen=True)
class Brownian:
    kappa: Fraction

    def __post_init__(self):
        object.__setattr__(self, "kappa", as_rational(self.kappa))
        if self.kappa < 0:
            raise DomainError("kappa must be non-negative")


@dataclass(frozen=True)
class Levy:
    eta: EtaSequence


Driver = Union[Brownian, Levy]


@dataclass(frozen=True)
class Params:
    """Exponent ``q``, a driver, and the interior/exterior mode."""

    q: Fraction
    driver: Driver
    mode: str = INTERIOR
    _eta: EtaSequence | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "q", as_rational(self.q))
        if self.mode not in MODES:
            raise UsageError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not isinstance(self.driver, (Brownian, Levy)):
            raise UsageError("driver must be Brownian or Levy")
        if self.mode == EXTERIOR and not isinstance(self.driver, Brownian):
            raise UsageError("exterior mode requires a Brownian driver")

    @classmethod
    def brownian(cls, q, kappa, mode: str = INTERIOR) -> "Params":
        return cls(as_rational(q), Brownian(as_rational(kappa)), mode)

    @classmethod
    def levy(cls, q, eta: EtaSequence, mode: str = INTERIOR) -> "Params":
        return cls(as_rational(q), Levy(eta), mode)

    @property
    def sigma(self) -> int:
        return -1 if self.mode == INTERIOR else 1

    @property
    def kappa(self) -> Fraction | None:
        return self.driver.kappa if isinstance(self.driver, Brownian) else None

    @property
    def eta(self) -> EtaSequence:
        """Driver as an eta-sequence (Brownian: kappa n^2 / 2)."""
        if isinstance(self.driver, Levy):
            return self.driver.eta
        if self._eta is None:
            object.__setattr__(self, "_eta", EtaSequence.brownian(self.driver.kappa))
        return self._eta

    def to_json(self) -> dict:
        out = {"mode": self.mode, "q": render(self.q)}
        if isinstance(self.driver, Brownian):
            out["kappa"] = render(self.driver.kappa)
        else:
            out["eta"] = self.driver.eta.to_json()
        return out
