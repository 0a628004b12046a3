"""Two-point moment matrices rho_{ij} filled from the recurrence."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import gmpy2

from .. import kernels
from .._pycore import fill_eta, fill_rank1
from ..arith import BigFloat, DEFAULT_PRECISION, mpfr_context, rational_parse, render, to_mpfr
from ..errors import ParseError, SingularPivotError, UsageError
from ..stencil.params import EXTERIOR, INTERIOR, Brownian, EtaSequence, Levy, Params
from ..stencil.tables import hand_table

EXACT = "exact"


def parse_backend(spec: str) -> tuple[str, int | None]:
    """``"exact"`` -> ("exact", None); ``"float:BITS"`` -> ("float", BITS)."""
    spec = spec.strip().lower()
    if spec == EXACT:
        return EXACT, None
    if spec == "float":
        return "float", DEFAULT_PRECISION
    if spec.startswith("float:"):
        try:
            bits = int(spec[6:])
        except ValueError:
            raise UsageError(f"bad backend {spec!r}; use exact or float:BITS") from None
        if bits < 53:
            raise UsageError("float precision must be at least 53 bits")
        return "float", bits
    raise UsageError(f"bad backend {spec!r}; use exact or float:BITS")


def backend_name(kind: str, bits: int | None) -> str:
    return EXACT if kind == EXACT else f"float:{bits}"


@dataclass
class MomentMatrix:
    """rho_{ij} on 1..nmax (interior) or -1..nmax without 0 (exterior).

    Values are ``Fraction`` for the exact backend and ``BigFloat`` otherwise.
    Indexing outside the stored range raises ``KeyError``; index 0 of the
    exterior table reads as zero.
    """

    params: Params
    nmax: int
    backend: str
    rows: list = field(repr=False)
    source: str = "recurrence"
    # float backends: largest |rho_ij - rho_ji| / max|rho| seen before mirroring
    asymmetry: float = 0.0

    @property
    def mode(self) -> str:
        return self.params.mode

    @property
    def lo(self) -> int:
        return 1 if self.mode == INTERIOR else -1

    @property
    def exact(self) -> bool:
        return self.backend == EXACT

    def indices(self) -> list[int]:
        return [i for i in range(self.lo, self.nmax + 1) if i != 0]

    def __getitem__(self, key):
        i, j = key
        lo = self.lo
        if not (lo <= i <= self.nmax and lo <= j <= self.nmax):
            raise KeyError(key)
        return self.rows[i - lo][j - lo]

    def items(self) -> Iterator[tuple[int, int, object]]:
        for i in self.indices():
            for j in self.indices():
                yield i, j, self[i, j]

    def diagonal(self) -> list:
        return [self[i, i] for i in self.indices()]

    def symmetry_defects(self, tol=0) -> list[tuple[int, int]]:
        out = []
        for i in self.indices():
            for j in self.indices():
                if j > i and abs(self[i, j] - self[j, i]) > tol:
                    out.append((i, j))
        return out

    def _value_str(self, v) -> str:
        return render(v) if self.exact else str(v)

    def to_json(self) -> dict:
        out = self.params.to_json()
        out["nmax"] = self.nmax
        out["backend"] = self.backend
        out["entries"] = [
            [i, j, self._value_str(self[i, j])]
            for i in self.indices() for j in self.indices() if j >= i
        ]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("i,j,value\n")
        for i in self.indices():
            for j in self.indices():
                if j >= i:
                    buf.write(f"{i},{j},{self._value_str(self[i, j])}\n")
        return buf.getvalue()

    @classmethod
    def from_json(cls, obj: dict) -> "MomentMatrix":
        try:
            mode = obj["mode"]
            q = rational_parse(obj["q"])
            if "kappa" in obj:
                params = Params(q, Brownian(rational_parse(obj["kappa"])), mode)
            else:
                params = Params(q, Levy(EtaSequence.from_json(obj["eta"])), mode)
            nmax = int(obj["nmax"])
            kind, bits = parse_backend(obj["backend"])
            entries = obj["entries"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"not a moment-matrix document: {exc}") from exc
        lo = 1 if mode == INTERIOR else -1
        size = nmax - lo + 1
        zero = Fraction(0) if kind == EXACT else BigFloat(0, bits)
        rows = [[zero] * size for _ in range(size)]
        for i, j, text in entries:
            v = rational_parse(text) if kind == EXACT else BigFloat(to_mpfr(text, bits), bits)
            rows[i - lo][j - lo] = v
            rows[j - lo][i - lo] = v
        return cls(params, nmax, backend_name(kind, bits), rows)


def _rho_from_s(s, lo, nmax, div):
    size = nmax - lo + 1
    rows = [[None] * size for _ in range(size)]
    for i in range(lo, nmax + 1):
        for j in range(lo, nmax + 1):
            v = s[i - lo][j - lo]
            rows[i - lo][j - lo] = v if i * j == 0 else div(v, i * j)
    return rows


def solve_two_point(params: Params, nmax: int, backend: str = EXACT) -> MomentMatrix:
    """Fill rho_{ij} row by row from the seed, isolating the (0,0) term.

    The exact backend runs the transcribed tables on rationals; float
    backends run the eta-form kernel, in doubles for 53 bits (compiled when
    available) and in MPFR otherwise.
    """
    if nmax < 1:
        raise UsageError("nmax must be >= 1")
    kind, bits = parse_backend(backend)
    lo = 1 if params.mode == INTERIOR else -1
    exterior = params.mode == EXTERIOR
    if kind == EXACT:
        s = fill_rank1(hand_table(params), lo, nmax, Fraction(0), Fraction(1))
        rows = _rho_from_s(s, lo, nmax, lambda v, d: v / d)
    else:
        eta = params.eta.table(nmax - lo)
        if bits == 53:
            _, arr = kernels.fill_eta_double([float(e) for e in eta], float(params.q), exterior, nmax)
            wrap = lambda x: BigFloat(float(x), 53)
            s = [[wrap(x) for x in row] for row in arr]
            rows = _rho_from_s(s, lo, nmax, lambda v, d: BigFloat(v.value / d, 53))
        else:
            ctx = mpfr_context(bits)
            with gmpy2.context(ctx):
                eta_f = [to_mpfr(e, bits) for e in eta]
                q_f = to_mpfr(params.q, bits)
                zero, one = gmpy2.mpfr(0, bits), gmpy2.mpfr(1, bits)
                _, s = fill_eta(eta_f, q_f, exterior, nmax, zero, one)
                rows = _rho_from_s(s, lo, nmax, lambda v, d: ctx.div(v, d))
            rows = [[BigFloat._wrap(v, bits) for v in row] for row in rows]
        asym = _mirror_upper(rows)
        return MomentMatrix(params, nmax, backend_name(kind, bits), rows, asymmetry=asym)
    return MomentMatrix(params, nmax, backend_name(kind, bits), rows)


def _mirror_upper(rows) -> float:
    """Copy the upper triangle onto the lower one and return the relative
    rounding-level mismatch that was overwritten. The two triangles are
    filled by different summation orders, so in floating point they agree
    only to rounding; storing one of them keeps the table symmetric."""
    size = len(rows)
    worst = 0.0
    scale = max((abs(float(v)) for row in rows for v in row if v is not None), default=0.0) or 1.0
    for a in range(size):
        for b in range(a + 1, size):
            u, l = rows[a][b], rows[b][a]
            if u is None:
                continue
            worst = max(worst, abs(float(u) - float(l)) / scale)
            rows[b][a] = u
    return worst


def residuals(m: MomentMatrix, include_zero_index: bool = True) -> dict:
    """Re-substitute every stencil equation; returns the nonzero residuals.

    Exterior equations attached to index 0 are not used by the fill; with
    ``include_zero_index`` they are checked as consistency conditions.
    """
    coef = hand_table(m.params)
    lo, nmax = m.lo, m.nmax

    def s(i, j):
        if i < lo or j < lo or i * j == 0:
            return 0
        return i * j * m[i, j]

    out = {}
    for i in range(lo, nmax + 1):
        for j in range(lo, nmax + 1):
            if (i == 0 or j == 0) and not include_zero_index:
                continue
            total = 0
            for n in range(3):
                for k in range(3):
                    v = s(i - n, j - k)
                    if v:
                        total = total + coef(i, j, n, k) * v
            if total:
                out[(i, j)] = total
    return out


def second_moment(m: MomentMatrix, n: int):
    """<|F_n|^2> = rho_{nn}(q=2)."""
    if m.params.q != 2:
        raise UsageError("second moments are read off at q = 2")
    if n not in m.indices():
        raise UsageError(f"n = {n} outside the computed range")
    return m[n, n]


def bandwidth(m: MomentMatrix, tol=0) -> int:
    """Smallest b with rho_{ij} = 0 whenever |i - j| > b; ``nmax`` if dense."""
    widest = 0
    for i, j, v in m.items():
        if abs(v) > tol:
            widest = max(widest, abs(i - j))
    if widest >= m.nmax - m.lo:
        return m.nmax
    return widest


def first_row(params: Params, jmax: int) -> list[Fraction]:
    """rho_{1j}, j = 1..jmax, from the three-term recurrence at i = 1."""
    if params.mode != INTERIOR:
        raise UsageError("first_row is defined for the interior expansion")
    coef = hand_table(params)
    s = [Fraction(0), Fraction(1)]
    for j in range(2, jmax + 1):
        acc = coef(1, j, 0, 1) * s[j - 1]
        if j >= 3:
            acc += coef(1, j, 0, 2) * s[j - 2]
        piv = coef(1, j, 0, 0)
        if piv == 0:
            raise SingularPivotError((1, j))
        s.append(-acc / piv)
    return [s[j] / j for j in range(1, jmax + 1)]
