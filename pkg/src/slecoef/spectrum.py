"""Integral-means exponent beta by three routes.

* ``beta_formula``: closed form in (q, kappa), exact when the square root is.
* ``top_eigenvalue``: leading eigenvalue of the tridiagonal operator R on a
  finite window l in [-L, L], keeping only eigenvectors that decay at the edge.
* ``fit_exponent``: growth rate of the diagonal rho_ii ~ C i^(beta-3).

At the banded truncation points the spectrum is known exactly
(``hahn_beta``), and the central (2N+1) block of R is invariant.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import BigFloat, DEFAULT_PRECISION, as_rational, exact_sqrt, render
from .errors import DomainError, EtaRangeError, FitError, SpectralFailure, UsageError
from .solver.two_point import solve_two_point
from .stencil.params import EtaSequence, Params

EDGE_TOL = 1e-6
RESIDUAL_TOL = 1e-8
VALIDATED = "validated"
CONJECTURAL = "conjectural"


@dataclass(frozen=True)
class FamilyPoint:
    """Parameters at which rho_ij is (2N+1)-banded."""

    N: int
    n: int
    q: Fraction
    kappa: Fraction


def family_point(N: int, n: int) -> FamilyPoint:
    if not (isinstance(N, int) and isinstance(n, int) and 1 <= n <= N):
        raise UsageError(f"need integers 1 <= n <= N, got N={N}, n={n}")
    den = N * N + n * n - n
    return FamilyPoint(N, n, Fraction(N * n * (2 * N - n + 1), den), Fraction(2 * (2 * n + N), den))


def family_points(Nmax: int) -> list[FamilyPoint]:
    if Nmax < 1:
        raise UsageError("Nmax must be >= 1")
    return [family_point(N, n) for N in range(1, Nmax + 1) for n in range(1, N + 1)]


def find_family_point(q, kappa) -> FamilyPoint | None:
    """Inverse of ``family_point``: kappa N^2 - 2N - 2q = 0 fixes N, then q fixes n."""
    q, kappa = as_rational(q), as_rational(kappa)
    if kappa <= 0:
        return None
    root = exact_sqrt(1 + 2 * q * kappa)
    if root is None:
        return None
    N = (1 + root) / kappa
    if N.denominator != 1 or N < 1:
        return None
    N = int(N)
    for n in range(1, N + 1):
        p = family_point(N, n)
        if p.q == q and p.kappa == kappa:
            return p
    return None


def on_closed_form_family(q, kappa) -> bool:
    q, kappa = as_rational(q), as_rational(kappa)
    return kappa > 0 and q == (2 + kappa) * (6 + kappa) / (8 * kappa)


def is_validated(q, kappa) -> bool:
    return on_closed_form_family(q, kappa) or find_family_point(q, kappa) is not None


def hahn_beta(N: int, n: int, j: int) -> Fraction:
    """j-th value of the exact spectrum at family point (N, n), 0 <= j <= 2N."""
    family_point(N, n)
    if not (isinstance(j, int) and 0 <= j <= 2 * N):
        raise UsageError(f"j must be in 0..{2 * N}, got {j}")
    num = (
        2 * N * (n + 6 * n * N - 3 * n * n - N)
        - (8 * n * N - 2 * n * n - N + 2 * N * N) * j
        + (2 * n + N) * j * j
    )
    return Fraction(num, 2 * (N * N + n * n - n))


def hahn_spectrum(N: int, n: int) -> list[Fraction]:
    return [hahn_beta(N, n, j) for j in range(2 * N + 1)]


def beta_formula(q, kappa):
    """3q - 1 - q kappa / (1 + sqrt(1 + 2 q kappa)).

    Returns a ``Fraction`` when 1 + 2 q kappa is a rational square and a
    ``BigFloat`` otherwise.
    """
    q, kappa = as_rational(q), as_rational(kappa)
    disc = 1 + 2 * q * kappa
    if disc < 0:
        raise DomainError(f"1 + 2 q kappa = {render(disc)} < 0")
    root = exact_sqrt(disc)
    if root is not None:
        return 3 * q - 1 - q * kappa / (1 + root)
    r = BigFloat(disc, DEFAULT_PRECISION).sqrt()
    return (3 * q - 1) - (q * kappa) / (r + 1)


@dataclass(frozen=True)
class TridiagonalOp:
    """R[f]_l = (a_{l+1} f_{l+1} + b_l f_l + c_{l-1} f_{l-1}) / 2 on |l| <= L.

    Built from either ``kappa`` (eta_l = kappa l^2 / 2) or an explicit
    ``eta``; all coefficients are exact rationals.
    """

    q: Fraction
    L: int
    kappa: Fraction | None = None
    eta: EtaSequence | None = None

    def __post_init__(self):
        if (self.kappa is None) == (self.eta is None):
            raise UsageError("give exactly one of kappa or eta")
        if self.L < 1:
            raise UsageError("L must be >= 1")
        if self.eta is not None and self.eta.max_index is not None and self.eta.max_index < self.L + 1:
            raise EtaRangeError(self.L + 1, self.eta.max_index)

    @classmethod
    def brownian(cls, q, kappa, L: int) -> "TridiagonalOp":
        return cls(as_rational(q), L, kappa=as_rational(kappa))

    @classmethod
    def from_eta(cls, q, eta: EtaSequence, L: int) -> "TridiagonalOp":
        return cls(as_rational(q), L, eta=eta)

    def eta_at(self, l: int) -> Fraction:
        if self.kappa is not None:
            return self.kappa * l * l / 2
        return self.eta[abs(l)]

    def a(self, l: int) -> Fraction:
        return self.eta_at(l) + l - self.q

    def c(self, l: int) -> Fraction:
        return self.a(-l)

    def b(self, l: int) -> Fraction:
        return -self.a(l) - self.c(l) + 2 * self.q

    def exact_matrix(self, L: int | None = None) -> list[list[Fraction]]:
        """Truncation to |l| <= L (default the operator's own L), row l + L."""
        L = self.L if L is None else L
        size = 2 * L + 1
        M = [[Fraction(0)] * size for _ in range(size)]
        for r in range(size):
            l = r - L
            M[r][r] = self.b(l) / 2
            if r + 1 < size:
                M[r][r + 1] = self.a(l + 1) / 2
            if r > 0:
                M[r][r - 1] = self.c(l - 1) / 2
        return M

    def matrix(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.exact_matrix()])

    @property
    def provenance(self) -> dict:
        out = {"q": render(self.q), "L": self.L}
        if self.kappa is not None:
            out["kappa"] = render(self.kappa)
        else:
            out["eta"] = self.eta.to_json()
        return out


@dataclass
class Eigenpair:
    value: complex | float
    vector: np.ndarray = field(repr=False)
    edge_ratio: float
    residual: float


def _edge_ratio(v: np.ndarray) -> float:
    mag = np.abs(v)
    return float(max(mag[0], mag[-1]) / mag.max())


def decaying_eigenpairs(op: TridiagonalOp, edge_tol: float | None = None) -> list[Eigenpair]:
    """Eigenpairs of the truncation whose eigenvectors are small at both edges,
    sorted by decreasing real part."""
    edge_tol = EDGE_TOL if edge_tol is None else edge_tol
    M = op.matrix()
    w, V = np.linalg.eig(M)
    out = []
    for k in np.argsort(-w.real, kind="stable"):
        v = V[:, k]
        ratio = _edge_ratio(v)
        if ratio >= edge_tol:
            continue
        lam = w[k]
        res = float(np.abs(M @ v - lam * v).max() / np.abs(v).max())
        value = float(lam.real) if abs(lam.imag) <= 1e-12 * max(1.0, abs(lam.real)) else complex(lam)
        out.append(Eigenpair(value, v, ratio, res))
    return out


def top_eigenpair(op: TridiagonalOp) -> Eigenpair:
    if op.L < 10:
        raise UsageError("top_eigenvalue needs L >= 10")
    pairs = decaying_eigenpairs(op)
    if not pairs:
        w, V = np.linalg.eig(op.matrix())
        k = int(np.argmax(w.real))
        raise SpectralFailure(
            f"no eigenvector decays at the truncation edge (L={op.L})",
            edge_mass=_edge_ratio(V[:, k]),
        )
    best = pairs[0]
    if best.residual >= RESIDUAL_TOL:
        raise SpectralFailure(
            f"eigen-residual {best.residual:.2e} exceeds {RESIDUAL_TOL:g}", edge_mass=best.edge_ratio
        )
    return best


def top_eigenvalue(op: TridiagonalOp):
    return top_eigenpair(op).value


@dataclass(frozen=True)
class FitDetails:
    beta: float
    beta_least_squares: float
    rms_slope_residual: float
    window: tuple[int, int]


def fit_exponent_details(diagonal, i_min: int, i_max: int) -> FitDetails:
    """``diagonal[i - 1]`` is rho_ii. Local slopes of log rho against log i
    are extrapolated in 1/i (terms 1/i and 1/i^2) to i -> infinity."""
    if i_min < 1 or i_max > len(diagonal) or i_max - i_min < 4:
        raise UsageError(f"bad fit window [{i_min}, {i_max}] for {len(diagonal)} diagonal entries")
    vals = [float(diagonal[i - 1]) for i in range(i_min, i_max + 1)]
    bad = [i for i, v in zip(range(i_min, i_max + 1), vals) if not v > 0 or not math.isfinite(v)]
    if bad:
        raise FitError(f"non-positive or non-finite diagonal entries at i = {bad[:5]}")
    i = np.arange(i_min, i_max + 1, dtype=float)
    y = np.log(np.array(vals))
    x = np.log(i)
    ls_slope = float(np.polyfit(x, y, 1)[0])
    slopes = np.diff(y) / np.diff(x)
    mid = np.sqrt(i[1:] * i[:-1])
    A = np.vstack([np.ones_like(mid), 1 / mid, 1 / mid**2]).T
    coef, *_ = np.linalg.lstsq(A, slopes, rcond=None)
    rms = float(np.sqrt(np.mean((A @ coef - slopes) ** 2)))
    return FitDetails(float(coef[0]) + 3, ls_slope + 3, rms, (i_min, i_max))


def fit_exponent(diagonal, i_min: int, i_max: int) -> float:
    return fit_exponent_details(diagonal, i_min, i_max).beta


@dataclass
class SpectrumResult:
    q: Fraction
    kappa: Fraction | None
    eta: EtaSequence | None
    beta_formula: object
    beta_eigen: object
    beta_fit: float | None
    L: int
    fit_window: tuple[int, int] | None
    flags: list[str]
    diagnostics: dict = field(default_factory=dict)

    CSV_COLUMNS = ("q", "kappa", "beta_formula", "beta_eigen", "beta_fit", "L", "fit_window", "flags")

    def csv_row(self) -> list[str]:
        def num(v):
            if v is None:
                return ""
            if isinstance(v, Fraction):
                return render(v)
            if isinstance(v, complex):
                return f"{v.real:.6f}{v.imag:+.6f}j"
            return f"{float(v):.6f}"

        kappa = render(self.kappa) if self.kappa is not None else "eta"
        window = f"{self.fit_window[0]}-{self.fit_window[1]}" if self.fit_window else ""
        return [
            render(self.q), kappa, num(self.beta_formula), num(self.beta_eigen),
            num(self.beta_fit), str(self.L), window, ";".join(self.flags),
        ]


def spectrum_csv(results: list[SpectrumResult]) -> str:
    buf = io.StringIO()
    buf.write(",".join(SpectrumResult.CSV_COLUMNS) + "\n")
    for r in results:
        buf.write(",".join(r.csv_row()) + "\n")
    return buf.getvalue()


def compute_spectrum(
    q,
    kappa=None,
    eta: EtaSequence | None = None,
    L: int = 100,
    fit_nmax: int = 400,
    fit_window: tuple[int, int] | None = None,
    backend: str = "float:53",
    eigen_tol: float = 1e-4,
    fit_tol: float = 0.05,
) -> SpectrumResult:
    """All three routes at one parameter point; failures of one route are
    recorded in ``diagnostics`` rather than raised."""
    q = as_rational(q)
    if (kappa is None) == (eta is None):
        raise UsageError("give exactly one of kappa or eta")
    diag: dict = {}
    if kappa is not None:
        kappa = as_rational(kappa)
        op = TridiagonalOp.brownian(q, kappa, L)
        params = Params.brownian(q, kappa)
        try:
            bf = beta_formula(q, kappa)
        except DomainError as exc:
            bf = None
            diag["beta_formula"] = str(exc)
    else:
        op = TridiagonalOp.from_eta(q, eta, L)
        params = Params.levy(q, eta)
        bf = None

    try:
        pair = top_eigenpair(op)
        be = pair.value
        diag["edge_ratio"] = pair.edge_ratio
        diag["eigen_residual"] = pair.residual
    except SpectralFailure as exc:
        be = None
        diag["eigen"] = str(exc)
        diag["edge_mass"] = exc.edge_mass

    window = fit_window or (max(1, fit_nmax // 4), fit_nmax)
    bfit = None
    try:
        m = solve_two_point(params, fit_nmax, backend)
        fd = fit_exponent_details(m.diagonal(), *window)
        bfit = fd.beta
        diag["beta_least_squares"] = fd.beta_least_squares
        diag["fit_rms"] = fd.rms_slope_residual
    except (FitError, EtaRangeError) as exc:
        diag["fit"] = str(exc)
        window = None

    flags = [VALIDATED if kappa is not None and is_validated(q, kappa) else CONJECTURAL]
    if kappa is not None:
        fp = find_family_point(q, kappa)
        if fp is not None:
            diag["family_point"] = (fp.N, fp.n)
    if bf is not None and be is not None and bfit is not None:
        ok = abs(complex(be) - float(bf)) < eigen_tol and abs(bfit - float(bf)) < fit_tol
        flags.append("agree" if ok else "disagree")
    elif be is not None and bfit is not None:
        flags.append("agree" if abs(complex(be) - bfit) < fit_tol else "disagree")
    return SpectrumResult(q, kappa, eta, bf, be, bfit, L, window, flags, diag)


__all__ = [
    "CONJECTURAL",
    "EDGE_TOL",
    "VALIDATED",
    "Eigenpair",
    "FamilyPoint",
    "FitDetails",
    "SpectrumResult",
    "TridiagonalOp",
    "beta_formula",
    "compute_spectrum",
    "decaying_eigenpairs",
    "family_point",
    "family_points",
    "find_family_point",
    "fit_exponent",
    "fit_exponent_details",
    "hahn_beta",
    "hahn_spectrum",
    "is_validated",
    "on_closed_form_family",
    "spectrum_csv",
    "top_eigenpair",
    "top_eigenvalue",
]
