"""Monte Carlo estimates of coefficient moments from the radial Loewner chain.

The normalized coefficients u_m of e^t f(w, t) = w + sum_m u_m w^m obey

    du_m/dt = (1 - m) u_m - 2 sum_{k=1}^{m-1} (m - k) u_{m-k} e^{-i k theta},

with u_1 = 1 and theta the driving angle. After a long horizon T the law of
(u_m) is stationary; the rotating-frame coefficients f_m = u_m e^{i(m-1)theta}
then carry the moments rho_ij = <f_i conj(f_j)>.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import product

import numpy as np

from . import kernels
from .errors import RunError, UsageError

BLOWUP = 1e12
MAX_DISCARD_FRACTION = 0.01


@dataclass(frozen=True)
class McConfig:
    """One simulation. Exactly one of ``kappa`` or ``stable=(alpha, c)``."""

    nmax: int
    paths: int
    seed: int
    kappa: float | None = None
    stable: tuple[float, float] | None = None
    dt: float = 1e-3
    T: float = 12.0
    batch: int = 256
    fourth_degree: int = 8

    def __post_init__(self):
        if (self.kappa is None) == (self.stable is None):
            raise UsageError("give exactly one of kappa or stable=(alpha, c)")
        if self.kappa is not None and self.kappa < 0:
            raise UsageError("kappa must be >= 0")
        if self.stable is not None:
            alpha, c = self.stable
            if not (0 < alpha <= 2) or c < 0:
                raise UsageError("stable driving needs 0 < alpha <= 2 and c >= 0")
        if self.nmax < 2:
            raise UsageError("nmax must be >= 2")
        if not (0 < self.dt <= 1e-2):
            raise UsageError("dt must lie in (0, 1e-2]")
        if self.T < 8:
            raise UsageError("T must be >= 8 for the coefficients to become stationary")
        if self.paths < 100:
            raise UsageError("paths must be >= 100")
        if not (0 <= self.seed < 2**64):
            raise UsageError("seed must be a 64-bit unsigned integer")
        if self.batch < 1:
            raise UsageError("batch must be >= 1")

    @property
    def steps(self) -> int:
        return int(round(self.T / self.dt))

    @property
    def evidence_only(self) -> bool:
        # no exact theory is asserted for stable drivers beyond the special cases
        return self.stable is not None

    def to_json(self) -> dict:
        out = asdict(self)
        if self.stable is not None:
            out["stable"] = list(self.stable)
        return out


def coefficient_rhs(u: np.ndarray, theta: float) -> np.ndarray:
    """Time derivative of u_2..u_nmax for one state; ``u[m]`` is u_m, u[1] = 1.

    Reference implementation for tests; the kernels inline the same sum.
    """
    nmax = len(u) - 1
    out = np.zeros(nmax + 1, dtype=complex)
    for m in range(2, nmax + 1):
        acc = (1 - m) * u[m]
        for k in range(1, m):
            acc -= 2 * (m - k) * u[m - k] * np.exp(-1j * k * theta)
        out[m] = acc
    return out


def cms_symmetric(alpha: float, V: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Chambers-Mallows-Stuck transform for standard symmetric alpha-stable
    variables (characteristic function exp(-|t|^alpha)).

    ``V`` uniform on (-pi/2, pi/2), ``W`` standard exponential.
    """
    if alpha == 1:
        return np.tan(V)
    return (
        np.sin(alpha * V)
        / np.cos(V) ** (1 / alpha)
        * (np.cos((1 - alpha) * V) / W) ** ((1 - alpha) / alpha)
    )


def path_generator(seed: int, path: int) -> np.random.Generator:
    """Counter-based stream for one path; independent of batching and order."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, path], dtype=np.uint64)))


def sample_increments(config: McConfig, start: int, stop: int) -> np.ndarray:
    """Driving increments for paths ``start..stop-1``, shape (paths, steps)."""
    steps = config.steps
    out = np.empty((stop - start, steps))
    for row, p in enumerate(range(start, stop)):
        g = path_generator(config.seed, p)
        if config.kappa is not None:
            out[row] = g.standard_normal(steps) * math.sqrt(config.kappa * config.dt)
        else:
            alpha, c = config.stable
            V = g.uniform(-math.pi / 2, math.pi / 2, steps)
            W = g.standard_exponential(steps)
            out[row] = cms_symmetric(alpha, V, W) * (c * config.dt) ** (1 / alpha)
    return out


def balanced_indices(nmax: int, degree: int) -> list[tuple[int, int, int, int]]:
    """(i1, i2, j1, j2) with i1 <= i2, j1 <= j2, i1 + i2 = j1 + j2, entries in
    1..nmax, total degree <= ``degree`` and not all equal to 1."""
    out = []
    for i1, i2, j1, j2 in product(range(1, nmax + 1), repeat=4):
        if i1 <= i2 and j1 <= j2 and i1 + i2 == j1 + j2 and i1 + i2 + j1 + j2 <= degree:
            if (i1, i2, j1, j2) != (1, 1, 1, 1):
                out.append((i1, i2, j1, j2))
    return out


@dataclass
class Estimate:
    mean: float
    stderr: float


def _estimate(samples: np.ndarray) -> Estimate:
    n = len(samples)
    mean = math.fsum(samples) / n
    var = math.fsum((samples - mean) ** 2) / (n - 1)
    return Estimate(mean, math.sqrt(var / n))


@dataclass
class MomentEstimates:
    config: McConfig
    second: dict[int, Estimate]
    fourth: dict[tuple, Estimate]
    cross: dict[tuple[int, int], Estimate]
    paths: int
    discarded: int
    kernel: str = field(default=kernels.BACKEND)

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "kernel": self.kernel,
            "evidence_only": self.config.evidence_only,
            "estimates": [
                {"n": n, "mean": e.mean, "stderr": e.stderr, "paths": self.paths, "discarded": self.discarded}
                for n, e in sorted(self.second.items())
            ],
            "fourth": [
                {"index": list(k), "mean": e.mean, "stderr": e.stderr} for k, e in sorted(self.fourth.items())
            ],
            "cross": [
                {"i": i, "j": j, "mean": e.mean, "stderr": e.stderr} for (i, j), e in sorted(self.cross.items())
            ],
        }


def _observables(u: np.ndarray, theta: np.ndarray, nmax: int, quads, pairs):
    second = {n: np.abs(u[:, n]) ** 2 for n in range(2, nmax + 1)}
    fourth = {
        k: (u[:, k[0]] * u[:, k[1]] * np.conj(u[:, k[2]] * u[:, k[3]])).real for k in quads
    }
    phase = np.exp(1j * theta)
    cross = {(i, j): (u[:, i] * np.conj(u[:, j]) * phase ** (i - j)).real for i, j in pairs}
    return second, fourth, cross


def estimate_from_increments(config: McConfig, increments: np.ndarray, dt: float | None = None):
    """Integrate given increments and return kept observables plus discard count."""
    dt = config.dt if dt is None else dt
    u, theta, blown = kernels.integrate_paths(increments, config.nmax, dt, BLOWUP)
    keep = np.asarray(blown) == 0
    quads = balanced_indices(config.nmax, config.fourth_degree)
    pairs = [(i, j) for i in range(1, config.nmax + 1) for j in range(i + 1, config.nmax + 1)]
    obs = _observables(np.asarray(u)[keep], np.asarray(theta)[keep], config.nmax, quads, pairs)
    return obs, int((~keep).sum())


def run(config: McConfig) -> MomentEstimates:
    """Simulate ``config.paths`` paths in batches and aggregate with
    compensated sums. The result depends only on the config (and on which
    kernel backend is active)."""
    chunks = []
    discarded = 0
    for start in range(0, config.paths, config.batch):
        stop = min(start + config.batch, config.paths)
        obs, d = estimate_from_increments(config, sample_increments(config, start, stop))
        chunks.append(obs)
        discarded += d
    if discarded > MAX_DISCARD_FRACTION * config.paths:
        raise RunError(f"{discarded} of {config.paths} paths blew up (|u| > {BLOWUP:g})")
    kept = config.paths - discarded
    if kept < 2:
        raise RunError("fewer than two paths survived")

    def merged(pos, key):
        return np.concatenate([c[pos][key] for c in chunks])

    first = chunks[0]
    second = {n: _estimate(merged(0, n)) for n in first[0]}
    fourth = {k: _estimate(merged(1, k)) for k in first[1]}
    cross = {k: _estimate(merged(2, k)) for k in first[2]}
    return MomentEstimates(config, second, fourth, cross, kept, discarded)


def check_against(est: MomentEstimates, reference: dict[int, float], sigmas: float = 3.0) -> list[int]:
    """Indices n whose estimate is more than ``sigmas`` standard errors off."""
    bad = []
    for n, ref in sorted(reference.items()):
        e = est.second.get(n)
        if e is None:
            continue
        if abs(e.mean - ref) > sigmas * e.stderr:
            bad.append(n)
    return bad


__all__ = [
    "BLOWUP",
    "Estimate",
    "McConfig",
    "MomentEstimates",
    "balanced_indices",
    "check_against",
    "cms_symmetric",
    "coefficient_rhs",
    "estimate_from_increments",
    "path_generator",
    "run",
    "sample_increments",
]
