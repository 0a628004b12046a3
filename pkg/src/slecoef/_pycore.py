"""Pure-Python reference kernels.

Used when the compiled ``_core`` extension is missing or when
``SLECOEF_KERNELS=python``. The arithmetic is written in the same order as
the Cython source so both produce the same rounding for double inputs.
"""

from __future__ import annotations

import numpy as np

from .errors import EtaRangeError, SingularPivotError
from .stencil.tables import eta_form_coefficient


def fill_rank1(coef, lo: int, nmax: int, zero, one):
    """Consecutive row-by-row fill of s_{ij} = i j rho_{ij}.

    ``coef(i, j, n, k)`` gives the stencil; the seed s_{lo,lo} = 1 and the
    row/column at index 0 (exterior) stay zero. Returns the table indexed
    ``s[i - lo][j - lo]``.
    """
    size = nmax - lo + 1
    s = [[zero] * size for _ in range(size)]
    for i in range(lo, nmax + 1):
        row = s[i - lo]
        if i == 0:
            continue
        for j in range(lo, nmax + 1):
            if j == 0:
                continue
            if i == lo and j == lo:
                row[j - lo] = one
                continue
            acc = zero
            for n in range(3):
                ii = i - n
                if ii < lo:
                    break
                prev = s[ii - lo]
                for k in range(3):
                    if n == 0 and k == 0:
                        continue
                    jj = j - k
                    if jj < lo:
                        break
                    v = prev[jj - lo]
                    if v:
                        acc = acc + coef(i, j, n, k) * v
            piv = coef(i, j, 0, 0)
            if not piv:
                raise SingularPivotError((i, j))
            row[j - lo] = -acc / piv
    return s


def fill_eta(eta, q, exterior: bool, nmax: int, zero, one):
    """Eta-form fill for any scalar type (float, MPFR, Fraction)."""
    lo = -1 if exterior else 1
    if len(eta) < nmax - lo + 1:
        raise EtaRangeError(nmax - lo, len(eta) - 1)

    def at(d):
        return eta[d if d >= 0 else -d]

    def coef(i, j, n, k):
        return eta_form_coefficient(at, i, j, n, k, q, exterior)

    return lo, fill_rank1(coef, lo, nmax, zero, one)


def fill_eta_double(eta, q: float, exterior: bool, nmax: int):
    """Double-precision eta-form fill returning ``(lo, ndarray)``."""
    eta = [float(x) for x in np.asarray(eta, dtype=np.float64)]
    lo, s = fill_eta(eta, float(q), bool(exterior), int(nmax), 0.0, 1.0)
    return lo, np.array(s, dtype=np.float64)


def integrate_paths(increments, nmax: int, dt: float, blowup: float):
    """Euler-Maruyama for the normalized radial coefficients, many paths.

    ``increments[p, t]`` is the driving increment of path ``p`` over step
    ``t``. Returns the final coefficients ``u[p, m]`` (u_1 = 1, u_0 unused),
    the final angle, and a blow-up flag per path.
    """
    incs = np.ascontiguousarray(increments, dtype=np.float64)
    paths, steps = incs.shape
    u = np.zeros((paths, nmax + 1), dtype=np.complex128)
    if nmax >= 1:
        u[:, 1] = 1.0
    theta = np.zeros(paths)
    blown = np.zeros(paths, dtype=bool)
    zp = np.empty((paths, max(nmax, 1)), dtype=np.complex128)
    new = np.empty_like(u)
    limit = blowup * blowup
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(steps):
            z = np.cos(theta) - 1j * np.sin(theta)
            if nmax >= 2:
                zp[:, 1] = z
                for k in range(2, nmax):
                    zp[:, k] = zp[:, k - 1] * z
            for m in range(2, nmax + 1):
                acc = (1 - m) * u[:, m]
                for k in range(1, m):
                    acc = acc - (2 * (m - k)) * (u[:, m - k] * zp[:, k])
                new[:, m] = u[:, m] + dt * acc
            u[:, 2:] = new[:, 2:]
            theta = theta + incs[:, t]
            if nmax >= 2:
                mag = (u[:, 2:].real ** 2 + u[:, 2:].imag ** 2).max(axis=1)
                blown |= ~(mag <= limit)
    return u, theta, blown.astype(np.uint8)
