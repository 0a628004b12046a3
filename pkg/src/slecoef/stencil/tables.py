"""Hand-transcribed recurrence coefficients for the two-point function.

Each table returns C^{n,k}_{i,j}, the weight of s_{i-n, j-k} = (i-n)(j-k)
rho_{i-n, j-k} in the equation attached to the monomial with index (i, j).
The compiled stencils in :mod:`slecoef.stencil.compiler` must reproduce
these exactly.
"""

from __future__ import annotations

from fractions import Fraction

from .params import Brownian, EtaSequence, Params, EXTERIOR, INTERIOR
from ..errors import UsageError

OFFSETS = tuple((n, k) for n in range(3) for k in range(3))


def interior_table(i: int, j: int, n: int, k: int, params: Params) -> Fraction:
    if params.mode != INTERIOR or not isinstance(params.driver, Brownian):
        raise UsageError("interior_table needs interior mode with a Brownian driver")
    q = params.q
    h = params.driver.kappa / 2
    if (n, k) == (0, 0):
        return -(h * (i - j) ** 2 + i + j - 2)
    if (n, k) == (1, 1):
        return -4 * (h * (i - j) ** 2 - 2 * q)
    if (n, k) == (2, 2):
        return -(h * (i - j) ** 2 - i - j + 6 - 2 * q)
    if (n, k) == (0, 1):
        return 2 * (h * (j - i - 1) ** 2 + i - 1 - q)
    if (n, k) == (1, 0):
        return 2 * (h * (i - j - 1) ** 2 + j - 1 - q)
    if (n, k) == (0, 2):
        return -(h * (j - i - 2) ** 2 + i - j + 2 - q)
    if (n, k) == (2, 0):
        return -(h * (i - j - 2) ** 2 + j - i + 2 - q)
    if (n, k) == (1, 2):
        return 2 * (h * (i - j + 1) ** 2 + 3 - j - 2 * q)
    if (n, k) == (2, 1):
        return 2 * (h * (j - i + 1) ** 2 + 3 - i - 2 * q)
    raise UsageError(f"offset {(n, k)} outside {{0,1,2}}^2")


def exterior_table(i: int, j: int, n: int, k: int, params: Params) -> Fraction:
    if params.mode != EXTERIOR:
        raise UsageError("exterior_table needs exterior mode")
    q = params.q
    kappa = params.driver.kappa
    h = kappa / 2
    if (n, k) == (0, 0):
        return -(h * (i - j) ** 2 + i + j + 2)
    if (n, k) == (1, 1):
        return -2 * kappa * (i - j) ** 2
    if (n, k) == (2, 2):
        return -(h * (i - j) ** 2 - i - j + 2 + 2 * q)
    if (n, k) == (0, 1):
        return 2 * (h * (j - i - 1) ** 2 + i + 1)
    if (n, k) == (1, 0):
        return 2 * (h * (i - j - 1) ** 2 + j + 1)
    if (n, k) == (0, 2):
        return -(h * (j - i - 2) ** 2 + i - j + 2 + q)
    if (n, k) == (2, 0):
        return -(h * (i - j - 2) ** 2 + j - i + 2 + q)
    if (n, k) == (1, 2):
        return 2 * (h * (i - j + 1) ** 2 - j + 1 + q)
    if (n, k) == (2, 1):
        return 2 * (h * (j - i + 1) ** 2 - i + 1 + q)
    raise UsageError(f"offset {(n, k)} outside {{0,1,2}}^2")


def eta_form_coefficient(eta, i: int, j: int, n: int, k: int, q, exterior: bool = False):
    """Coefficients written through eta_d, generic in the scalar type.

    ``eta`` is any callable d -> eta_d. Interior rows are the Levy table;
    exterior rows are the Brownian exterior table with kappa d^2/2 replaced
    by eta_d. Used by the numeric fill backends, which pass float or MPFR
    scalars for ``q`` and ``eta``.
    """
    d = i - j
    if not exterior:
        if n == 0:
            if k == 0:
                return -eta(d) - i - j + 2
            if k == 1:
                return 2 * (eta(d + 1) + i - 1 - q)
            return -eta(d + 2) + j - i - 2 + q
        if n == 1:
            if k == 0:
                return 2 * (eta(d - 1) + j - 1 - q)
            if k == 1:
                return -4 * (eta(d) - 2 * q)
            return 2 * (eta(d + 1) + 3 - j - 2 * q)
        if k == 0:
            return -eta(d - 2) + i - j - 2 + q
        if k == 1:
            return 2 * (eta(d - 1) + 3 - i - 2 * q)
        return -eta(d) + i + j - 6 + 2 * q
    if n == 0:
        if k == 0:
            return -(eta(d) + i + j + 2)
        if k == 1:
            return 2 * (eta(d + 1) + i + 1)
        return -(eta(d + 2) + i - j + 2 + q)
    if n == 1:
        if k == 0:
            return 2 * (eta(d - 1) + j + 1)
        if k == 1:
            return -4 * eta(d)
        return 2 * (eta(d + 1) - j + 1 + q)
    if k == 0:
        return -(eta(d - 2) + j - i + 2 + q)
    if k == 1:
        return 2 * (eta(d - 1) - i + 1 + q)
    return -(eta(d) - i - j + 2 + 2 * q)


def levy_table(i: int, j: int, n: int, k: int, q, eta: EtaSequence) -> Fraction:
    """Interior coefficients for a driver with characteristic exponent eta."""
    if (n, k) not in OFFSETS:
        raise UsageError(f"offset {(n, k)} outside {{0,1,2}}^2")
    return eta_form_coefficient(eta.__getitem__, i, j, n, k, Fraction(q))


def hand_table(params: Params):
    """The transcribed table matching ``params``, as f(i, j, n, k)."""
    if params.mode == EXTERIOR:
        return lambda i, j, n, k: exterior_table(i, j, n, k, params)
    if isinstance(params.driver, Brownian):
        return lambda i, j, n, k: interior_table(i, j, n, k, params)
    eta = params.driver.eta
    q = params.q
    return lambda i, j, n, k: levy_table(i, j, n, k, q, eta)
