"""Exact and numerical moments of Taylor coefficients of whole-plane SLE
and Levy-driven Loewner chains."""

__version__ = "0.1.0"

from .arith import BigFloat, BiSeries, Rational, biseries_mul, biseries_pow, rational_parse, render
from .closed_forms import ClosedFormSpec, compare, expand_closed_form
from .errors import (
    CompileError,
    DomainError,
    EtaRangeError,
    FitError,
    ParseError,
    RunError,
    SingularPivotError,
    SlecoefError,
    SpectralFailure,
    UsageError,
    VerificationError,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .solver import (
    MomentMatrix,
    MultiMatrix,
    bandwidth,
    first_row,
    residuals,
    second_moment,
    solve_four_point,
    solve_two_point,
)
from .spectrum import (
    FamilyPoint,
    SpectrumResult,
    TridiagonalOp,
    beta_formula,
    compute_spectrum,
    family_points,
    fit_exponent,
    hahn_beta,
    top_eigenvalue,
)
from .stencil import EtaSequence, Params, compile_stencil, loewner_operator
