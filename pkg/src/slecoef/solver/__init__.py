from .four_point import MultiMatrix, graded_lex, solve_four_point
from .two_point import (
    MomentMatrix,
    bandwidth,
    first_row,
    parse_backend,
    residuals,
    second_moment,
    solve_two_point,
)

__all__ = [
    "MomentMatrix",
    "MultiMatrix",
    "bandwidth",
    "first_row",
    "graded_lex",
    "parse_backend",
    "residuals",
    "second_moment",
    "solve_four_point",
    "solve_two_point",
]
