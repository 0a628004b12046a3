"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto its
stable contract: 2 usage, 3 numeric/solver failure, 4 verification failure.
"""

from __future__ import annotations


class SlecoefError(Exception):
    exit_code = 3


class UsageError(SlecoefError, ValueError):
    exit_code = 2


class ParseError(UsageError):
    pass


class DomainError(SlecoefError, ValueError):
    pass


class EtaRangeError(SlecoefError, IndexError):
    """Characteristic exponent requested beyond the supplied table."""

    def __init__(self, index: int, available: int):
        self.index = index
        self.available = available
        super().__init__(
            f"eta_{index} requested but the table only covers |n| <= {available}"
        )


class CompileError(SlecoefError):
    pass


class SingularPivotError(SlecoefError, ZeroDivisionError):
    def __init__(self, index):
        self.index = tuple(index) if not isinstance(index, int) else (index,)
        super().__init__(f"vanishing pivot coefficient at index {self.index}")


class SpectralFailure(SlecoefError):
    def __init__(self, message: str, edge_mass: float | None = None):
        self.edge_mass = edge_mass
        super().__init__(message)


class FitError(SlecoefError):
    pass


class RunError(SlecoefError):
    pass


class VerificationError(SlecoefError):
    exit_code = 4
