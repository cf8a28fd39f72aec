"""
Exceptions raised by mwcut.

Every exception carries an ``exit_code`` used by the management commands:
1 for invalid input, 2 for internal guards.
"""

from typing import Optional, Sequence


class MultiwayCutError(Exception):
    """Base class for all mwcut errors."""

    exit_code = 1


class InstanceFormatError(MultiwayCutError):
    """Raised when an instance, solution or cut file is malformed."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InstanceError(MultiwayCutError):
    """Raised when an instance or a generator parameter is invalid."""


class InfeasibleSolutionError(MultiwayCutError):
    """Raised when a fractional solution violates the distance constraints."""

    def __init__(self, message: str, witness: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.witness = tuple(witness) if witness is not None else ()


class InvalidCutError(MultiwayCutError):
    """Raised when a cut contains a terminal or an infinite-weight member."""


class UnboundedLPError(MultiwayCutError):
    """Raised when some terminal pair is joined by an uncuttable path."""


class InfeasibleInstanceError(MultiwayCutError):
    """Raised when no finite multiway cut exists."""


class ConvergenceError(MultiwayCutError):
    """Raised when the MWU solver exceeds its iteration cap."""

    exit_code = 2


class OracleLimitError(MultiwayCutError):
    """Raised when an exact oracle is asked to search beyond its guard."""

    exit_code = 2


class SolverError(MultiwayCutError):
    """Raised when a solver invariant such as weak duality breaks."""

    exit_code = 2
