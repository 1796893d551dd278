"""Exception hierarchy for MultiDilworth.

Every exception carries the exit code the command line maps it to, so the
commands never need their own translation tables.
"""

from typing import Iterable, Optional


class DilworthError(Exception):
    """Base class for all domain errors."""

    exit_code = 1


class UsageError(DilworthError):
    """Bad command-line arguments."""

    exit_code = 1


class CycleError(DilworthError):
    """The input relation forces some element below itself."""

    exit_code = 2


class RangeError(DilworthError):
    """An element id lies outside [0, n)."""

    exit_code = 2


class FormatError(DilworthError):
    """A poset or result file cannot be parsed."""

    exit_code = 2


class OverlapError(DilworthError):
    """Sets of a family that must be disjoint share an element."""


class EmptyError(DilworthError):
    """An operation that needs at least one element got an empty poset."""


class SpecError(DilworthError):
    """A generator specification is invalid."""


class TooLargeError(DilworthError):
    """An exhaustive oracle was asked about an instance beyond its limit."""


class InvariantError(DilworthError):
    """An internal guarantee failed to hold. Always a bug."""


class PreconditionError(DilworthError):
    """One or more stated inequalities do not hold.

    Attributes:
        violations: Human readable inequalities that failed, in check order
    """

    exit_code = 3

    def __init__(self, violations: Iterable[str]):
        self.violations = list(violations)
        super().__init__("precondition violated: " + "; ".join(self.violations))


class InstanceTooSmall(DilworthError):
    """The instance is too small for the requested extraction.

    Attributes:
        level: Multi-order level that failed (None outside the multi-order driver)
        required: Size that was needed
        available: Size that was found
    """

    exit_code = 3

    def __init__(
        self,
        message: str,
        level: Optional[int] = None,
        required: Optional[int] = None,
        available: Optional[int] = None,
    ):
        self.level = level
        self.required = required
        self.available = available
        if level is not None:
            message = f"level {level}: {message}"
        super().__init__(message)


class DegenerateError(DilworthError):
    """A logarithmic threshold is undefined for the given ground size."""

    exit_code = 3


class PartitionError(DilworthError):
    """Blocks that must partition a ground set do not."""

    exit_code = 3


class ClaimRejected(DilworthError):
    """A stored result does not satisfy the structure it claims."""

    exit_code = 3


class GroundMismatch(DilworthError):
    """Orders that must share a ground set have different sizes."""

    exit_code = 4
