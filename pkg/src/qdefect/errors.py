"""Exception types shared across the package.

Every error raised by the library derives from :class:`QdefectError`, so
callers (and the CLI) can distinguish domain failures from programming
errors.  Exceptions that report a witness carry it as an attribute.
"""

from __future__ import annotations


class QdefectError(Exception):
    """Base class for all library errors."""


class NotPrime(QdefectError):
    pass


class BudgetExceeded(QdefectError):
    """An enumeration or construction would exceed its configured budget.

    ``required`` holds the exact count that was requested, ``budget`` the
    configured cap.
    """

    def __init__(self, required: int, budget: int, what: str = "items"):
        self.required = required
        self.budget = budget
        self.what = what
        super().__init__(f"{what}: {required} exceeds budget {budget}")


class DivisionByZero(QdefectError):
    pass


class TowerMismatch(QdefectError):
    pass


class OutOfRange(QdefectError):
    pass


class WidthMismatch(QdefectError):
    pass


class LevelMismatch(QdefectError):
    pass


class BadRange(QdefectError):
    pass


class AmbientMismatch(QdefectError):
    pass


class NotSpanning(QdefectError):
    pass


class SubgeometryCase(QdefectError):
    pass


class DegenerateDual(QdefectError):
    """The dual-side projection is degenerate; ``witness`` is a nonzero
    rational vector common to the code and F_q^n."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotGeneratedByIntersection(QdefectError):
    pass


class HyperplaneWeightTooLarge(QdefectError):
    pass


class RankDeficient(QdefectError):
    pass


class DegenerateCode(QdefectError):
    pass


class BlockShapeMismatch(QdefectError):
    pass


class InconsistentInput(QdefectError):
    pass


class BadParams(QdefectError):
    pass


class HorizonExceeded(QdefectError):
    pass


class GroundMismatch(QdefectError):
    pass


class DecompositionInvalid(QdefectError):
    pass
