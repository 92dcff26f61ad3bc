"""Exception types shared across the package."""


class QbtError(Exception):
    pass


class RingMismatchError(QbtError):
    """Operands live in different rings (or incompatible monomial orders)."""


class ExponentOverflowError(QbtError):
    """A monomial exponent exceeded the hard cap; never silently wraps."""


class ParseError(QbtError):
    """Malformed polynomial / fixture / input-file text."""


class InfeasibleError(QbtError):
    """A computation exceeded its resource budget; infeasible at this scale."""


class InverseNotFoundError(QbtError):
    """Inverse extraction failed: non-birational map or method limitation."""


class NotGenericallyFiniteError(QbtError):
    """A fiber expected to be finite has positive dimension."""
