"""Shared exception types."""


class BeattysumsError(Exception):
    """Base class for all package errors."""


class PrecisionExhausted(BeattysumsError):
    """Interval refinement hit the precision cap without deciding a predicate."""


class NotRepresentable(BeattysumsError):
    """An exact operation would leave the supported closure of symbolic reals."""


class ValidationError(BeattysumsError):
    """A constructed object violates a documented precondition."""


class ParseError(BeattysumsError):
    """Malformed config file or real-number literal."""


class LimitTooLarge(BeattysumsError):
    """Requested table or transform exceeds the configured memory bound."""


class InvalidWidth(BeattysumsError):
    """Smoothing width outside the admissible range for the given density."""


class ToleranceUnreachable(BeattysumsError):
    """Requested truncation tolerance needs a prime cutoff beyond sieve capacity."""


class ZeroVector(BeattysumsError):
    """A lattice operation received the zero integer vector."""
