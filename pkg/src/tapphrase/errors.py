"""Exception types shared across the package.

Class names double as stable error codes: the CLI prints them to stderr and
the HTTP service returns them in the ``error`` field of error bodies.
"""


class TapPhraseError(Exception):
    """Base class for every error raised by this package."""


class InvariantViolation(TapPhraseError):
    """A decoded or constructed value violates a structural invariant."""


class EmptyStream(TapPhraseError):
    """An event stream with no events where at least one is required."""


class NonMonotonicTimestamps(InvariantViolation):
    """Event timestamps are not strictly increasing."""


class AlternationViolation(InvariantViolation):
    """Events do not strictly alternate press/release starting with press."""


class DanglingPress(TapPhraseError):
    """An event stream ends while the surface is still pressed."""


class BinsTooSmall(TapPhraseError):
    """Requested signal resolution is below the supported minimum."""


class LengthMismatch(TapPhraseError):
    """Two binary signals of different lengths were compared."""


class ParseError(TapPhraseError):
    """Syntactically invalid serialized input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OutOfOrderEvent(TapPhraseError):
    """A pushed event is not strictly later than the previous one."""


class SessionAlreadyDecided(TapPhraseError):
    """An event was pushed into a session that has already accepted."""


class DegenerateSample(TapPhraseError):
    """A statistic is undefined for the given sample (n < 2 or sd = 0)."""


class EmptyInput(TapPhraseError):
    """Descriptive statistics require at least one sample."""


class UnknownTemplate(TapPhraseError):
    """No template stored under the given id."""


class UnknownSession(TapPhraseError):
    """No live session stored under the given id."""
