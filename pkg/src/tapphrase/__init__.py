"""Tap-phrase authentication toolkit.

Rhythm secrets on a one-button surface: enrollment, crude and signal-based
matching, a timeout-free streaming authenticator, Monte-Carlo FAR/FRR
estimation, and serialization for traces and templates.
"""

from ._kernels import BACKEND
from .errors import (
    AlternationViolation,
    BinsTooSmall,
    DanglingPress,
    DegenerateSample,
    EmptyInput,
    EmptyStream,
    InvariantViolation,
    LengthMismatch,
    NonMonotonicTimestamps,
    OutOfOrderEvent,
    ParseError,
    SessionAlreadyDecided,
    TapPhraseError,
    UnknownSession,
    UnknownTemplate,
)
from .matchers import (
    MatchResult,
    crude_match,
    hamming_distance,
    hamming_match,
    tap_count,
)
from .model import (
    BinarySignal,
    EventKind,
    MatcherParams,
    TapEvent,
    TapPhrase,
    Template,
    events_from_phrase,
    make_template,
    normalize,
    phrase_from_events,
    scale,
    total_span,
)
from .simulate import (
    Description,
    JitterModel,
    PhraseGenModel,
    RateEstimate,
    SummaryStats,
    TTestResult,
    describe,
    estimate_far,
    estimate_frr,
    gen_random_phrase,
    one_sample_t,
    perturb,
)
from .streaming import AuthDecision, AuthSession, first_acceptance, offline_scan

__version__ = "0.1.0"

__all__ = [
    "AlternationViolation",
    "AuthDecision",
    "AuthSession",
    "BACKEND",
    "BinarySignal",
    "BinsTooSmall",
    "DanglingPress",
    "DegenerateSample",
    "Description",
    "EmptyInput",
    "EmptyStream",
    "EventKind",
    "InvariantViolation",
    "JitterModel",
    "LengthMismatch",
    "MatchResult",
    "MatcherParams",
    "NonMonotonicTimestamps",
    "OutOfOrderEvent",
    "ParseError",
    "PhraseGenModel",
    "RateEstimate",
    "SessionAlreadyDecided",
    "SummaryStats",
    "TTestResult",
    "TapEvent",
    "TapPhrase",
    "TapPhraseError",
    "Template",
    "UnknownSession",
    "UnknownTemplate",
    "crude_match",
    "describe",
    "estimate_far",
    "estimate_frr",
    "events_from_phrase",
    "first_acceptance",
    "gen_random_phrase",
    "hamming_distance",
    "hamming_match",
    "make_template",
    "normalize",
    "offline_scan",
    "one_sample_t",
    "perturb",
    "phrase_from_events",
    "scale",
    "tap_count",
    "total_span",
]
