"""Core domain types: events, phrases, templates and signal normalization.

A tap phrase is the secret itself: the ordered durations of taps (surface
pressed) and breaks (surface released) on a one-button input. Everything in
this module is an immutable value; operations are pure functions and safe
for concurrent use.
"""

from __future__ import annotations

import math
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import (
    AlternationViolation,
    BinsTooSmall,
    DanglingPress,
    EmptyStream,
    InvariantViolation,
    NonMonotonicTimestamps,
)

#: Signals are plain uint8 arrays of 0/1 occupancy samples; the array length
#: always equals the ``bins`` value used to produce it.
BinarySignal = np.ndarray

MIN_BINS = 8


class EventKind(str, Enum):
    """Edge direction of a tap event; wire values are "d" (down) and "u" (up)."""

    PRESS = "d"
    RELEASE = "u"


@dataclass(frozen=True)
class TapEvent:
    """A single press or release edge at a monotonic millisecond timestamp."""

    t: float
    kind: EventKind

    def __post_init__(self):
        t = float(self.t)
        if not math.isfinite(t) or t < 0:
            raise InvariantViolation(f"event timestamp must be finite and >= 0, got {self.t!r}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "kind", EventKind(self.kind))


@dataclass(frozen=True)
class TapPhrase:
    """Alternating tap/break durations in milliseconds; index 0 is a tap.

    A phrase starts and ends with a tap, so the segment count is odd and at
    least 1. Every duration is strictly positive: leading or trailing breaks
    are unobservable on a press/release surface, and zero-length segments are
    a producer bug (debounce first).
    """

    segments: tuple[float, ...]

    def __post_init__(self):
        segs = tuple(float(d) for d in self.segments)
        if len(segs) == 0 or len(segs) % 2 == 0:
            raise InvariantViolation(
                f"phrase needs an odd number of segments >= 1, got {len(segs)}"
            )
        for d in segs:
            if not math.isfinite(d) or d <= 0:
                raise InvariantViolation(f"segment durations must be finite and > 0, got {d!r}")
        object.__setattr__(self, "segments", segs)

    def __len__(self) -> int:
        return len(self.segments)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.segments, dtype=np.float64)


@dataclass(frozen=True)
class MatcherParams:
    """Tunables shared by the matchers and the streaming authenticator.

    ``span_tolerance`` is the +/-20% total-duration gate by default; ``bins``
    and ``tau`` control the occupancy-signal comparison; ``min_segment_ms``
    is the debounce floor applied by the streaming authenticator.
    """

    bins: int = 64
    tau: float = 0.15
    span_tolerance: float = 0.20
    min_segment_ms: float = 15.0

    def __post_init__(self):
        if self.bins < MIN_BINS:
            raise InvariantViolation(f"bins must be >= {MIN_BINS}, got {self.bins}")
        if not 0 < self.tau < 1:
            raise InvariantViolation(f"tau must be in (0, 1), got {self.tau}")
        if not 0 < self.span_tolerance < 1:
            raise InvariantViolation(
                f"span_tolerance must be in (0, 1), got {self.span_tolerance}"
            )
        if self.min_segment_ms < 0:
            raise InvariantViolation(
                f"min_segment_ms must be >= 0, got {self.min_segment_ms}"
            )


@dataclass(frozen=True)
class Template:
    """An enrolled phrase plus the matcher parameters it was enrolled with."""

    id: str
    phrase: TapPhrase
    params: MatcherParams = field(default_factory=MatcherParams)
    created_at: float = 0.0


def make_template(
    phrase: TapPhrase,
    params: MatcherParams | None = None,
    template_id: str | None = None,
    created_at: float | None = None,
) -> Template:
    """Build a template with a fresh opaque id and wall-clock timestamp."""
    return Template(
        id=template_id if template_id is not None else uuid.uuid4().hex,
        phrase=phrase,
        params=params if params is not None else MatcherParams(),
        created_at=created_at if created_at is not None else time.time(),
    )


def validate_event_stream(events: Sequence[TapEvent]) -> None:
    """Check order and alternation invariants of an event sequence.

    Raises EmptyStream, NonMonotonicTimestamps or AlternationViolation. Does
    not require the stream to end with a release; use phrase_from_events for
    that stricter contract.
    """
    if len(events) == 0:
        raise EmptyStream("event stream is empty")
    if events[0].kind is not EventKind.PRESS:
        raise AlternationViolation("event stream must start with a press")
    prev_t = None
    expected = EventKind.PRESS
    for i, ev in enumerate(events):
        if prev_t is not None and ev.t <= prev_t:
            raise NonMonotonicTimestamps(
                f"event {i}: t={ev.t} is not after previous t={prev_t}"
            )
        if ev.kind is not expected:
            raise AlternationViolation(
                f"event {i}: expected {expected.name.lower()}, got {ev.kind.name.lower()}"
            )
        prev_t = ev.t
        expected = EventKind.RELEASE if expected is EventKind.PRESS else EventKind.PRESS


def phrase_from_events(events: Sequence[TapEvent]) -> TapPhrase:
    """Turn a complete press/release stream into its tap phrase.

    Segment i is the time between consecutive edges, so taps land at even
    indices and breaks at odd indices. The stream must start with a press and
    end with a release; DanglingPress is raised otherwise.
    """
    validate_event_stream(events)
    if events[-1].kind is not EventKind.RELEASE:
        raise DanglingPress("event stream ends while pressed")
    segments = [b.t - a.t for a, b in zip(events, events[1:])]
    return TapPhrase(tuple(segments))


def total_span(phrase: TapPhrase) -> float:
    """Total phrase duration in milliseconds.

    Uses exact summation so the result is independent of segment order;
    span-gate decisions must not depend on how a candidate was assembled.
    """
    return math.fsum(phrase.segments)


def scale(phrase: TapPhrase, factor: float) -> TapPhrase:
    """Uniformly time-scale a phrase by a positive factor."""
    if not math.isfinite(factor) or factor <= 0:
        raise InvariantViolation(f"scale factor must be finite and > 0, got {factor!r}")
    return TapPhrase(tuple(d * factor for d in phrase.segments))


def normalize(phrase: TapPhrase, bins: int) -> BinarySignal:
    """Discretize a phrase into a fixed-length occupancy bit vector.

    Bin i samples the phrase at time ``(i + 0.5) / bins * total_span``; the
    bit is 1 when that instant falls inside a tap. A sample landing exactly
    on a segment boundary belongs to the later segment, and the phrase end
    belongs to the final tap. The first and last bins are anchored to 1:
    every valid phrase starts and ends with a tap, and anchoring keeps that
    true even when a terminal tap is shorter than half a bin. The output
    depends only on duration ratios, so it is invariant under uniform time
    scaling.
    """
    if bins < MIN_BINS:
        raise BinsTooSmall(f"bins must be >= {MIN_BINS}, got {bins}")
    return _kernels.normalize_bits(phrase.as_array(), int(bins))


def events_from_phrase(phrase: TapPhrase, start_t: float = 0.0) -> list[TapEvent]:
    """Replay a phrase as an event stream beginning at ``start_t``."""
    events = [TapEvent(start_t, EventKind.PRESS)]
    t = start_t
    for i, d in enumerate(phrase.segments):
        t += d
        kind = EventKind.RELEASE if i % 2 == 0 else EventKind.PRESS
        events.append(TapEvent(t, kind))
    return events
