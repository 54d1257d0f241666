"""Accept/reject decision procedures for a verification attempt.

Two matchers share the same result type. The crude matcher accepts when the
candidate has the template's tap count and a total span within the tolerance
band; it never looks at rhythm. The signal matcher gates on span the same
way, then compares duration-normalized occupancy bit vectors by normalized
Hamming distance, so tap counts need not match on that path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import LengthMismatch
from .model import BinarySignal, TapPhrase, Template, normalize, total_span


@dataclass(frozen=True)
class MatchResult:
    """Gate-by-gate outcome of one verification attempt.

    ``distance`` is None for the crude matcher (it has no notion of
    similarity) and for signal matches rejected before the distance was
    computed. ``count_gate_passed`` is None on the signal path, which does
    not gate on tap count.
    """

    accepted: bool
    distance: float | None
    span_gate_passed: bool
    count_gate_passed: bool | None
    candidate_span_ms: float
    template_span_ms: float


def tap_count(phrase: TapPhrase) -> int:
    """Number of taps in a phrase: (segments + 1) / 2."""
    return (len(phrase.segments) + 1) // 2


def span_gate_bounds(template_span: float, tolerance: float) -> tuple[float, float]:
    """Inclusive [lo, hi] band for a candidate's total span.

    Computed exactly as ``(1 - tolerance) * span`` and ``(1 + tolerance) *
    span`` so callers (and tests) can reproduce the bounds bit-for-bit.
    """
    return (1.0 - tolerance) * template_span, (1.0 + tolerance) * template_span


def crude_match(template: Template, candidate: TapPhrase) -> MatchResult:
    """The two-factor rule: equal tap counts and span within tolerance."""
    t_span = total_span(template.phrase)
    c_span = total_span(candidate)
    lo, hi = span_gate_bounds(t_span, template.params.span_tolerance)
    span_ok = lo <= c_span <= hi
    count_ok = tap_count(candidate) == tap_count(template.phrase)
    return MatchResult(
        accepted=span_ok and count_ok,
        distance=None,
        span_gate_passed=span_ok,
        count_gate_passed=count_ok,
        candidate_span_ms=c_span,
        template_span_ms=t_span,
    )


def hamming_distance(a: BinarySignal, b: BinarySignal) -> float:
    """Fraction of disagreeing bits between two equal-length signals."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape:
        raise LengthMismatch(f"signal lengths differ: {a.shape[0]} vs {b.shape[0]}")
    return _kernels.hamming(a, b)


def hamming_match(template: Template, candidate: TapPhrase) -> MatchResult:
    """Span gate, then normalized-signal Hamming distance against ``tau``."""
    params = template.params
    t_span = total_span(template.phrase)
    c_span = total_span(candidate)
    lo, hi = span_gate_bounds(t_span, params.span_tolerance)
    span_ok = lo <= c_span <= hi
    distance = None
    accepted = False
    if span_ok:
        distance = hamming_distance(
            normalize(template.phrase, params.bins), normalize(candidate, params.bins)
        )
        accepted = distance <= params.tau
    return MatchResult(
        accepted=accepted,
        distance=distance,
        span_gate_passed=span_ok,
        count_gate_passed=None,
        candidate_span_ms=c_span,
        template_span_ms=t_span,
    )
