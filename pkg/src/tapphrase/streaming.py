"""Timeout-free streaming authentication over raw press/release events.

An AuthSession consumes one event at a time and, on every release edge,
tests every retained window ``[press .. release]`` against the template's
signal matcher. Acceptance therefore fires the instant a matching window
closes; the passage of time alone never produces a decision.

Debounce happens at the event level before evaluation, using the template's
``min_segment_ms`` floor:

- a release closing a tap shorter than the floor retracts the tap (press and
  release both vanish from the evaluated view);
- a press arriving less than the floor after the previous release retracts
  that release, so the previous tap simply continues.

Raw events stay visible to the caller for logging; the retained buffer is
the debounced view. Because a retraction can remove a release that was
already evaluated, the evaluated-window timeline is defined per raw prefix:
a release is evaluated at the moment it survives debounce, even if a later
merge removes it again. ``offline_scan`` replays the identical timeline,
which is what makes it a usable oracle for the streaming path.

Buffer pruning drops leading press/release pairs whose press is too old to
ever start a window inside the span gate again, always retaining one extra
pair beyond the strict bound. Pruning is purely a memory bound; it never
changes a decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    AlternationViolation,
    OutOfOrderEvent,
    SessionAlreadyDecided,
)
from .matchers import MatchResult, span_gate_bounds
from .model import (
    EventKind,
    TapEvent,
    Template,
    normalize,
    total_span,
    validate_event_stream,
)


@dataclass(frozen=True)
class AuthDecision:
    """Outcome of one pushed event; accepted iff a window matched."""

    accepted: bool
    matched_window: tuple[int, int] | None
    result: MatchResult | None


_REJECT = AuthDecision(accepted=False, matched_window=None, result=None)


def _debounce_push(times: list[float], raw_ids: list[int], t: float,
                   is_press: bool, raw_id: int, floor: float) -> bool:
    """Apply one raw event to the debounced buffer; True if it was appended."""
    if is_press:
        if times and (t - times[-1]) < floor:
            # short break: retract the previous release, the tap continues
            times.pop()
            raw_ids.pop()
            return False
        times.append(t)
        raw_ids.append(raw_id)
        return True
    # buffer always ends with the owning press when a release arrives
    if (t - times[-1]) < floor:
        # short tap: retract it entirely
        times.pop()
        raw_ids.pop()
        return False
    times.append(t)
    raw_ids.append(raw_id)
    return True


class AuthSession:
    """Single-template streaming authenticator; one caller at a time.

    The session owns a per-stream clock domain: timestamps only need to be
    strictly increasing within the session, and reset() restarts the domain.
    After an acceptance the decision latches; further pushes raise
    SessionAlreadyDecided until reset().
    """

    def __init__(self, template: Template, prune: bool = True):
        self.template = template
        self._prune_enabled = prune
        params = template.params
        self._floor = params.min_segment_ms
        self._tau = params.tau
        self._tmpl_bits = normalize(template.phrase, params.bins)
        self._tmpl_span = total_span(template.phrase)
        self._lo, self._hi = span_gate_bounds(self._tmpl_span, params.span_tolerance)
        self.reset()

    # -- public state ---------------------------------------------------

    @property
    def state(self) -> str:
        return "pressed" if len(self._times) % 2 == 1 else "idle"

    @property
    def decided_at(self) -> float | None:
        return self._decided_at

    @property
    def buffer(self) -> tuple[TapEvent, ...]:
        """The retained (debounced) events; presses at even positions."""
        return tuple(
            TapEvent(t, EventKind.PRESS if i % 2 == 0 else EventKind.RELEASE)
            for i, t in enumerate(self._times)
        )

    def reset(self) -> None:
        """Clear buffer, latch and clock domain."""
        self._times: list[float] = []
        self._raw_ids: list[int] = []
        self._n_raw = 0
        self._last_raw_t: float | None = None
        self._raw_pressed = False
        self._decided_at: float | None = None
        self._decision: AuthDecision | None = None

    # -- event intake ------------------------------------------------------

    def push_event(self, event: TapEvent) -> AuthDecision:
        """Feed one event; returns the (possibly accepting) decision.

        Raises OutOfOrderEvent on a non-increasing timestamp,
        AlternationViolation on press-while-pressed or release-while-idle,
        and SessionAlreadyDecided once a previous push accepted.
        """
        if self._decision is not None:
            raise SessionAlreadyDecided("session already accepted; reset() first")
        if self._last_raw_t is not None and event.t <= self._last_raw_t:
            raise OutOfOrderEvent(
                f"event at t={event.t} is not after previous t={self._last_raw_t}"
            )
        is_press = event.kind is EventKind.PRESS
        if is_press == self._raw_pressed:
            expected = "release" if self._raw_pressed else "press"
            raise AlternationViolation(f"expected a {expected} at t={event.t}")

        raw_id = self._n_raw
        self._n_raw += 1
        self._last_raw_t = event.t
        self._raw_pressed = is_press

        appended = _debounce_push(
            self._times, self._raw_ids, event.t, is_press, raw_id, self._floor
        )

        decision = _REJECT
        if appended and not is_press:
            decision = self._evaluate(event.t, raw_id)
        if decision.accepted:
            self._decision = decision
            self._decided_at = event.t
        elif self._prune_enabled:
            self._prune(event.t)
        return decision

    # -- internals -------------------------------------------------------

    def _evaluate(self, t_release: float, raw_id: int) -> AuthDecision:
        rel_idx = len(self._times) - 1
        times = np.asarray(self._times, dtype=np.float64)
        p_idx, dist = _kernels.scan_release(
            times, rel_idx, self._tmpl_bits, self._lo, self._hi, self._tau
        )
        if p_idx < 0:
            return _REJECT
        result = MatchResult(
            accepted=True,
            distance=float(dist),
            span_gate_passed=True,
            count_gate_passed=None,
            candidate_span_ms=t_release - self._times[p_idx],
            template_span_ms=self._tmpl_span,
        )
        return AuthDecision(
            accepted=True,
            matched_window=(self._raw_ids[p_idx], raw_id),
            result=result,
        )

    def _prune(self, now: float) -> None:
        n_pairs = len(self._times) // 2
        stale = 0
        while stale < n_pairs and now - self._times[2 * stale] > self._hi:
            stale += 1
        stale = max(0, stale - 1)  # one extra pair beyond the strict bound
        if stale:
            del self._times[: 2 * stale]
            del self._raw_ids[: 2 * stale]


def offline_scan(template: Template, events: list[TapEvent]) -> list[AuthDecision]:
    """Brute-force sweep over every candidate window, in end-event order.

    Replays the stream through the same debounce timeline as a session (no
    pruning, no latch) and reports every accepting window at each surviving
    release, earliest start first. The first decision returned is exactly
    the one a fresh AuthSession would latch on.
    """
    validate_event_stream(events)
    params = template.params
    tmpl_bits = normalize(template.phrase, params.bins)
    tmpl_span = total_span(template.phrase)
    lo, hi = span_gate_bounds(tmpl_span, params.span_tolerance)

    times: list[float] = []
    raw_ids: list[int] = []
    decisions: list[AuthDecision] = []
    for raw_id, ev in enumerate(events):
        is_press = ev.kind is EventKind.PRESS
        appended = _debounce_push(times, raw_ids, ev.t, is_press, raw_id, params.min_segment_ms)
        if not appended or is_press:
            continue
        rel_idx = len(times) - 1
        arr = np.asarray(times, dtype=np.float64)
        hits, dists = _kernels.scan_release_all(arr, rel_idx, tmpl_bits, lo, hi, params.tau)
        for p_idx, dist in zip(hits.tolist(), dists.tolist()):
            result = MatchResult(
                accepted=True,
                distance=float(dist),
                span_gate_passed=True,
                count_gate_passed=None,
                candidate_span_ms=ev.t - times[p_idx],
                template_span_ms=tmpl_span,
            )
            decisions.append(
                AuthDecision(
                    accepted=True,
                    matched_window=(raw_ids[p_idx], raw_id),
                    result=result,
                )
            )
    return decisions


def first_acceptance(template: Template, events: list[TapEvent]) -> AuthDecision | None:
    """Streaming run over a complete event list; the latched decision or None."""
    session = AuthSession(template)
    for ev in events:
        decision = session.push_event(ev)
        if decision.accepted:
            return decision
    return None
