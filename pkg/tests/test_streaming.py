import numpy as np
import pytest

from gen import random_stream, random_template
from oracles import all_accepts_oracle, first_accept_oracle
from tapphrase import (
    AlternationViolation,
    AuthSession,
    EmptyStream,
    EventKind,
    OutOfOrderEvent,
    SessionAlreadyDecided,
    TapEvent,
    TapPhrase,
    events_from_phrase,
    first_acceptance,
    make_template,
    offline_scan,
)

D, U = EventKind.PRESS, EventKind.RELEASE


def ev(*pairs):
    return [TapEvent(t, k) for t, k in pairs]


@pytest.fixture
def template():
    return make_template(TapPhrase((200.0, 100.0, 200.0)))


def drive(session, events):
    """Push until acceptance; returns (decision, index) or (None, None)."""
    for i, e in enumerate(events):
        d = session.push_event(e)
        if d.accepted:
            return d, i
    return None, None


class TestPushEvent:
    def test_exact_replay_accepts_on_final_release(self, template):
        events = events_from_phrase(template.phrase)
        session = AuthSession(template)
        decision, idx = drive(session, events)
        assert decision is not None and idx == 3
        assert decision.matched_window == (0, 3)
        assert decision.result.distance == 0.0
        assert session.decided_at == events[-1].t

    def test_short_stream_not_evaluated(self, template):
        session = AuthSession(template)
        for e in ev((0, D), (50, U)):
            assert not session.push_event(e).accepted
        assert session.decided_at is None

    def test_noise_prefix_then_phrase(self, template):
        events = ev((0, D), (60, U)) + events_from_phrase(template.phrase, 1000.0)
        decision, idx = drive(AuthSession(template), events)
        assert decision is not None and idx == 5
        assert decision.matched_window == (2, 5)
        expected = first_accept_oracle(
            list(template.phrase.segments), 64, 0.15, 0.20, 15.0,
            [(e.t, e.kind.value) for e in events],
        )
        assert expected is not None
        assert decision.matched_window == expected[0]
        assert events[idx].t == expected[1]

    def test_out_of_order_rejected(self, template):
        session = AuthSession(template)
        session.push_event(TapEvent(100.0, D))
        with pytest.raises(OutOfOrderEvent):
            session.push_event(TapEvent(100.0, U))

    def test_alternation_enforced(self, template):
        session = AuthSession(template)
        session.push_event(TapEvent(0.0, D))
        with pytest.raises(AlternationViolation):
            session.push_event(TapEvent(10.0, D))
        with pytest.raises(AlternationViolation):
            AuthSession(template).push_event(TapEvent(0.0, U))

    def test_latched_session_rejects_pushes(self, template):
        session = AuthSession(template)
        drive(session, events_from_phrase(template.phrase))
        with pytest.raises(SessionAlreadyDecided):
            session.push_event(TapEvent(10_000.0, D))

    def test_accepts_only_on_release(self, template):
        events = events_from_phrase(template.phrase)
        session = AuthSession(template)
        for e in events:
            d = session.push_event(e)
            if e.kind is D:
                assert not d.accepted and d.matched_window is None


class TestReset:
    def test_replay_after_reset_accepts_again(self, template):
        session = AuthSession(template)
        first, _ = drive(session, events_from_phrase(template.phrase))
        session.reset()
        second, _ = drive(session, events_from_phrase(template.phrase))
        assert first is not None and second is not None
        assert first.matched_window == second.matched_window

    def test_reset_fresh_session_is_noop(self, template):
        session = AuthSession(template)
        session.reset()
        assert session.state == "idle" and session.buffer == ()

    def test_clock_domain_restarts(self, template):
        session = AuthSession(template)
        session.push_event(TapEvent(5000.0, D))
        session.push_event(TapEvent(5400.0, U))
        session.reset()
        session.push_event(TapEvent(1.0, D))  # earlier than before the reset
        assert session.state == "pressed"


class TestDebounce:
    def test_short_tap_is_retracted(self, template):
        session = AuthSession(template)
        session.push_event(TapEvent(0.0, D))
        session.push_event(TapEvent(5.0, U))  # 5 ms tap, below the 15 ms floor
        assert session.buffer == ()

    def test_short_break_merges_taps(self, template):
        session = AuthSession(template)
        session.push_event(TapEvent(0.0, D))
        session.push_event(TapEvent(100.0, U))
        session.push_event(TapEvent(105.0, D))  # 5 ms break
        assert session.state == "pressed"
        assert [e.t for e in session.buffer] == [0.0]

    def test_merged_tap_can_match(self):
        tmpl = make_template(TapPhrase((500.0,)))
        session = AuthSession(tmpl)
        # two touches separated by a 5 ms bounce form one 500 ms tap
        session.push_event(TapEvent(0.0, D))
        session.push_event(TapEvent(200.0, U))
        session.push_event(TapEvent(205.0, D))
        decision = session.push_event(TapEvent(500.0, U))
        assert decision.accepted
        assert decision.matched_window == (0, 3)

    def test_pre_merge_release_is_still_evaluated(self):
        # a release is tested the moment it survives debounce, even if a
        # later bounce retracts it again
        tmpl = make_template(TapPhrase((200.0,)))
        session = AuthSession(tmpl)
        session.push_event(TapEvent(0.0, D))
        decision = session.push_event(TapEvent(200.0, U))
        assert decision.accepted  # fired before any later merge could retract

    def test_offline_shares_the_debounce_timeline(self):
        tmpl = make_template(TapPhrase((200.0,)))
        events = ev((0, D), (200, U), (205, D), (1000, U))
        decisions = offline_scan(tmpl, events)
        assert decisions and decisions[0].matched_window == (0, 1)


class TestOfflineScan:
    def test_exact_replay_single_window(self, template):
        decisions = offline_scan(template, events_from_phrase(template.phrase))
        assert len(decisions) == 1
        assert decisions[0].matched_window == (0, 3)

    def test_two_disjoint_replays(self, template):
        first = events_from_phrase(template.phrase)
        second = events_from_phrase(template.phrase, 5000.0)
        decisions = offline_scan(template, first + second)
        assert len(decisions) == 2
        assert decisions[0].matched_window == (0, 3)
        assert decisions[1].matched_window == (4, 7)

    def test_empty_stream_rejected(self, template):
        with pytest.raises(EmptyStream):
            offline_scan(template, [])

    def test_randomized_streams_match_independent_reimplementation(self):
        rng = np.random.default_rng(123)
        for _ in range(150):
            template = random_template(rng)
            events = random_stream(rng, template, max_events=20)
            raw = [(e.t, e.kind.value) for e in events]
            got = [
                (d.matched_window, d.result.distance) for d in offline_scan(template, events)
            ]
            params = template.params
            expected = [
                (w, d)
                for (w, _t, d) in all_accepts_oracle(
                    list(template.phrase.segments), params.bins, params.tau,
                    params.span_tolerance, params.min_segment_ms, raw,
                )
            ]
            assert got == expected


class TestStreamingOfflineEquivalence:
    def test_first_acceptance_equivalence(self):
        rng = np.random.default_rng(2024)
        accepted = 0
        for _ in range(400):
            template = random_template(rng)
            events = random_stream(rng, template)
            streamed = first_acceptance(template, events)
            offline = offline_scan(template, events)
            if streamed is None:
                assert offline == []
            else:
                accepted += 1
                assert offline, "streaming accepted but offline saw nothing"
                first = offline[0]
                assert streamed.matched_window == first.matched_window
                assert streamed.result.distance == first.result.distance
        assert accepted > 60  # generator must actually produce matches

    def test_pruning_never_changes_decisions(self):
        rng = np.random.default_rng(77)
        for _ in range(120):
            template = random_template(rng)
            events = random_stream(rng, template, max_events=30)
            pruned = AuthSession(template, prune=True)
            unpruned = AuthSession(template, prune=False)
            for e in events:
                dp = pruned.push_event(e)
                du = unpruned.push_event(e)
                assert dp == du
                if dp.accepted:
                    break

    def test_long_stale_prefix_still_matches(self, template):
        # prefix of old noise far beyond the prune horizon
        events = ev((0, D), (700, U), (1500, D), (2200, U), (3000, D), (3600, U))
        events += events_from_phrase(template.phrase, 10_000.0)
        streamed = first_acceptance(template, events)
        assert streamed is not None
        assert streamed.matched_window == (6, 9)
        offline = offline_scan(template, events)
        assert offline[0].matched_window == (6, 9)

    def test_determinism(self, template):
        rng = np.random.default_rng(5)
        events = random_stream(rng, template)
        runs = []
        for _ in range(2):
            session = AuthSession(template)
            decisions = []
            for e in events:
                d = session.push_event(e)
                decisions.append(d)
                if d.accepted:
                    break
            runs.append(decisions)
        assert runs[0] == runs[1]
