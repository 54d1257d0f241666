import numpy as np
import pytest
from fastapi.testclient import TestClient

from gen import random_stream, random_template
from tapphrase import (
    AuthSession,
    EventKind,
    TapEvent,
    TapPhrase,
    events_from_phrase,
    make_template,
    phrase_from_events,
)
from tapphrase.service import create_app
from tapphrase.trace import load_template

D, U = EventKind.PRESS, EventKind.RELEASE

PHRASE = TapPhrase((200.0, 100.0, 200.0))


def wire_events(events):
    return [{"t": e.t, "k": e.kind.value} for e in events]


@pytest.fixture
def client():
    with TestClient(create_app()) as c:
        yield c


def enroll(client, phrase=PHRASE, params=None):
    body = {"events": wire_events(events_from_phrase(phrase))}
    if params:
        body["params"] = params
    r = client.post("/api/templates", json=body)
    assert r.status_code == 201
    return r.json()


class TestHealthAndListing:
    def test_health(self, client):
        r = client.get("/api/health")
        assert r.status_code == 200 and r.json() == {"ok": True}

    def test_empty_store_lists_nothing(self, client):
        assert client.get("/api/templates").json() == []

    def test_listing_after_enroll(self, client):
        created = enroll(client)
        listed = client.get("/api/templates").json()
        assert len(listed) == 1
        assert listed[0]["id"] == created["id"]
        assert listed[0]["tapCount"] == 2 and listed[0]["spanMs"] == 500.0


class TestEnroll:
    def test_valid_two_tap_stream(self, client):
        body = enroll(client)
        assert body["tapCount"] == 2 and body["spanMs"] == 500.0

    def test_malformed_kind(self, client):
        r = client.post(
            "/api/templates", json={"events": [{"t": 0, "k": "d"}, {"t": 5, "k": "x"}]}
        )
        assert r.status_code == 400
        assert r.json()["error"] == "ParseError"

    def test_dangling_press(self, client):
        events = wire_events(events_from_phrase(PHRASE)) + [{"t": 9000, "k": "d"}]
        r = client.post("/api/templates", json={"events": events})
        assert r.status_code == 400
        assert r.json()["error"] == "DanglingPress"

    def test_alternation_violation(self, client):
        r = client.post(
            "/api/templates", json={"events": [{"t": 0, "k": "d"}, {"t": 5, "k": "d"}]}
        )
        assert r.status_code == 400
        assert r.json()["error"] == "AlternationViolation"

    def test_malformed_json_body(self, client):
        r = client.post(
            "/api/templates", content=b"{nope", headers={"content-type": "application/json"}
        )
        assert r.status_code == 400
        assert r.json()["error"] == "ParseError"

    def test_custom_params_respected(self, client):
        created = enroll(client, params={"bins": 96, "tau": 0.1})
        # invalid params must be rejected before any work happens
        r = client.post(
            "/api/templates",
            json={"events": wire_events(events_from_phrase(PHRASE)), "params": {"tau": 2.0}},
        )
        assert r.status_code == 400 and r.json()["error"] == "InvariantViolation"
        assert created["id"]


class TestVerify:
    def test_exact_replay(self, client):
        tid = enroll(client)["id"]
        r = client.post(
            f"/api/templates/{tid}/verify",
            json={"events": wire_events(events_from_phrase(PHRASE)), "matcher": "hamming"},
        )
        assert r.status_code == 200
        body = r.json()
        assert body["accepted"] is True and body["distance"] == 0.0
        assert body["gates"] == {"span": True}

    def test_unknown_template(self, client):
        r = client.post("/api/templates/nope/verify", json={"events": []})
        assert r.status_code == 404
        assert r.json()["error"] == "UnknownTemplate"

    def test_crude_rejects_slow_replay(self, client):
        tid = enroll(client)["id"]
        slow = TapPhrase(tuple(d * 1.25 for d in PHRASE.segments))
        r = client.post(
            f"/api/templates/{tid}/verify",
            json={"events": wire_events(events_from_phrase(slow)), "matcher": "crude"},
        )
        body = r.json()
        assert body["accepted"] is False
        assert body["gates"]["span"] is False and body["gates"]["count"] is True
        assert "distance" not in body

    def test_bad_matcher_name(self, client):
        tid = enroll(client)["id"]
        r = client.post(f"/api/templates/{tid}/verify", json={"events": [], "matcher": "x"})
        assert r.status_code == 400


class TestSessions:
    def test_replay_accepts_on_final_release(self, client):
        tid = enroll(client)["id"]
        sid = client.post(f"/api/templates/{tid}/sessions").json()["sessionId"]
        responses = [
            client.post(f"/api/sessions/{sid}/events", json=obj).json()
            for obj in wire_events(events_from_phrase(PHRASE))
        ]
        assert [r["accepted"] for r in responses] == [False, False, False, True]
        assert responses[-1]["matchedWindow"] == [0, 3]

    def test_out_of_order_conflict(self, client):
        tid = enroll(client)["id"]
        sid = client.post(f"/api/templates/{tid}/sessions").json()["sessionId"]
        client.post(f"/api/sessions/{sid}/events", json={"t": 100, "k": "d"})
        r = client.post(f"/api/sessions/{sid}/events", json={"t": 50, "k": "u"})
        assert r.status_code == 409
        assert r.json()["error"] == "OutOfOrderEvent"

    def test_push_after_acceptance_conflicts(self, client):
        tid = enroll(client)["id"]
        sid = client.post(f"/api/templates/{tid}/sessions").json()["sessionId"]
        for obj in wire_events(events_from_phrase(PHRASE)):
            client.post(f"/api/sessions/{sid}/events", json=obj)
        r = client.post(f"/api/sessions/{sid}/events", json={"t": 9999, "k": "d"})
        assert r.status_code == 409
        assert r.json()["error"] == "SessionAlreadyDecided"

    def test_noise_then_phrase_window(self, client):
        tid = enroll(client)["id"]
        sid = client.post(f"/api/templates/{tid}/sessions").json()["sessionId"]
        events = [TapEvent(0.0, D), TapEvent(60.0, U)] + events_from_phrase(PHRASE, 1000.0)
        last = None
        for obj in wire_events(events):
            last = client.post(f"/api/sessions/{sid}/events", json=obj).json()
            if last["accepted"]:
                break
        assert last["accepted"] and last["matchedWindow"] == [2, 5]

    def test_delete_session(self, client):
        tid = enroll(client)["id"]
        sid = client.post(f"/api/templates/{tid}/sessions").json()["sessionId"]
        assert client.delete(f"/api/sessions/{sid}").status_code == 204
        r = client.post(f"/api/sessions/{sid}/events", json={"t": 0, "k": "d"})
        assert r.status_code == 404
        assert r.json()["error"] == "UnknownSession"

    def test_unknown_template_for_session(self, client):
        assert client.post("/api/templates/nope/sessions").status_code == 404

    def test_session_expiry_is_resource_reclamation_only(self):
        with TestClient(create_app(session_ttl_s=0.0)) as client:
            tid = enroll(client)["id"]
            sid = client.post(f"/api/templates/{tid}/sessions").json()["sessionId"]
            r = client.post(f"/api/sessions/{sid}/events", json={"t": 0, "k": "d"})
            assert r.status_code == 404


class TestPersistence:
    def test_templates_survive_restart_bit_exactly(self, tmp_path):
        data_dir = str(tmp_path / "store")
        with TestClient(create_app(data_dir=data_dir)) as client:
            created = enroll(client, params={"bins": 96, "tau": 0.11})
            tid = created["id"]
            file_before = (tmp_path / "store" / f"{tid}.json").read_bytes()
        with TestClient(create_app(data_dir=data_dir)) as client:
            listed = client.get("/api/templates").json()
            assert [t["id"] for t in listed] == [tid]
            r = client.post(
                f"/api/templates/{tid}/verify",
                json={"events": wire_events(events_from_phrase(PHRASE))},
            )
            assert r.json()["accepted"] is True
        assert (tmp_path / "store" / f"{tid}.json").read_bytes() == file_before
        reloaded = load_template(str(tmp_path / "store" / f"{tid}.json"))
        assert reloaded.params.bins == 96 and reloaded.params.tau == 0.11


class TestApiEngineEquivalence:
    def test_session_decisions_match_direct_engine(self):
        rng = np.random.default_rng(314)
        with TestClient(create_app()) as client:
            for _ in range(40):
                template = random_template(rng)
                events = random_stream(rng, template, max_events=16)
                enroll_events = events_from_phrase(template.phrase)
                body = {
                    "events": wire_events(enroll_events),
                    "params": {
                        "bins": template.params.bins,
                        "tau": template.params.tau,
                        "spanTolerance": template.params.span_tolerance,
                        "minSegmentMs": template.params.min_segment_ms,
                    },
                }
                tid = client.post("/api/templates", json=body).json()["id"]
                sid = client.post(f"/api/templates/{tid}/sessions").json()["sessionId"]
                # mirror the service: its phrase comes from the posted events
                engine = AuthSession(
                    make_template(phrase_from_events(enroll_events), template.params)
                )
                for ev in events:
                    expected = engine.push_event(ev)
                    got = client.post(
                        f"/api/sessions/{sid}/events", json={"t": ev.t, "k": ev.kind.value}
                    ).json()
                    assert got["accepted"] == expected.accepted
                    if expected.accepted:
                        assert got["matchedWindow"] == list(expected.matched_window)
                        break
