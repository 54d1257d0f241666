"""Local HTTP API: enrollment, one-shot verification and streaming sessions.

This is a demo/testing surface for the matching engine, not a hardened
credential service: it binds to localhost by default, sends permissive
cross-origin headers so a static demo page can talk to it, and does no
authentication of its own. Timestamps always come from the client (captured
at the input device); the server only checks per-session ordering, so
network jitter cannot corrupt a rhythm.

Wire format: JSON bodies as documented per route; errors are
``{"error": <exception name>, "detail": <message>}`` with 400 for malformed
input, 404 for unknown ids and 409 for session-state conflicts.
"""

from __future__ import annotations

import os
import threading
import time
import uuid

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .errors import (
    AlternationViolation,
    OutOfOrderEvent,
    ParseError,
    SessionAlreadyDecided,
    TapPhraseError,
    UnknownSession,
    UnknownTemplate,
)
from .matchers import crude_match, hamming_match, tap_count
from .model import MatcherParams, Template, make_template, phrase_from_events, total_span
from .streaming import AuthSession
from .trace import decode_template, encode_template, event_from_obj

_SESSION_TTL_S = 300.0

_CONFLICT_ERRORS = (OutOfOrderEvent, SessionAlreadyDecided, AlternationViolation)
_NOT_FOUND_ERRORS = (UnknownTemplate, UnknownSession)


class TemplateStore:
    """Id-keyed template map with optional directory persistence.

    With a data directory, every template is written to ``<id>.json`` on add
    and reloaded on construction, so a restarted service sees bit-identical
    templates. Reads are cheap; writes hold the store lock.
    """

    def __init__(self, data_dir: str | None = None):
        self._templates: dict[str, Template] = {}
        self._lock = threading.Lock()
        self._data_dir = data_dir
        if data_dir:
            os.makedirs(data_dir, exist_ok=True)
            for name in sorted(os.listdir(data_dir)):
                if not name.endswith(".json"):
                    continue
                with open(os.path.join(data_dir, name), encoding="utf-8") as f:
                    tmpl = decode_template(f.read())
                self._templates[tmpl.id] = tmpl

    def add(self, template: Template) -> None:
        with self._lock:
            self._templates[template.id] = template
            if self._data_dir:
                path = os.path.join(self._data_dir, f"{template.id}.json")
                with open(path, "w", encoding="utf-8") as f:
                    f.write(encode_template(template))

    def get(self, template_id: str) -> Template:
        with self._lock:
            try:
                return self._templates[template_id]
            except KeyError:
                raise UnknownTemplate(template_id) from None

    def list(self) -> list[Template]:
        with self._lock:
            return list(self._templates.values())


class _LiveSession:
    __slots__ = ("session", "lock", "last_activity")

    def __init__(self, session: AuthSession):
        self.session = session
        self.lock = threading.Lock()
        self.last_activity = time.monotonic()


class SessionStore:
    """Live streaming sessions with idle expiry.

    Expiry is resource reclamation only: an expired session id simply
    becomes unknown, it never alters the decisions of a live one.
    """

    def __init__(self, ttl_s: float = _SESSION_TTL_S):
        self._sessions: dict[str, _LiveSession] = {}
        self._lock = threading.Lock()
        self._ttl_s = ttl_s

    def _purge(self) -> None:
        now = time.monotonic()
        dead = [sid for sid, s in self._sessions.items() if now - s.last_activity > self._ttl_s]
        for sid in dead:
            del self._sessions[sid]

    def create(self, template: Template) -> str:
        sid = uuid.uuid4().hex
        with self._lock:
            self._purge()
            self._sessions[sid] = _LiveSession(AuthSession(template))
        return sid

    def get(self, sid: str) -> _LiveSession:
        with self._lock:
            self._purge()
            try:
                live = self._sessions[sid]
            except KeyError:
                raise UnknownSession(sid) from None
            live.last_activity = time.monotonic()
            return live

    def delete(self, sid: str) -> None:
        with self._lock:
            if sid not in self._sessions:
                raise UnknownSession(sid)
            del self._sessions[sid]


def _error_body(exc: Exception) -> dict:
    return {"error": type(exc).__name__, "detail": str(exc)}


def _parse_events(body: dict):
    events = body.get("events")
    if not isinstance(events, list):
        raise ParseError("body needs an 'events' array")
    return [event_from_obj(obj, i + 1) for i, obj in enumerate(events)]


def _parse_params(body: dict) -> MatcherParams:
    obj = body.get("params") or {}
    if not isinstance(obj, dict):
        raise ParseError("'params' must be an object")
    try:
        return MatcherParams(
            bins=int(obj.get("bins", 64)),
            tau=float(obj.get("tau", 0.15)),
            span_tolerance=float(obj.get("spanTolerance", 0.20)),
            min_segment_ms=float(obj.get("minSegmentMs", 15.0)),
        )
    except (TypeError, ValueError) as e:
        raise ParseError(f"malformed params: {e}") from None


def create_app(data_dir: str | None = None, session_ttl_s: float = _SESSION_TTL_S) -> FastAPI:
    """Build the application; state is per-app so tests can run many."""
    app = FastAPI(title="tapphrase service", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    templates = TemplateStore(data_dir)
    sessions = SessionStore(session_ttl_s)
    app.state.templates = templates
    app.state.sessions = sessions

    @app.exception_handler(TapPhraseError)
    async def _tap_error(request: Request, exc: TapPhraseError):
        if isinstance(exc, _NOT_FOUND_ERRORS):
            status = 404
        elif isinstance(exc, _CONFLICT_ERRORS) and request.url.path.startswith("/api/sessions/"):
            status = 409
        else:
            status = 400
        return JSONResponse(status_code=status, content=_error_body(exc))

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "ParseError", "detail": "malformed JSON body"},
        )

    @app.get("/api/health")
    def health():
        return {"ok": True}

    @app.get("/api/templates")
    def list_templates():
        return [
            {
                "id": t.id,
                "tapCount": tap_count(t.phrase),
                "spanMs": total_span(t.phrase),
                "createdAt": t.created_at,
            }
            for t in templates.list()
        ]

    @app.post("/api/templates", status_code=201)
    def enroll(body: dict):
        events = _parse_events(body)
        params = _parse_params(body)
        phrase = phrase_from_events(events)
        template = make_template(phrase, params)
        templates.add(template)
        return {
            "id": template.id,
            "tapCount": tap_count(phrase),
            "spanMs": total_span(phrase),
        }

    @app.post("/api/templates/{template_id}/verify")
    def verify(template_id: str, body: dict):
        template = templates.get(template_id)
        matcher = body.get("matcher", "hamming")
        if matcher not in ("crude", "hamming"):
            raise ParseError(f"matcher must be 'crude' or 'hamming', got {matcher!r}")
        candidate = phrase_from_events(_parse_events(body))
        match = crude_match if matcher == "crude" else hamming_match
        result = match(template, candidate)
        payload: dict = {"accepted": result.accepted, "gates": {"span": result.span_gate_passed}}
        if result.count_gate_passed is not None:
            payload["gates"]["count"] = result.count_gate_passed
        if result.distance is not None:
            payload["distance"] = result.distance
        return payload

    @app.post("/api/templates/{template_id}/sessions", status_code=201)
    def create_session(template_id: str):
        template = templates.get(template_id)
        return {"sessionId": sessions.create(template)}

    @app.post("/api/sessions/{sid}/events")
    def push_event(sid: str, body: dict):
        live = sessions.get(sid)
        event = event_from_obj(body)
        with live.lock:
            decision = live.session.push_event(event)
        payload: dict = {"accepted": decision.accepted}
        if decision.matched_window is not None:
            payload["matchedWindow"] = list(decision.matched_window)
        return payload

    @app.delete("/api/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        sessions.delete(sid)
        return Response(status_code=204)

    return app
