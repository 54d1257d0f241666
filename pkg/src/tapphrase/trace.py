"""Serialization of event traces, phrases and templates.

Event traces are JSON Lines: one object per event with fields ``t``
(milliseconds, serialized at 0.1 ms precision) and ``k`` ("d" for press,
"u" for release), ordered by ``t``. Phrases are a single JSON object with a
``segments`` array. Templates bundle a phrase with matcher parameters and
identity; their files round-trip bit-exactly, which is what the service's
persistence guarantee rests on. All files are UTF-8.
"""

from __future__ import annotations

import json
import math
from typing import Any, Sequence

from .errors import InvariantViolation, ParseError
from .model import (
    EventKind,
    MatcherParams,
    TapEvent,
    TapPhrase,
    Template,
    validate_event_stream,
)

_KINDS = {"d": EventKind.PRESS, "u": EventKind.RELEASE}


# -- events -------------------------------------------------------------------

def encode_events(events: Sequence[TapEvent]) -> str:
    """One JSON object per line; timestamps rounded to 0.1 ms."""
    lines = [
        json.dumps({"t": round(ev.t, 1), "k": ev.kind.value}, separators=(",", ":"))
        for ev in events
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def event_from_obj(obj: Any, line: int | None = None) -> TapEvent:
    """Validate one ``{t, k}`` object; shared by file and HTTP parsers."""
    if not isinstance(obj, dict):
        raise ParseError(f"expected an object, got {type(obj).__name__}", line)
    unknown = set(obj) - {"t", "k"}
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}", line)
    if "t" not in obj or "k" not in obj:
        raise ParseError("event needs fields 't' and 'k'", line)
    t, k = obj["t"], obj["k"]
    if isinstance(t, bool) or not isinstance(t, (int, float)):
        raise ParseError(f"'t' must be a number, got {t!r}", line)
    if not math.isfinite(t) or t < 0:
        raise ParseError(f"'t' must be finite and >= 0, got {t!r}", line)
    if k not in _KINDS:
        raise ParseError(f"'k' must be 'd' or 'u', got {k!r}", line)
    return TapEvent(float(t), _KINDS[k])


def decode_events(text: str) -> list[TapEvent]:
    """Parse a JSON Lines trace and check event-stream invariants.

    Raises ParseError (with a line number) for syntactic problems and
    InvariantViolation subclasses for ordering/alternation violations. An
    empty trace decodes to an empty list.
    """
    events = []
    for i, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(str(e), i) from None
        events.append(event_from_obj(obj, i))
    if events:
        validate_event_stream(events)
    return events


# -- phrases ------------------------------------------------------------------

def encode_phrase(phrase: TapPhrase) -> str:
    return json.dumps({"segments": list(phrase.segments)}) + "\n"


def decode_phrase(text: str) -> TapPhrase:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(str(e)) from None
    if not isinstance(obj, dict) or "segments" not in obj:
        raise ParseError("phrase file must be an object with a 'segments' array")
    segments = obj["segments"]
    if not isinstance(segments, list):
        raise ParseError("'segments' must be an array")
    for d in segments:
        if isinstance(d, bool) or not isinstance(d, (int, float)):
            raise ParseError(f"segment durations must be numbers, got {d!r}")
    return TapPhrase(tuple(float(d) for d in segments))


# -- templates ----------------------------------------------------------------

def template_to_dict(template: Template) -> dict:
    return {
        "id": template.id,
        "createdAt": template.created_at,
        "params": {
            "bins": template.params.bins,
            "tau": template.params.tau,
            "spanTolerance": template.params.span_tolerance,
            "minSegmentMs": template.params.min_segment_ms,
        },
        "phrase": {"segments": list(template.phrase.segments)},
    }


def template_from_dict(obj: Any) -> Template:
    if not isinstance(obj, dict):
        raise ParseError(f"template must be an object, got {type(obj).__name__}")
    try:
        params_obj = obj.get("params", {})
        params = MatcherParams(
            bins=int(params_obj.get("bins", 64)),
            tau=float(params_obj.get("tau", 0.15)),
            span_tolerance=float(params_obj.get("spanTolerance", 0.20)),
            min_segment_ms=float(params_obj.get("minSegmentMs", 15.0)),
        )
        phrase = TapPhrase(tuple(float(d) for d in obj["phrase"]["segments"]))
        return Template(
            id=str(obj["id"]),
            phrase=phrase,
            params=params,
            created_at=float(obj.get("createdAt", 0.0)),
        )
    except InvariantViolation:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed template: {e}") from None


def encode_template(template: Template) -> str:
    return json.dumps(template_to_dict(template), indent=2) + "\n"


def decode_template(text: str) -> Template:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(str(e)) from None
    return template_from_dict(obj)


# -- file helpers --------------------------------------------------------------

def load_events(path: str) -> list[TapEvent]:
    with open(path, encoding="utf-8") as f:
        return decode_events(f.read())


def save_events(path: str, events: Sequence[TapEvent]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(encode_events(events))


def load_template(path: str) -> Template:
    with open(path, encoding="utf-8") as f:
        return decode_template(f.read())


def save_template(path: str, template: Template) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(encode_template(template))
