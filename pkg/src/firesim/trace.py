"""Trace events: the unit of observability and of determinism testing.

Every observable action in a run appends one TraceEvent with a strictly
increasing sequence number.  Canonical serialization is one compact JSON
object per line with sorted keys, so identical runs produce byte-identical
files and divergences diff cleanly.

Kinds emitted by the standard system:

    ENV_SET            environment value injected
    FW_ALERT_BEGIN/END sensor's alert stream started / stopped
    FW_IGNORED         serial byte the MCU does not understand
    THRESHOLD_SET      threshold applied (source: local | remote)
    BUTTON_REJECTED    front-panel action refused (bad latch / wrong button)
    PW_MODE PW_COMMIT  password window opened / commit attempted
    ALERT_BYTE         gateway latched a new episode for a sensor
    UNKNOWN_BYTE       gateway read a byte that maps to no sensor
    AT_TX AT_RX        command line sent / response block received
    GW_READY           modem initialization completed
    STARTUP_FAILED     modem initialization aborted
    DISPATCH_ERROR     one send/call step of a dispatch failed
    REMOTE_CMD         remote command forwarded to the MCU
    CMD_REJECTED       remote command refused (format or password)
    RESET              alert latches cleared by remote command
    SMS_RECEIVED       inbound SMS stored on the SIM
    SIM_FULL           inbound SMS dropped, no free slot
    SMS_DELIVERED      outbound SMS reached a handset
    SMS_DROPPED        outbound SMS addressed an unknown number
    RING RING_DROPPED  call reached (or failed to reach) a handset
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    t: int
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "t": self.t, "kind": self.kind, "payload": self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


class TraceRecorder:
    """Appends events and hands them out; listeners get a callback per event."""

    def __init__(self) -> None:
        self.events: list[TraceEvent] = []
        self._listeners: list[Callable[[TraceEvent], None]] = []

    def emit(self, t: int, kind: str, **payload) -> TraceEvent:
        event = TraceEvent(len(self.events) + 1, t, kind, payload)
        self.events.append(event)
        for listener in self._listeners:
            listener(event)
        return event

    def subscribe(self, listener: Callable[[TraceEvent], None]) -> None:
        self._listeners.append(listener)

    def since(self, seq: int) -> list[TraceEvent]:
        # seq numbers are dense and 1-based: events[seq:] is everything after seq
        return self.events[seq:]

    @property
    def last_seq(self) -> int:
        return len(self.events)

    def find(self, kind: str, **payload) -> list[TraceEvent]:
        """Events of a kind whose payload contains every given item."""
        return [e for e in self.events if e.kind == kind
                and all(e.payload.get(k) == v for k, v in payload.items())]

    def to_jsonl(self) -> str:
        return "".join(e.to_json() + "\n" for e in self.events)

    def write_jsonl(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_jsonl())


@dataclass(frozen=True)
class Divergence:
    seq: int
    field: str
    a: object
    b: object

    def __str__(self) -> str:
        return f"traces diverge at seq {self.seq}, field {self.field!r}: {self.a!r} != {self.b!r}"


def compare_traces(a: Iterable[TraceEvent], b: Iterable[TraceEvent]) -> Divergence | None:
    """None when equal, else the first differing (seq, field)."""
    a = list(a)
    b = list(b)
    for ea, eb in zip(a, b):
        for fieldname in ("seq", "t", "kind", "payload"):
            va, vb = getattr(ea, fieldname), getattr(eb, fieldname)
            if va != vb:
                return Divergence(ea.seq, fieldname, va, vb)
    if len(a) != len(b):
        longer = a if len(a) > len(b) else b
        extra = longer[min(len(a), len(b))]
        return Divergence(extra.seq, "length", len(a), len(b))
    return None


def render_at_transcript(events: Iterable[TraceEvent]) -> str:
    """Human-diffable view of the modem channel: one escaped line per AT event."""
    lines = []
    for event in events:
        if event.kind == "AT_TX":
            lines.append("TX " + _escape(event.payload["data"]))
        elif event.kind == "AT_RX":
            lines.append("RX " + _escape(event.payload["data"]))
    return "".join(line + "\n" for line in lines)


def _escape(text: str) -> str:
    return text.encode("unicode_escape").decode("ascii")
