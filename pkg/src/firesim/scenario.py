"""Scenario files: scripted inputs and expectations against the trace.

A scenario is JSON:

    {
      "name": "two-zone drill",
      "events": [
        {"t": 0,    "op": "set_temp",  "sensor": 1, "value": 65.0},
        {"t": 500,  "op": "send_sms",  "from": "01811111111", "text": "mypass R"},
        {"t": 9000, "op": "expect",    "kind": "RESET", "match": {}}
      ]
    }

Ops: set_temp, set_smoke, press_pw_mode, commit_password, set_threshold_local,
send_sms, expect.  Events are applied at the start of their tick; the loader
returns them time-sorted (stable for equal times).  An expect op checks, at
its own time, that the trace so far contains events of the given kind whose
payload includes every "match" item; "count" pins an exact number, otherwise
at least one is required.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .envmodel import TEMP_MAX_C, TEMP_MIN_C
from .firmware import RANGE_BUTTONS, SELECT_CODES
from .gsm import SMS_MAX_LEN, valid_number


class ScenarioError(ValueError):
    """A scenario file failed to parse or validate."""


@dataclass(frozen=True)
class ScenarioEvent:
    t: int
    op: str
    args: dict

    def to_dict(self) -> dict:
        return {"t": self.t, "op": self.op, **self.args}


@dataclass(frozen=True)
class Scenario:
    name: str
    events: tuple[ScenarioEvent, ...]

    def to_dict(self) -> dict:
        return {"name": self.name, "events": [e.to_dict() for e in self.events]}


def _fail(source: str, index: int, message: str) -> ScenarioError:
    return ScenarioError(f"{source}: event {index}: {message}")


def _need(event: dict, source: str, index: int, key: str, kind: type) -> object:
    if key not in event:
        raise _fail(source, index, f"missing field {key!r}")
    value = event[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise _fail(source, index, f"field {key!r} must be a number")
        return float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise _fail(source, index, f"field {key!r} must be {kind.__name__}")
    return value


def _check_latch(event: dict, source: str, index: int) -> None:
    latch = _need(event, source, index, "latch", int)
    if not 0 <= latch <= 127:
        raise _fail(source, index, f"latch must be 0..127: {latch}")


_KNOWN_KEYS = {
    "set_temp": {"sensor", "value"},
    "set_smoke": {"sensor", "value"},
    "press_pw_mode": {"latch"},
    "commit_password": {"latch"},
    "set_threshold_local": {"latch", "select", "range"},
    "send_sms": {"from", "text"},
    "expect": {"kind", "match", "count"},
}


def _validate(event: dict, source: str, index: int) -> ScenarioEvent:
    if not isinstance(event, dict):
        raise _fail(source, index, "event must be an object")
    t = _need(event, source, index, "t", int)
    if t < 0:
        raise _fail(source, index, f"negative time: {t}")
    op = _need(event, source, index, "op", str)
    if op not in _KNOWN_KEYS:
        raise _fail(source, index, f"unknown op {op!r}")
    extra = set(event) - _KNOWN_KEYS[op] - {"t", "op"}
    if extra:
        raise _fail(source, index, f"unexpected fields for {op}: {sorted(extra)}")

    if op in ("set_temp", "set_smoke"):
        sensor = _need(event, source, index, "sensor", int)
        if sensor not in (1, 2):
            raise _fail(source, index, f"sensor must be 1 or 2: {sensor}")
        value = _need(event, source, index, "value", float)
        low, high = (TEMP_MIN_C, TEMP_MAX_C) if op == "set_temp" else (0.0, 1.0)
        if not low <= value <= high:
            raise _fail(source, index, f"value out of [{low}, {high}]: {value}")
    elif op in ("press_pw_mode", "commit_password"):
        _check_latch(event, source, index)
    elif op == "set_threshold_local":
        _check_latch(event, source, index)
        select = _need(event, source, index, "select", int)
        if select not in SELECT_CODES:
            raise _fail(source, index, f"select must be 0..3: {select}")
        button = _need(event, source, index, "range", str)
        if button not in RANGE_BUTTONS:
            raise _fail(source, index, f"unknown range button: {button!r}")
    elif op == "send_sms":
        sender = _need(event, source, index, "from", str)
        if not valid_number(sender):
            raise _fail(source, index, f"invalid sender number: {sender!r}")
        text = _need(event, source, index, "text", str)
        if len(text) > SMS_MAX_LEN or not text.isascii() or "\r" in text or "\n" in text:
            raise _fail(source, index, "text must be ASCII, single line, <= 160 chars")
    elif op == "expect":
        _need(event, source, index, "kind", str)
        if not isinstance(event.get("match", {}), dict):
            raise _fail(source, index, "match must be an object")
        if "count" in event:
            count = _need(event, source, index, "count", int)
            if count < 0:
                raise _fail(source, index, f"count must be >= 0: {count}")

    args = {k: event[k] for k in event if k not in ("t", "op")}
    return ScenarioEvent(t=t, op=op, args=args)


def parse_scenario(obj: dict, source: str = "<memory>") -> Scenario:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{source}: top level must be an object")
    name = obj.get("name", "unnamed")
    if not isinstance(name, str):
        raise ScenarioError(f"{source}: name must be a string")
    raw_events = obj.get("events", [])
    if not isinstance(raw_events, list):
        raise ScenarioError(f"{source}: events must be a list")
    events = [_validate(e, source, i) for i, e in enumerate(raw_events)]
    events.sort(key=lambda e: e.t)  # stable: same-time events keep file order
    return Scenario(name=name, events=tuple(events))


def load_scenario(path) -> Scenario:
    """Load and validate a scenario file; errors carry line/position info."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_scenario(obj, source=str(path))


def bundled_scenario(name: str) -> Scenario:
    """Load one of the scenarios shipped with the package."""
    ref = resources.files("firesim").joinpath("scenarios", f"{name}.json")
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ScenarioError(f"no bundled scenario named {name!r}") from None
    return parse_scenario(json.loads(text), source=f"bundled:{name}")
