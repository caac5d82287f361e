"""Console round trip, exercised through the live API exactly as the web UI
does it: slider drives smoke 1 to full density, the handset cards fill with
one SMS and one ring each, the composer sends the reset command, the latch
indicator clears, and the recorded op log replays to the identical trace.
"""

import json

import pytest
from fastapi.testclient import TestClient

from firesim.api import create_app
from firesim.scenario import parse_scenario
from firesim.system import SimSystem


@pytest.fixture
def client():
    with TestClient(create_app()) as test_client:
        yield test_client


def step(client, ticks):
    return client.post("/api/step", json={"ticks": ticks}).json()["now"]


def state(client):
    return client.get("/api/state").json()


def test_console_round_trip_and_replay(client):
    step(client, 200)  # boot the gateway

    # slider: smoke 1 -> 1.0  (the console POSTs /api/env on slider change)
    assert client.post("/api/env", json={"sensor": "smoke1", "value": 1.0}).status_code == 200
    step(client, 2000)

    snapshot = state(client)
    assert snapshot["gateway"]["latched"] == ["smoke1"]
    for handset in snapshot["handsets"].values():
        assert len(handset["inbox"]) == 1
        assert "smoke sensor 1" in handset["inbox"][0]["text"]

    # rings arrive one at a time (one call in flight); wait both out
    step(client, 23000)
    snapshot = state(client)
    for handset in snapshot["handsets"].values():
        assert len(handset["rings"]) == 1

    # composer: "mypass R"
    assert client.post("/api/sms",
                       json={"from": "01811111111", "text": "mypass R"}).status_code == 200
    step(client, 4000)
    snapshot = state(client)
    # the latch indicator cleared (smoke still at 1.0 relatches right after,
    # so check the RESET event rather than racing the poller)
    events = client.get("/api/events").json()["events"]
    assert sum(1 for e in events if e["kind"] == "RESET") == 1
    reset_seq = next(e["seq"] for e in events if e["kind"] == "RESET")
    latched_after = [e for e in events
                     if e["kind"] == "ALERT_BYTE" and e["seq"] > reset_seq]
    assert len(latched_after) == 1  # re-trigger after the reset, exactly once

    # timeline invariant: the stream is dense and ordered
    assert [e["seq"] for e in events] == list(range(1, len(events) + 1))

    # the recorded session replays through the scenario runner byte-identically
    now = snapshot["now"]
    oplog = client.get("/api/oplog").json()
    assert [e["op"] for e in oplog["events"]] == ["set_smoke", "send_sms"]

    replay = SimSystem()
    replay.schedule(parse_scenario(oplog))
    replay.step(now)
    live_jsonl = "".join(
        json.dumps(e, sort_keys=True, separators=(",", ":")) + "\n" for e in events)
    assert replay.trace.to_jsonl() == live_jsonl


def test_oplog_replays_through_the_cli(client, tmp_path):
    from firesim.cli import main

    step(client, 200)
    client.post("/api/env", json={"sensor": "smoke1", "value": 1.0})
    now = step(client, 3000)

    oplog_path = tmp_path / "session.json"
    oplog_path.write_text(json.dumps(client.get("/api/oplog").json()))
    trace_path = tmp_path / "replay.jsonl"
    assert main(["run", "--scenario", str(oplog_path), "--duration", str(now),
                 "--trace", str(trace_path)]) == 0

    live_jsonl = "".join(
        json.dumps(e, sort_keys=True, separators=(",", ":")) + "\n"
        for e in client.get("/api/events").json()["events"])
    assert trace_path.read_text() == live_jsonl
