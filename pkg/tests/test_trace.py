"""Canonical trace serialization and divergence reporting."""

import json

from firesim.trace import (TraceEvent, TraceRecorder, compare_traces,
                           render_at_transcript)


def test_seq_strictly_increasing():
    rec = TraceRecorder()
    for i in range(5):
        rec.emit(i * 10, "ENV_SET", sensor="temp1", value=i)
    assert [e.seq for e in rec.events] == [1, 2, 3, 4, 5]


def test_canonical_json_sorted_compact():
    event = TraceEvent(3, 42, "RING", {"to": "01711111111", "from": "01700000000"})
    text = event.to_json()
    assert text == ('{"kind":"RING","payload":{"from":"01700000000",'
                    '"to":"01711111111"},"seq":3,"t":42}')
    assert json.loads(text)["payload"]["to"] == "01711111111"


def test_jsonl_roundtrip(tmp_path):
    rec = TraceRecorder()
    rec.emit(0, "GW_READY")
    rec.emit(5, "AT_TX", data="AT+CMGF=1\r")
    path = tmp_path / "trace.jsonl"
    rec.write_jsonl(path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1])["payload"]["data"] == "AT+CMGF=1\r"


def test_since_and_find():
    rec = TraceRecorder()
    rec.emit(0, "A", x=1)
    rec.emit(1, "B", x=2)
    rec.emit(2, "A", x=3)
    assert [e.seq for e in rec.since(1)] == [2, 3]
    assert [e.payload["x"] for e in rec.find("A")] == [1, 3]
    assert [e.seq for e in rec.find("A", x=3)] == [3]


def test_listener_callback():
    rec = TraceRecorder()
    seen = []
    rec.subscribe(seen.append)
    rec.emit(0, "A")
    assert [e.kind for e in seen] == ["A"]


class TestCompare:
    def test_equal(self):
        a = [TraceEvent(1, 0, "A", {}), TraceEvent(2, 1, "B", {"x": 1})]
        b = [TraceEvent(1, 0, "A", {}), TraceEvent(2, 1, "B", {"x": 1})]
        assert compare_traces(a, b) is None

    def test_payload_divergence_names_seq_and_field(self):
        a = [TraceEvent(1, 0, "A", {}), TraceEvent(2, 1, "B", {"x": 1})]
        b = [TraceEvent(1, 0, "A", {}), TraceEvent(2, 1, "B", {"x": 2})]
        div = compare_traces(a, b)
        assert div is not None
        assert (div.seq, div.field) == (2, "payload")
        assert "seq 2" in str(div)

    def test_time_divergence(self):
        a = [TraceEvent(1, 0, "A", {})]
        b = [TraceEvent(1, 9, "A", {})]
        div = compare_traces(a, b)
        assert (div.seq, div.field) == (1, "t")

    def test_length_divergence(self):
        a = [TraceEvent(1, 0, "A", {})]
        b = [TraceEvent(1, 0, "A", {}), TraceEvent(2, 1, "B", {})]
        div = compare_traces(a, b)
        assert div.field == "length"
        assert div.seq == 2


def test_transcript_rendering():
    rec = TraceRecorder()
    rec.emit(0, "AT_TX", data="AT+CMGF=1\r")
    rec.emit(18, "AT_RX", data="\r\nOK\r\n")
    rec.emit(20, "GW_READY")
    assert render_at_transcript(rec.events) == "TX AT+CMGF=1\\r\nRX \\r\\nOK\\r\\n\n"
