"""Gateway semantics: init, latching, fan-out, SIM sweeps, remote commands."""

import pytest

from firesim.gateway import (Gateway, GatewayConfig, RemoteCommand,
                             parse_remote_command)
from firesim.gsm import ERROR_BLOCK
from firesim.scenario import parse_scenario
from firesim.serialnet import standard_registry
from firesim.system import SimSystem, SystemConfig
from firesim.trace import TraceRecorder

D1, D2 = "01711111111", "01811111111"


def system_with(scenario_events, ticks, **gateway_overrides):
    kwargs = {"destinations": (D1, D2), "server_password": "mypass"}
    kwargs.update(gateway_overrides)
    system = SimSystem(SystemConfig(gateway=GatewayConfig(**kwargs)))
    system.schedule(parse_scenario({"events": scenario_events}))
    system.step(ticks)
    return system


class TestParseRemoteCommand:
    def test_valid(self):
        assert parse_remote_command("mypass C") == RemoteCommand("mypass", "C")
        assert parse_remote_command("x R") == RemoteCommand("x", "R")

    def test_q_is_not_a_command(self):
        assert parse_remote_command("mypass Q") is None

    def test_token_count(self):
        assert parse_remote_command("a b c") is None
        assert parse_remote_command("justone") is None
        assert parse_remote_command("") is None

    def test_double_space_invalid(self):
        assert parse_remote_command("mypass  C") is None

    def test_password_length_bounds(self):
        assert parse_remote_command("elevenchars C") is None  # 11 chars
        assert parse_remote_command("abcdefghij C") is not None  # exactly 10

    def test_multichar_command_invalid(self):
        assert parse_remote_command("mypass CC") is None

    def test_lowercase_command_invalid(self):
        assert parse_remote_command("mypass c") is None


class TestStartup:
    def test_healthy_init_reaches_ready(self):
        system = SimSystem()
        system.step(200)
        assert system.gateway.phase == "ready"
        lines = [e.payload["data"] for e in system.trace.find("AT_TX")]
        assert lines == ["AT+CMGF=1\r", 'AT+CPMS="SM"\r']

    def test_init_aborts_on_error(self):
        # drive the gateway against a hand-rolled modem that rejects everything
        registry = standard_registry()
        com1, com15 = registry.lookup("COM1"), registry.lookup("COM15")
        trace = TraceRecorder()
        config = GatewayConfig(destinations=(D1,), server_password="mypass")
        gateway = Gateway(config, com1.endpoint("b"), com15.endpoint("a"), trace)
        modem_side = com15.endpoint("b")
        for t in range(100):
            gateway.on_tick(t)
            if modem_side.recv(t):
                modem_side.send(ERROR_BLOCK, t)
        assert gateway.phase == "failed"
        failures = trace.find("STARTUP_FAILED")
        assert [e.payload["stage"] for e in failures] == ["text_mode"]
        # no further traffic after the failure
        assert [e.payload["data"] for e in trace.find("AT_TX")] == ["AT+CMGF=1\r"]


class TestAlertLatching:
    def test_continuous_resend_latches_once(self):
        system = system_with([{"t": 0, "op": "set_temp", "sensor": 1, "value": 65.0}], 3000,
                             sms_poll_ms=60000)
        assert len(system.trace.find("ALERT_BYTE")) == 1
        sends = [e for e in system.trace.find("AT_TX")
                 if e.payload["data"].startswith("AT+CMSS")]
        assert len(sends) == len(system.config.gateway.destinations)

    def test_unknown_byte_warns_without_dispatch(self):
        system = SimSystem()
        system.step(200)
        system._com1_mcu.send(b"z", system.now)
        system.step(100)
        assert len(system.trace.find("UNKNOWN_BYTE", byte=ord("z"))) == 1
        assert system.trace.find("AT_TX")[-1].payload["data"] != "AT+CMSS"
        assert not system.gateway.latched

    def test_two_sensors_two_dispatches(self):
        system = system_with([
            {"t": 0, "op": "set_temp", "sensor": 1, "value": 65.0},
            {"t": 0, "op": "set_smoke", "sensor": 2, "value": 1.0},
        ], 2000, sms_poll_ms=60000)
        latched = sorted(s.value for s in system.gateway.latched)
        assert latched == ["smoke2", "temp1"]


class TestDispatchPlan:
    def test_all_sms_then_all_calls_per_destination_order(self):
        system = system_with([{"t": 0, "op": "set_temp", "sensor": 1, "value": 65.0}],
                             25000, sms_poll_ms=60000)
        lines = [e.payload["data"] for e in system.trace.find("AT_TX")]
        assert lines == [
            "AT+CMGF=1\r", 'AT+CPMS="SM"\r',
            f'AT+CMSS=1,"{D1}"\r', f'AT+CMSS=1,"{D2}"\r',
            f"ATD{D1};\r", f"ATD{D2};\r",
        ]

    def test_command_gap_enforced(self):
        system = system_with([{"t": 0, "op": "set_temp", "sensor": 1, "value": 65.0}],
                             25000, sms_poll_ms=60000)
        times = [e.t for e in system.trace.find("AT_TX")]
        gaps = [b - a for a, b in zip(times, times[1:])]
        assert all(g >= system.config.gateway.at_gap_ms for g in gaps)

    def test_send_failure_continues_with_next_destination(self):
        # outbox slot 5 holds no text, so every send for temp1 errors out
        slots = {"temp1": 5, "temp2": 2, "smoke1": 3, "smoke2": 4}
        from firesim.firmware import SensorId
        slots = {SensorId(k): v for k, v in slots.items()}
        system = system_with([{"t": 0, "op": "set_temp", "sensor": 1, "value": 65.0}],
                             25000, sms_poll_ms=60000, sensor_outbox_slot=slots)
        errors = system.trace.find("DISPATCH_ERROR", stage="sms")
        assert [e.payload["dest"] for e in errors] == [D1, D2]
        assert len(system.trace.find("SMS_DELIVERED")) == 0
        # the calls still went out
        assert len(system.trace.find("RING")) == 2

    def test_sms_delivered_texts_match_outbox(self):
        system = system_with([{"t": 0, "op": "set_smoke", "sensor": 1, "value": 1.0}],
                             3000, sms_poll_ms=60000)
        delivered = system.trace.find("SMS_DELIVERED")
        assert {e.payload["to"] for e in delivered} == {D1, D2}
        assert all("smoke sensor 1" in e.payload["text"] for e in delivered)


class TestSimSweep:
    def test_empty_sim_is_ten_reads_no_deletes(self):
        system = SimSystem()
        system.step(4000)  # one full sweep after the 2 s poll
        reads = [e for e in system.trace.find("AT_TX")
                 if e.payload["data"].startswith("AT+CMGR")]
        deletes = [e for e in system.trace.find("AT_TX")
                   if e.payload["data"].startswith("AT+CMGD")]
        assert [e.payload["data"] for e in reads] == [
            f"AT+CMGR={i}\r" for i in range(1, 11)]
        assert deletes == []

    def test_message_is_read_acted_on_and_deleted(self):
        system = system_with([
            {"t": 500, "op": "send_sms", "from": D2, "text": "mypass D"}], 5000)
        assert len(system.trace.find("REMOTE_CMD", cmd="D")) == 1
        assert len(system.trace.find("THRESHOLD_SET", sensor="temp1", value=65)) == 1
        deletes = [e for e in system.trace.find("AT_TX")
                   if e.payload["data"].startswith("AT+CMGD")]
        assert [e.payload["data"] for e in deletes] == ["AT+CMGD=1\r"]
        assert system.modem.sim[0] is None

    def test_wrong_password_deleted_without_action(self):
        system = system_with([
            {"t": 500, "op": "send_sms", "from": D2, "text": "wrong C"}], 5000)
        assert len(system.trace.find("CMD_REJECTED", reason="password")) == 1
        assert system.trace.find("REMOTE_CMD") == []
        assert system.trace.find("THRESHOLD_SET") == []
        assert system.trace.find("FW_IGNORED") == []  # nothing reached the MCU
        assert system.modem.sim[0] is None

    def test_malformed_deleted_without_action(self):
        system = system_with([
            {"t": 500, "op": "send_sms", "from": D2, "text": "what is this"}], 5000)
        assert len(system.trace.find("CMD_REJECTED", reason="format")) == 1
        assert system.modem.sim[0] is None

    @pytest.mark.parametrize("text", ["OK", "NO CARRIER", "ERROR", "mypass OK"])
    def test_texts_that_mimic_response_framing(self, text):
        # a stored SMS must never confuse the channel's block scanner
        system = system_with([
            {"t": 500, "op": "send_sms", "from": D2, "text": text}], 6000)
        assert len(system.trace.find("CMD_REJECTED", reason="format")) == 1
        assert system.modem.sim[0] is None  # read, rejected, deleted
        assert system.gateway.phase == "ready"


class TestRemoteExecution:
    def test_reset_clears_latch_and_allows_redelivery(self):
        system = system_with([
            {"t": 0, "op": "set_temp", "sensor": 1, "value": 65.0},
            {"t": 35000, "op": "send_sms", "from": D2, "text": "mypass R"},
        ], 75000)
        assert len(system.trace.find("RESET")) == 1
        alerts = system.trace.find("ALERT_BYTE", sensor="temp1")
        assert len(alerts) == 2  # relatched after the reset
        for dest in (D1, D2):
            assert len(system.trace.find("SMS_DELIVERED", to=dest)) == 2
            assert len(system.trace.find("RING", to=dest)) == 2

    def test_reset_with_nothing_latched_is_noop(self):
        system = system_with([
            {"t": 500, "op": "send_sms", "from": D2, "text": "mypass R"}], 5000)
        assert len(system.trace.find("RESET")) == 1
        assert system.gateway.latched == {}

    def test_threshold_byte_reaches_firmware(self):
        system = system_with([
            {"t": 500, "op": "send_sms", "from": D2, "text": "mypass H"}], 5000)
        assert system.firmware.thresholds.temp2 == 55
        assert len(system.trace.find("THRESHOLD_SET", sensor="temp2", value=55,
                                     source="remote")) == 1

    def test_execute_writes_only_command_bytes(self):
        registry = standard_registry()
        com1, com15 = registry.lookup("COM1"), registry.lookup("COM15")
        trace = TraceRecorder()
        config = GatewayConfig(destinations=(D1,), server_password="pw")
        gateway = Gateway(config, com1.endpoint("b"), com15.endpoint("a"), trace)
        gateway.execute_command(RemoteCommand("pw", "H"), 0)
        assert com1.endpoint("a").recv(10) == b"H"
        gateway.latched = {list(gateway.config.sensor_outbox_slot)[0]: 0}
        gateway.execute_command(RemoteCommand("pw", "R"), 1)
        assert gateway.latched == {}
        assert com1.endpoint("a").recv(10) == b""  # reset stays server-side

    def test_failed_password_reaches_no_link(self):
        registry = standard_registry()
        com1, com15 = registry.lookup("COM1"), registry.lookup("COM15")
        trace = TraceRecorder()
        config = GatewayConfig(destinations=(D1,), server_password="pw")
        gateway = Gateway(config, com1.endpoint("b"), com15.endpoint("a"), trace)
        gateway._handle_remote("bad H", 0)
        assert trace.find("CMD_REJECTED", reason="password")
        assert com1.endpoint("a").recv(10) == b""


class TestConfigValidation:
    def test_destination_count(self):
        with pytest.raises(ValueError):
            GatewayConfig(destinations=(), server_password="pw")
        with pytest.raises(ValueError):
            GatewayConfig(destinations=(D1,) * 9, server_password="pw")

    def test_password_rules(self):
        with pytest.raises(ValueError):
            GatewayConfig(destinations=(D1,), server_password="")
        with pytest.raises(ValueError):
            GatewayConfig(destinations=(D1,), server_password="elevenchars")
        with pytest.raises(ValueError):
            GatewayConfig(destinations=(D1,), server_password="has space")

    def test_bad_destination(self):
        with pytest.raises(ValueError):
            GatewayConfig(destinations=("nope",), server_password="pw")
