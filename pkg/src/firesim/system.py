"""Full-system wiring and the deterministic scheduler.

One SimSystem owns everything: environment, MCU, both links, the modem with
its network of handsets, the gateway, and the trace.  Logical time advances
in 1 ms ticks; each tick runs a fixed pipeline:

    1. scenario/API events scheduled for this tick, in queue order
    2. link deliveries due: command bytes into the MCU, then command lines
       into the modem (whose responses go back onto the link immediately)
    3. the MCU sampling loop, every 10th ms
    4. the gateway: response pump, due pollers, command transmit
    5. modem call timer, then network deliveries due

The wall clock never enters this loop, so identical inputs give
byte-identical canonical traces.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field

from .envmodel import EnvState, channel_voltages
from .firmware import ALERT_SENSOR_BY_BYTE, TICK_MS, Firmware, SensorId
from .gateway import Gateway, GatewayConfig
from .gsm import DEFAULT_OUTBOX_TEXTS, MobileNetwork, Modem
from .scenario import Scenario, ScenarioEvent
from .serialnet import standard_registry
from .trace import TraceRecorder

DEFAULT_SERVER_NUMBER = "01700000000"

_NETWORK_EVENT_KINDS = {
    "sms_delivered": "SMS_DELIVERED",
    "sms_dropped": "SMS_DROPPED",
    "ring": "RING",
    "ring_dropped": "RING_DROPPED",
    "sms_received": "SMS_RECEIVED",
    "sim_full": "SIM_FULL",
}


class ExpectationFailed(AssertionError):
    """A scenario expect op found no matching trace events at its time."""

    def __init__(self, message: str, event: ScenarioEvent):
        super().__init__(message)
        self.event = event


@dataclass(frozen=True)
class SystemConfig:
    gateway: GatewayConfig
    server_number: str = DEFAULT_SERVER_NUMBER
    env_temp_c: tuple[float, float] = (25.0, 25.0)
    env_smoke: tuple[float, float] = (0.0, 0.0)
    outbox_texts: dict[int, str] = field(default_factory=dict)

    @staticmethod
    def default() -> "SystemConfig":
        return SystemConfig(gateway=GatewayConfig(
            destinations=("01711111111", "01811111111"),
            server_password="mypass",
        ))

    @staticmethod
    def from_dict(data: dict) -> "SystemConfig":
        slots = data.get("sensor_outbox_slot")
        gateway_kwargs = {
            "destinations": tuple(data["destinations"]),
            "server_password": data["server_password"],
        }
        for key in ("mcu_poll_ms", "sms_poll_ms", "at_gap_ms"):
            if key in data:
                gateway_kwargs[key] = data[key]
        if slots:
            gateway_kwargs["sensor_outbox_slot"] = {
                SensorId(name): slot for name, slot in slots.items()}
        env = data.get("env", {})
        temps = env.get("temp_c", [25.0, 25.0])
        smokes = env.get("smoke_density", [0.0, 0.0])
        outbox = {int(k): v for k, v in data.get("outbox_texts", {}).items()}
        return SystemConfig(
            gateway=GatewayConfig(**gateway_kwargs),
            server_number=data.get("server_number", DEFAULT_SERVER_NUMBER),
            env_temp_c=(float(temps[0]), float(temps[1])),
            env_smoke=(float(smokes[0]), float(smokes[1])),
            outbox_texts=outbox,
        )

    @staticmethod
    def from_file(path) -> "SystemConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return SystemConfig.from_dict(json.load(fh))


class SimSystem:
    """Everything wired together on one logical timeline."""

    def __init__(self, config: SystemConfig | None = None):
        self.config = config or SystemConfig.default()
        self.trace = TraceRecorder()
        self.now = 0

        self.registry = standard_registry()
        com1 = self.registry.lookup("COM1")    # side a: MCU, side b: server
        com15 = self.registry.lookup("COM15")  # side a: server, side b: modem
        self._com1_mcu = com1.endpoint("a")
        self._com15_modem = com15.endpoint("b")

        self.env = EnvState(list(self.config.env_temp_c), list(self.config.env_smoke))
        self.firmware = Firmware()
        self.network = MobileNetwork()
        for number in self.config.gateway.destinations:
            self.network.register_handset(number)
        self.modem = Modem(self.network, self.config.server_number,
                           self.config.outbox_texts or None)
        self.network.attach_modem(self.modem)
        self.gateway = Gateway(self.config.gateway, com1.endpoint("b"),
                               com15.endpoint("a"), self.trace)

        self._pending: list[tuple[int, int, ScenarioEvent]] = []
        self._queue_seq = 0
        self._emitting: frozenset[SensorId] = frozenset()
        self.oplog: list[ScenarioEvent] = []

    # -- event intake ------------------------------------------------------

    def queue_event(self, event: ScenarioEvent) -> None:
        if event.t < self.now:
            raise ValueError(f"cannot schedule into the past: t={event.t} < now={self.now}")
        self._queue_seq += 1
        heapq.heappush(self._pending, (event.t, self._queue_seq, event))
        if event.op != "expect":
            self.oplog.append(event)

    def schedule(self, scenario: Scenario) -> None:
        for event in scenario.events:
            self.queue_event(event)

    def oplog_scenario(self, name: str = "recorded-session") -> dict:
        """The mutations applied so far, as a replayable scenario document."""
        return {"name": name, "events": [e.to_dict() for e in self.oplog]}

    # -- time --------------------------------------------------------------

    def step(self, n_ticks: int) -> int:
        """Advance exactly n ticks; returns the new time."""
        if n_ticks < 0:
            raise ValueError("cannot step backwards")
        for _ in range(n_ticks):
            self._tick(self.now)
            self.now += 1
        return self.now

    def _tick(self, t: int) -> None:
        # (1) scheduled events
        while self._pending and self._pending[0][0] <= t:
            _, _, event = heapq.heappop(self._pending)
            self._apply(event, t)

        # (2) link deliveries
        for byte in self._com1_mcu.recv(t):
            change = self.firmware.handle_serial_byte(byte)
            if change is None:
                self.trace.emit(t, "FW_IGNORED", byte=byte)
            else:
                self.trace.emit(t, "THRESHOLD_SET", sensor=change.sensor.value,
                                value=change.payload_value, source="remote")
        inbound = self._com15_modem.recv(t)
        if inbound:
            response = self.modem.feed(inbound, t)
            if response:
                self._com15_modem.send(response, t)

        # (3) MCU sampling loop
        if t % TICK_MS == 0:
            out = self.firmware.tick(t, channel_voltages(self.env))
            emitting = frozenset(ALERT_SENSOR_BY_BYTE[b] for b in out)
            for sensor in SensorId:
                if sensor in emitting and sensor not in self._emitting:
                    self.trace.emit(t, "FW_ALERT_BEGIN", sensor=sensor.value,
                                    byte=chr(sensor.alert_byte))
                elif sensor not in emitting and sensor in self._emitting:
                    self.trace.emit(t, "FW_ALERT_END", sensor=sensor.value)
            self._emitting = emitting
            if out:
                self._com1_mcu.send(out, t)

        # (4) gateway
        self.gateway.on_tick(t)

        # (5) modem call timer, then network deliveries
        unsolicited = self.modem.on_tick(t)
        if unsolicited:
            self._com15_modem.send(unsolicited, t)
        for net_event in self.network.step(t):
            self.trace.emit(t, _NETWORK_EVENT_KINDS[net_event.kind], **net_event.payload)

    # -- event application ---------------------------------------------------

    def _apply(self, event: ScenarioEvent, t: int) -> None:
        op, args = event.op, event.args
        if op == "set_temp":
            self.env.set_temp(args["sensor"] - 1, args["value"])
            self.trace.emit(t, "ENV_SET", sensor=f"temp{args['sensor']}", value=args["value"])
        elif op == "set_smoke":
            self.env.set_smoke(args["sensor"] - 1, args["value"])
            self.trace.emit(t, "ENV_SET", sensor=f"smoke{args['sensor']}", value=args["value"])
        elif op == "press_pw_mode":
            opened = self.firmware.press_password_mode(t, args["latch"])
            self.trace.emit(t, "PW_MODE", result="opened" if opened else "rejected")
        elif op == "commit_password":
            changed = self.firmware.commit_new_password(t, args["latch"])
            self.trace.emit(t, "PW_COMMIT", result="changed" if changed else "failed")
        elif op == "set_threshold_local":
            try:
                change = self.firmware.set_threshold_local(
                    args["latch"], args["select"], args["range"])
            except ValueError as exc:
                self.trace.emit(t, "BUTTON_REJECTED", reason=str(exc))
            else:
                if change is None:
                    self.trace.emit(t, "BUTTON_REJECTED", reason="wrong password")
                else:
                    self.trace.emit(t, "THRESHOLD_SET", sensor=change.sensor.value,
                                    value=change.payload_value, source="local")
        elif op == "send_sms":
            self.network.submit_inbound(args["from"], args["text"], t)
        elif op == "expect":
            self._check_expect(event, t)
        else:  # unreachable for validated scenarios
            raise ValueError(f"unknown op {op!r}")

    def _check_expect(self, event: ScenarioEvent, t: int) -> None:
        kind = event.args["kind"]
        match = event.args.get("match", {})
        found = self.trace.find(kind, **match)
        count = event.args.get("count")
        ok = len(found) == count if count is not None else len(found) >= 1
        if not ok:
            wanted = f"exactly {count}" if count is not None else "at least 1"
            raise ExpectationFailed(
                f"t={t}: expected {wanted} {kind} matching {match}, found {len(found)}",
                event)

    # -- inspection ---------------------------------------------------------

    def state_snapshot(self) -> dict:
        """Read-only view of everything the operator console shows."""
        thresholds = self.firmware.thresholds
        return {
            "now": self.now,
            "env": {
                "temp_c": list(self.env.temp_c),
                "smoke_density": list(self.env.smoke_density),
            },
            "firmware": {
                "thresholds": {
                    "temp1": thresholds.temp1,
                    "temp2": thresholds.temp2,
                    "smoke1": thresholds.smoke1.value,
                    "smoke2": thresholds.smoke2.value,
                },
                "leds": {
                    "mode": self.firmware.leds.mode,
                    "fail": self.firmware.leds.fail,
                    "ok": self.firmware.leds.ok,
                },
                "password_mode_open": self.firmware.pw_mode_until is not None,
                "adc_codes": list(self.firmware.adc_codes),
            },
            "gateway": {
                "phase": self.gateway.phase,
                "latched": [s.value for s in SensorId if s in self.gateway.latched],
            },
            "handsets": {
                number: {
                    "inbox": [{"from": m.sender, "text": m.text, "at": m.received_at}
                              for m in handset.inbox],
                    "rings": [{"at": at, "from": caller}
                              for at, caller in handset.ring_log],
                }
                for number, handset in self.network.handsets.items()
            },
            "last_seq": self.trace.last_seq,
        }


def run_scenario(scenario: Scenario, duration_ms: int,
                 config: SystemConfig | None = None) -> SimSystem:
    """Fresh system, scripted events, ``duration_ms`` ticks; returns the system.

    Raises ExpectationFailed at the first unmet expect op.
    """
    system = SimSystem(config)
    system.schedule(scenario)
    system.step(duration_ms)
    return system
