"""The server-side daemon gluing the MCU link to the modem link.

Responsibilities:

  * initialize the modem (text mode, SIM storage) and refuse to run if that
    fails;
  * poll the MCU link, latch the first alert byte per sensor into an episode,
    and discard the continuous resends;
  * fan an episode out to every destination: all SMS sends first, then all
    calls, so nobody's ring precedes anybody's text;
  * poll the SIM for inbound SMS, parse password-guarded commands, forward
    threshold bytes to the MCU, and clear the episode latches on reset.

All modem traffic from both pollers funnels through one AtChannel that keeps
a single command in flight, enforces the configured minimum gap between
command lines, and holds the line while a placed call is still ringing (the
modem can only drive one call at a time).  That serialization is what keeps
response blocks from interleaving.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

from .firmware import ALERT_SENSOR_BY_BYTE, SensorId
from .gsm import (ERROR_BLOCK, NO_CARRIER_BLOCK, OK_BLOCK, SIM_SLOTS,
                  valid_number)
from .serialnet import LinkEndpoint
from .trace import TraceRecorder

COMMAND_CHARS = frozenset("ABCDEFGHIJKLMNOPR")  # note: no Q
RESET_CHAR = "R"

_CMGR_PAYLOAD = re.compile(
    r'\r\n\+CMGR: "[^"]*","([^"]*)",,"[^"]*"\r\n(.*)\r\n\r\nOK\r\n')


def _default_slots() -> dict[SensorId, int]:
    return {SensorId.TEMP1: 1, SensorId.TEMP2: 2, SensorId.SMOKE1: 3, SensorId.SMOKE2: 4}


@dataclass(frozen=True)
class GatewayConfig:
    destinations: tuple[str, ...]
    server_password: str
    mcu_poll_ms: int = 50
    sms_poll_ms: int = 2000
    at_gap_ms: int = 100
    sensor_outbox_slot: dict[SensorId, int] = field(default_factory=_default_slots)

    def __post_init__(self) -> None:
        if not 1 <= len(self.destinations) <= 8:
            raise ValueError("between 1 and 8 destination numbers required")
        for number in self.destinations:
            if not valid_number(number):
                raise ValueError(f"not a valid destination number: {number!r}")
        if not 1 <= len(self.server_password) <= 10:
            raise ValueError("server password must be 1..10 characters")
        if any(ch.isspace() for ch in self.server_password):
            # the SMS grammar splits on spaces; a spaced password could never match
            raise ValueError("server password must not contain whitespace")
        for interval in (self.mcu_poll_ms, self.sms_poll_ms, self.at_gap_ms):
            if interval < 1:
                raise ValueError("poll intervals and the command gap must be >= 1 ms")
        if set(self.sensor_outbox_slot) != set(SensorId):
            raise ValueError("an outbox slot is required for every sensor")
        for slot in self.sensor_outbox_slot.values():
            if not 1 <= slot <= 8:
                raise ValueError(f"outbox slot out of range: {slot}")


@dataclass(frozen=True)
class RemoteCommand:
    password: str
    cmd: str


def parse_remote_command(text: str) -> RemoteCommand | None:
    """Split "<password> <command-char>"; None for anything else."""
    parts = text.split(" ")
    if len(parts) != 2:
        return None
    password, cmd = parts
    if not 1 <= len(password) <= 10:
        return None
    if len(cmd) != 1 or cmd not in COMMAND_CHARS:
        return None
    return RemoteCommand(password, cmd)


@dataclass
class _AtCommand:
    line: bytes
    on_done: Callable[[bytes, int], None]
    holds_call: bool = False  # ATD: keep the channel until NO CARRIER


class AtChannel:
    """Serialized owner of the modem link: one command in flight, minimum
    gap between command lines, call-hold while a dialed ring lasts."""

    def __init__(self, port: LinkEndpoint, gap_ms: int, trace: TraceRecorder):
        self._port = port
        self._gap_ms = gap_ms
        self._trace = trace
        self._queue: deque[_AtCommand] = deque()
        self._rx = bytearray()
        self._in_flight: _AtCommand | None = None
        self._call_hold = False
        self._next_free_at = 0

    @property
    def idle(self) -> bool:
        return self._in_flight is None and not self._call_hold and not self._queue

    def enqueue(self, line: bytes, on_done: Callable[[bytes, int], None],
                holds_call: bool = False) -> None:
        self._queue.append(_AtCommand(line, on_done, holds_call))

    def clear(self) -> None:
        self._queue.clear()

    def pump_rx(self, now: int) -> None:
        data = self._port.recv(now)
        if data:
            self._rx += data
        while (block := self._take_block()) is not None:
            self._trace.emit(now, "AT_RX", data=block.decode("ascii"))
            if block == NO_CARRIER_BLOCK:
                if self._call_hold:
                    self._call_hold = False
                    self._next_free_at = now + self._gap_ms
                continue
            command = self._in_flight
            if command is None:
                continue  # stray block; the virtual modem never does this
            self._in_flight = None
            if command.holds_call and block == OK_BLOCK:
                self._call_hold = True
            else:
                self._next_free_at = now + self._gap_ms
            command.on_done(block, now)

    def pump_tx(self, now: int) -> None:
        if (self._in_flight is None and not self._call_hold
                and self._queue and now >= self._next_free_at):
            command = self._queue.popleft()
            self._trace.emit(now, "AT_TX", data=command.line.decode("ascii"))
            self._port.send(command.line, now)
            self._in_flight = command

    def _take_block(self) -> bytes | None:
        # Blocks are prefix-distinguishable at their third byte, which keeps
        # framing sound even when a stored SMS text happens to read "OK" or
        # "NO CARRIER": a +CMGR payload only ends at blank-line-then-OK.
        for whole in (NO_CARRIER_BLOCK, OK_BLOCK, ERROR_BLOCK):
            if self._rx.startswith(whole):
                return self._consume(len(whole))
        if self._rx.startswith(b"\r\n+CMGR:"):
            end = self._rx.find(b"\r\n\r\nOK\r\n")
            if end >= 0:
                return self._consume(end + 8)
        return None

    def _consume(self, length: int) -> bytes:
        block = bytes(self._rx[:length])
        del self._rx[:length]
        return block


class Gateway:
    """The daemon itself; driven once per tick by the harness."""

    def __init__(self, config: GatewayConfig, mcu_port: LinkEndpoint,
                 modem_port: LinkEndpoint, trace: TraceRecorder):
        self.config = config
        self._mcu = mcu_port
        self._trace = trace
        self.channel = AtChannel(modem_port, config.at_gap_ms, trace)
        self.phase = "boot"  # boot -> init -> ready | failed
        self.latched: dict[SensorId, int] = {}  # sensor -> latch time
        self._next_mcu_poll = 0
        self._next_sms_poll = 0
        self._sweep_slot: int | None = None

    def on_tick(self, now: int) -> None:
        if self.phase == "boot":
            self._start_init()
        self.channel.pump_rx(now)
        if self.phase == "ready":
            if now >= self._next_mcu_poll:
                self.poll_mcu(now)
                while self._next_mcu_poll <= now:
                    self._next_mcu_poll += self.config.mcu_poll_ms
            if now >= self._next_sms_poll:
                self.poll_sms(now)
                while self._next_sms_poll <= now:
                    self._next_sms_poll += self.config.sms_poll_ms
        self.channel.pump_tx(now)

    # -- startup ---------------------------------------------------------

    def _start_init(self) -> None:
        self.phase = "init"
        self.channel.enqueue(b"AT+CMGF=1\r", self._on_text_mode)

    def _on_text_mode(self, block: bytes, now: int) -> None:
        if block != OK_BLOCK:
            self._fail_startup(now, "text_mode")
            return
        self.channel.enqueue(b'AT+CPMS="SM"\r', self._on_store_select)

    def _on_store_select(self, block: bytes, now: int) -> None:
        if block != OK_BLOCK:
            self._fail_startup(now, "message_store")
            return
        self.phase = "ready"
        # pollers wake for the first time one interval after startup
        self._next_mcu_poll = now + self.config.mcu_poll_ms
        self._next_sms_poll = now + self.config.sms_poll_ms
        self._trace.emit(now, "GW_READY")

    def _fail_startup(self, now: int, stage: str) -> None:
        self.phase = "failed"
        self.channel.clear()
        self._trace.emit(now, "STARTUP_FAILED", stage=stage)

    # -- MCU side ----------------------------------------------------------

    def poll_mcu(self, now: int) -> None:
        """Drain the MCU link; the first byte per sensor opens an episode."""
        for byte in self._mcu.recv(now):
            sensor = ALERT_SENSOR_BY_BYTE.get(byte)
            if sensor is None:
                self._trace.emit(now, "UNKNOWN_BYTE", byte=byte)
            elif sensor not in self.latched:
                self.latched[sensor] = now
                self._trace.emit(now, "ALERT_BYTE", sensor=sensor.value, byte=chr(byte))
                self.dispatch_alert(sensor)

    def dispatch_alert(self, sensor: SensorId) -> None:
        """Queue the fan-out for one latched sensor: every SMS, then every call."""
        slot = self.config.sensor_outbox_slot[sensor]
        for dest in self.config.destinations:
            self.channel.enqueue(f'AT+CMSS={slot},"{dest}"\r'.encode("ascii"),
                                 partial(self._on_send_done, sensor.value, dest))
        for dest in self.config.destinations:
            self.channel.enqueue(f"ATD{dest};\r".encode("ascii"),
                                 partial(self._on_dial_done, sensor.value, dest),
                                 holds_call=True)

    def _on_send_done(self, sensor: str, dest: str, block: bytes, now: int) -> None:
        if block != OK_BLOCK:
            self._trace.emit(now, "DISPATCH_ERROR", stage="sms", sensor=sensor, dest=dest)

    def _on_dial_done(self, sensor: str, dest: str, block: bytes, now: int) -> None:
        if block != OK_BLOCK:
            self._trace.emit(now, "DISPATCH_ERROR", stage="call", sensor=sensor, dest=dest)

    # -- SIM side ----------------------------------------------------------

    def poll_sms(self, now: int) -> None:
        """Start a slot sweep unless the previous one is still running."""
        if self._sweep_slot is not None:
            return
        self._sweep_slot = 1
        self._sweep_next()

    def _sweep_next(self) -> None:
        slot = self._sweep_slot
        if slot is None:
            return
        if slot > SIM_SLOTS:
            self._sweep_slot = None
            return
        self.channel.enqueue(f"AT+CMGR={slot}\r".encode("ascii"),
                             partial(self._on_slot_read, slot))

    def _on_slot_read(self, slot: int, block: bytes, now: int) -> None:
        match = _CMGR_PAYLOAD.fullmatch(block.decode("ascii"))
        if match is None:
            self._advance_sweep()
            return
        self._handle_remote(match.group(2), now)
        self.channel.enqueue(f"AT+CMGD={slot}\r".encode("ascii"),
                             partial(self._on_slot_deleted, slot))

    def _on_slot_deleted(self, slot: int, block: bytes, now: int) -> None:
        self._advance_sweep()

    def _advance_sweep(self) -> None:
        if self._sweep_slot is not None:
            self._sweep_slot += 1
            self._sweep_next()

    def _handle_remote(self, text: str, now: int) -> None:
        command = parse_remote_command(text)
        if command is None:
            self._trace.emit(now, "CMD_REJECTED", reason="format", text=text)
            return
        if command.password != self.config.server_password:
            self._trace.emit(now, "CMD_REJECTED", reason="password", cmd=command.cmd)
            return
        self.execute_command(command, now)

    def execute_command(self, command: RemoteCommand, now: int) -> None:
        """Apply an already-authenticated remote command."""
        if command.cmd == RESET_CHAR:
            self.latched.clear()
            self._trace.emit(now, "RESET")
        else:
            self._mcu.send(command.cmd.encode("ascii"), now)
            self._trace.emit(now, "REMOTE_CMD", cmd=command.cmd)
