"""Virtual server mobile and its surrounding network.

The modem speaks a small line-oriented command set over the 9600 link, in
text mode only:

    AT+CMGF=1            select text mode
    AT+CPMS="SM"         store received messages on the SIM
    AT+CMGR=<id>         read SIM slot 1..10 (marks it read)
    AT+CMSS=<n>,"<num>"  send the canned text in outbox slot n (1..8)
    AT+CMGD=<id>         delete SIM slot 1..10 (idempotent)
    ATD<num>;            place a call; "NO CARRIER" follows when the ring ends

Commands are CR-terminated; partial lines are buffered.  Every command gets
exactly one response block framed "\\r\\n...\\r\\n"; unknown or malformed input
answers ERROR.  The surrounding MobileNetwork delivers messages and rings to
the destination handsets after a fixed 500 ms, so traces show the hop.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from datetime import datetime, timedelta

NETWORK_DELAY_MS = 500
RING_MS = 10_000
SIM_SLOTS = 10
OUTBOX_SLOTS = 8
SMS_MAX_LEN = 160

# All +CMGR timestamps derive from the logical clock against this fixed epoch.
TIMESTAMP_EPOCH = datetime(2010, 1, 1)

CRLF = b"\r\n"
OK_BLOCK = b"\r\nOK\r\n"
ERROR_BLOCK = b"\r\nERROR\r\n"
NO_CARRIER_BLOCK = b"\r\nNO CARRIER\r\n"

_NUMBER_RE = re.compile(r"\+?\d{8,13}")
_CMGF_RE = re.compile(r"AT\+CMGF=(\d+)")
_CPMS_RE = re.compile(r'AT\+CPMS="([A-Z]+)"')
_CMGR_RE = re.compile(r"AT\+CMGR=(\d+)")
_CMSS_RE = re.compile(r'AT\+CMSS=(\d+),"([^"]*)"')
_CMGD_RE = re.compile(r"AT\+CMGD=(\d+)")
_ATD_RE = re.compile(r"ATD\s*([^;]*);")


def valid_number(number: str) -> bool:
    return bool(_NUMBER_RE.fullmatch(number))


def _check_text(text: str) -> None:
    if len(text) > SMS_MAX_LEN:
        raise ValueError(f"SMS text exceeds {SMS_MAX_LEN} chars")
    if not text.isascii() or "\r" in text or "\n" in text:
        raise ValueError("SMS text must be ASCII without line breaks")


@dataclass
class SmsMessage:
    sender: str
    recipient: str
    text: str
    status: str = "unread"  # or "read"
    received_at: int | None = None

    def __post_init__(self) -> None:
        for number in (self.sender, self.recipient):
            if not valid_number(number):
                raise ValueError(f"not a valid number: {number!r}")
        _check_text(self.text)


@dataclass
class Handset:
    """A destination phone: inbox and ring log, both append-only."""

    number: str
    inbox: list[SmsMessage] = field(default_factory=list)
    ring_log: list[tuple[int, str]] = field(default_factory=list)


# Canned alert texts stored on the phone, one outbox slot per sensor.
DEFAULT_OUTBOX_TEXTS = {
    1: "FIRE ALERT: temperature sensor 1 (zone 1) surpassed its threshold",
    2: "FIRE ALERT: temperature sensor 2 (zone 2) surpassed its threshold",
    3: "FIRE ALERT: smoke sensor 1 (zone 3) surpassed its threshold",
    4: "FIRE ALERT: smoke sensor 2 (zone 4) surpassed its threshold",
}


@dataclass(frozen=True)
class NetworkEvent:
    """Observable outcome of a network timer firing."""

    kind: str  # sms_delivered | sms_dropped | ring | ring_dropped | sms_received | sim_full
    payload: dict


class MobileNetwork:
    """Constant-delay carrier between the server modem and the handsets."""

    def __init__(self) -> None:
        self.handsets: dict[str, Handset] = {}
        self._pending: list[tuple[int, int, str, dict]] = []
        self._seq = 0
        self._modem: "Modem | None" = None

    def attach_modem(self, modem: "Modem") -> None:
        self._modem = modem

    def register_handset(self, number: str) -> Handset:
        if not valid_number(number):
            raise ValueError(f"not a valid number: {number!r}")
        if number not in self.handsets:
            self.handsets[number] = Handset(number)
        return self.handsets[number]

    def _schedule(self, due: int, kind: str, payload: dict) -> None:
        self._seq += 1
        heapq.heappush(self._pending, (due, self._seq, kind, payload))

    def send_sms(self, sender: str, recipient: str, text: str, now: int) -> None:
        self._schedule(now + NETWORK_DELAY_MS, "sms",
                       {"from": sender, "to": recipient, "text": text})

    def place_call(self, caller: str, recipient: str, now: int) -> None:
        self._schedule(now + NETWORK_DELAY_MS, "ring", {"from": caller, "to": recipient})

    def submit_inbound(self, sender: str, text: str, now: int) -> None:
        """An SMS from a remote user toward the server mobile."""
        if not valid_number(sender):
            raise ValueError(f"not a valid number: {sender!r}")
        _check_text(text)
        self._schedule(now + NETWORK_DELAY_MS, "inbound", {"from": sender, "text": text})

    def step(self, now: int) -> list[NetworkEvent]:
        """Fire every timer due at or before ``now``, in schedule order."""
        events: list[NetworkEvent] = []
        while self._pending and self._pending[0][0] <= now:
            due, _, kind, payload = heapq.heappop(self._pending)
            if kind == "sms":
                handset = self.handsets.get(payload["to"])
                if handset is None:
                    events.append(NetworkEvent("sms_dropped", dict(payload)))
                else:
                    handset.inbox.append(SmsMessage(payload["from"], payload["to"],
                                                    payload["text"], received_at=due))
                    events.append(NetworkEvent("sms_delivered", dict(payload)))
            elif kind == "ring":
                handset = self.handsets.get(payload["to"])
                if handset is None:
                    events.append(NetworkEvent("ring_dropped", dict(payload)))
                else:
                    handset.ring_log.append((due, payload["from"]))
                    events.append(NetworkEvent("ring", dict(payload)))
            else:  # inbound toward the server SIM
                assert self._modem is not None, "network has no modem attached"
                slot = self._modem.store_inbound(payload["from"], payload["text"], due)
                if slot is None:
                    events.append(NetworkEvent("sim_full", dict(payload)))
                else:
                    events.append(NetworkEvent("sms_received", {**payload, "slot": slot}))
        return events


class Modem:
    """The server mobile: command parser, SIM inbox, canned outbox, dialer."""

    def __init__(self, network: MobileNetwork, own_number: str,
                 outbox_texts: dict[int, str] | None = None):
        if not valid_number(own_number):
            raise ValueError(f"not a valid number: {own_number!r}")
        self.network = network
        self.own_number = own_number
        self.text_mode = False
        self.preferred_store: str | None = None
        self.sim: list[SmsMessage | None] = [None] * SIM_SLOTS
        self.outbox: dict[int, str] = dict(DEFAULT_OUTBOX_TEXTS)
        if outbox_texts:
            for slot, text in outbox_texts.items():
                if not 1 <= slot <= OUTBOX_SLOTS:
                    raise ValueError(f"outbox slot out of range: {slot}")
                _check_text(text)
                self.outbox[slot] = text
        self._dialing_until: int | None = None
        self._rx = bytearray()

    @property
    def call_state(self) -> str:
        return "idle" if self._dialing_until is None else "dialing"

    # -- byte interface ------------------------------------------------------

    def feed(self, data: bytes, now: int) -> bytes:
        """Consume link bytes; returns the response blocks for every complete
        CR-terminated line contained in them, in order."""
        self._rx += data
        out = bytearray()
        while True:
            cr = self._rx.find(b"\r")
            if cr < 0:
                break
            line = bytes(self._rx[:cr]).strip(b"\n")
            del self._rx[:cr + 1]
            if line:
                out += self._execute(line, now)
        return bytes(out)

    def on_tick(self, now: int) -> bytes:
        """Unsolicited output: NO CARRIER once a placed call stops ringing."""
        if self._dialing_until is not None and now >= self._dialing_until:
            self._dialing_until = None
            return NO_CARRIER_BLOCK
        return b""

    # -- network-facing ------------------------------------------------------

    def store_inbound(self, sender: str, text: str, now: int) -> int | None:
        """File an arriving SMS in the lowest free SIM slot; None when full."""
        for i in range(SIM_SLOTS):
            if self.sim[i] is None:
                self.sim[i] = SmsMessage(sender, self.own_number, text,
                                         status="unread", received_at=now)
                return i + 1
        return None

    # -- command execution -----------------------------------------------------

    def _execute(self, line: bytes, now: int) -> bytes:
        try:
            text = line.decode("ascii")
        except UnicodeDecodeError:
            return ERROR_BLOCK

        if m := _CMGF_RE.fullmatch(text):
            if m.group(1) != "1":  # text mode only; no PDU support
                return ERROR_BLOCK
            self.text_mode = True
            return OK_BLOCK

        if m := _CPMS_RE.fullmatch(text):
            if m.group(1) != "SM":
                return ERROR_BLOCK
            self.preferred_store = "SM"
            return OK_BLOCK

        if m := _CMGR_RE.fullmatch(text):
            return self._read_slot(int(m.group(1)))

        if m := _CMSS_RE.fullmatch(text):
            return self._send_from_outbox(int(m.group(1)), m.group(2), now)

        if m := _CMGD_RE.fullmatch(text):
            slot = int(m.group(1))
            if not 1 <= slot <= SIM_SLOTS:
                return ERROR_BLOCK
            self.sim[slot - 1] = None
            return OK_BLOCK

        if m := _ATD_RE.fullmatch(text):
            return self._dial(m.group(1).strip(), now)

        return ERROR_BLOCK

    def _read_slot(self, slot: int) -> bytes:
        if not 1 <= slot <= SIM_SLOTS:
            return ERROR_BLOCK
        msg = self.sim[slot - 1]
        if msg is None:
            return OK_BLOCK
        status = "REC UNREAD" if msg.status == "unread" else "REC READ"
        msg.status = "read"
        header = f'+CMGR: "{status}","{msg.sender}",,"{self._timestamp(msg.received_at or 0)}"'
        return CRLF + header.encode("ascii") + CRLF + msg.text.encode("ascii") + CRLF + OK_BLOCK

    def _send_from_outbox(self, slot: int, number: str, now: int) -> bytes:
        if not self.text_mode:
            return ERROR_BLOCK
        if not 1 <= slot <= OUTBOX_SLOTS or slot not in self.outbox:
            return ERROR_BLOCK
        if not valid_number(number):
            return ERROR_BLOCK
        # Delivery outcome is the network's business; unknown numbers drop there.
        self.network.send_sms(self.own_number, number, self.outbox[slot], now)
        return OK_BLOCK

    def _dial(self, number: str, now: int) -> bytes:
        if self._dialing_until is not None:
            return ERROR_BLOCK
        if not valid_number(number):
            return ERROR_BLOCK
        self.network.place_call(self.own_number, number, now)
        self._dialing_until = now + NETWORK_DELAY_MS + RING_MS
        return OK_BLOCK

    @staticmethod
    def _timestamp(at_ms: int) -> str:
        stamp = TIMESTAMP_EPOCH + timedelta(milliseconds=at_ms)
        return stamp.strftime("%y/%m/%d,%H:%M:%S") + "+00"
