"""Virtual byte-stream links with baud-true delivery latency.

Each link has two endpoints; a write on one side lands in the peer's inbound
FIFO.  Byte k (0-based) of a burst becomes readable ceil((k+1) * 10000 / baud)
ms after the write: 10 bit times per frame (1 start + 8 data + 1 stop).
Nothing is reordered, duplicated, or dropped, and queues are unbounded.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

BITS_PER_FRAME = 10  # 8N1: start + 8 data + stop


class LinkClosedError(RuntimeError):
    """Read or write attempted on a closed link."""


@dataclass(frozen=True)
class LinkConfig:
    name: str
    baud: int
    data_bits: int = 8
    stop_bits: int = 1
    parity: str = "none"

    def __post_init__(self) -> None:
        if self.baud <= 0:
            raise ValueError(f"baud must be positive: {self.baud}")
        if (self.data_bits, self.stop_bits, self.parity) != (8, 1, "none"):
            raise ValueError("only 8N1 framing is supported")


# The two standard links of the deployment.
COM1 = LinkConfig("COM1", 115200)   # MCU <-> server
COM15 = LinkConfig("COM15", 9600)   # server <-> modem

_SIDES = ("a", "b")


class SerialLink:
    """Full-duplex channel; sides are "a" and "b"."""

    def __init__(self, config: LinkConfig):
        self.config = config
        self._inbound: dict[str, deque[tuple[int, int]]] = {s: deque() for s in _SIDES}
        self._open = True

    @property
    def is_open(self) -> bool:
        return self._open

    def close(self) -> None:
        self._open = False

    def endpoint(self, side: str) -> "LinkEndpoint":
        if side not in _SIDES:
            raise ValueError(f"unknown side: {side}")
        return LinkEndpoint(self, side)

    def write(self, side: str, data: bytes, now: int) -> None:
        """Queue ``data`` toward the peer of ``side``; empty writes are no-ops."""
        self._check_open()
        peer = self._inbound["b" if side == "a" else "a"]
        for k, byte in enumerate(data):
            frame_bits = (k + 1) * BITS_PER_FRAME * 1000
            ready_at = now + -(-frame_bits // self.config.baud)  # ceil division
            peer.append((ready_at, byte))

    def read(self, side: str, now: int) -> bytes:
        """Drain and return every byte whose ready-at time has passed."""
        self._check_open()
        queue = self._inbound[side]
        out = bytearray()
        while queue and queue[0][0] <= now:
            out.append(queue.popleft()[1])
        return bytes(out)

    def pending(self, side: str) -> int:
        return len(self._inbound[side])

    def next_ready(self, side: str) -> int | None:
        queue = self._inbound[side]
        return queue[0][0] if queue else None

    def _check_open(self) -> None:
        if not self._open:
            raise LinkClosedError(f"link {self.config.name} is closed")


class LinkEndpoint:
    """One side of a link: send() goes to the peer, recv() drains own inbox."""

    def __init__(self, link: SerialLink, side: str):
        self._link = link
        self._side = side

    def send(self, data: bytes, now: int) -> None:
        self._link.write(self._side, data, now)

    def recv(self, now: int) -> bytes:
        return self._link.read(self._side, now)

    def pending(self) -> int:
        return self._link.pending(self._side)

    def next_ready(self) -> int | None:
        return self._link.next_ready(self._side)


class LinkRegistry:
    """Links by identity; consumers look their port up by name."""

    def __init__(self) -> None:
        self._links: dict[str, SerialLink] = {}

    def open_link(self, config: LinkConfig) -> SerialLink:
        if config.name in self._links:
            raise ValueError(f"link already registered: {config.name}")
        link = SerialLink(config)
        self._links[config.name] = link
        return link

    def lookup(self, name: str) -> SerialLink:
        try:
            return self._links[name]
        except KeyError:
            raise KeyError(f"no link named {name!r}") from None


def standard_registry() -> LinkRegistry:
    """Registry holding the fixed COM1 and COM15 links."""
    registry = LinkRegistry()
    registry.open_link(COM1)
    registry.open_link(COM15)
    return registry
