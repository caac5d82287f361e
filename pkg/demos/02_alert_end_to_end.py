#!/usr/bin/env python3
"""One full alert: hot room -> alert bytes -> latch -> SMS fan-out -> calls.

Prints the observable trace of a 25-second run with two destination phones.
Note the shape: both texts go out before the first call, and the second call
waits for the first ring to finish (the modem dials one call at a time).
"""

from firesim import SimSystem
from firesim.scenario import parse_scenario

scenario = parse_scenario({"name": "hot-room", "events": [
    {"t": 0, "op": "set_temp", "sensor": 1, "value": 65.0},
]})

system = SimSystem()
system.schedule(scenario)
system.step(25000)

interesting = {"ENV_SET", "FW_ALERT_BEGIN", "ALERT_BYTE", "AT_TX",
               "SMS_DELIVERED", "RING"}
for event in system.trace.events:
    if event.kind in interesting:
        detail = event.payload.get("data") or event.payload
        print(f"{event.t:>6} ms  {event.kind:<15} {detail!r}")

snap = system.state_snapshot()
for number, handset in snap["handsets"].items():
    texts = [m["text"][:40] + "..." for m in handset["inbox"]]
    rings = [r["at"] for r in handset["rings"]]
    print(f"\nhandset {number}: inbox={texts} rings at {rings}")
