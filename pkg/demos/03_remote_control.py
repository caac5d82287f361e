#!/usr/bin/env python3
"""Remote control by SMS: threshold commands and the reset command.

A remote user texts "<password> <char>" to the server mobile.  A..E and F..J
retarget the two temperature sensors, K..M and N..P the two smoke sensors,
and R clears the alert latches so the next emergency notifies again.  A wrong
password is discarded without effect.
"""

from firesim import SimSystem
from firesim.scenario import parse_scenario

USER = "01811111111"

scenario = parse_scenario({"name": "remote-control", "events": [
    {"t": 1000, "op": "send_sms", "from": USER, "text": "mypass D"},   # temp1 -> 65 C
    {"t": 4000, "op": "send_sms", "from": USER, "text": "mypass O"},   # smoke2 -> Medium
    {"t": 7000, "op": "send_sms", "from": USER, "text": "badpass A"},  # rejected
    {"t": 10000, "op": "send_sms", "from": USER, "text": "mypass R"},  # reset latches
]})

system = SimSystem()
system.schedule(scenario)
system.step(14000)

for event in system.trace.events:
    if event.kind in {"SMS_RECEIVED", "THRESHOLD_SET", "CMD_REJECTED", "RESET"}:
        print(f"{event.t:>6} ms  {event.kind:<14} {event.payload}")

thresholds = system.state_snapshot()["firmware"]["thresholds"]
print(f"\nfinal thresholds: {thresholds}")
