#!/usr/bin/env python3
"""The front-panel password change flow and its ten-minute window.

Seven buttons form a 7-bit latch (default 0x3F).  Pressing the mode button
with the current password opens a 600,000 ms window; committing inside it
stores the new latch and lights the OK LED, committing after it lights the
FAIL LED and keeps the old password.
"""

from firesim.firmware import DEFAULT_PASSWORD, PASSWORD_WINDOW_MS, Firmware

fw = Firmware()
print(f"stored password: {fw.stored_password:#04x}")

opened = fw.press_password_mode(0, DEFAULT_PASSWORD)
print(f"t=0: mode press with correct latch -> opened={opened}, mode LED {fw.leds.mode}")

ok = fw.commit_new_password(PASSWORD_WINDOW_MS - 1, 0x55)
print(f"t={PASSWORD_WINDOW_MS - 1}: commit 0x55 -> changed={ok}, "
      f"ok LED {fw.leds.ok}, stored {fw.stored_password:#04x}")

fw2 = Firmware()
fw2.press_password_mode(0, DEFAULT_PASSWORD)
ok = fw2.commit_new_password(PASSWORD_WINDOW_MS, 0x55)
print(f"one ms later on a fresh unit: commit at the deadline -> changed={ok}, "
      f"fail LED {fw2.leds.fail}, stored {fw2.stored_password:#04x}")
