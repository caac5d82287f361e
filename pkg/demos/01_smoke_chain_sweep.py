#!/usr/bin/env python3
"""Walk the smoke chain from clear air to full density.

The chain sits saturated at 5.5 V while the chamber is mostly clear, then the
divider pulls out of saturation and the output falls toward the 3 V alert
region.  The MCU's default High threshold trips on ADC codes below 614.
"""

from firesim import ldr_resistance, scatter_fraction, smoke_chain_output
from firesim.firmware import SmokeClass, adc_sample

print(f"{'density':>8} {'light':>8} {'R_ldr':>12} {'V_out':>7} {'code':>5}  alert?")
threshold = adc_sample(SmokeClass.HIGH.volts)
for i in range(0, 11):
    density = i / 10
    light = scatter_fraction(density)
    r = ldr_resistance(light)
    v = smoke_chain_output(density)
    code = adc_sample(v)
    mark = "ALERT" if code < threshold else ""
    print(f"{density:8.2f} {light:8.4f} {r:12.3e} {v:7.3f} {code:5d}  {mark}")

print()
print(f"operating points: clear air -> {smoke_chain_output(0.0)} V (saturated),")
print(f"full density -> {smoke_chain_output(1.0):.4f} V, default threshold code {threshold}")
