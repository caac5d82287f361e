"""Analog front-end models for the alert loop.

Two temperature probes and two smoke chambers feed the MCU's ADC pins.
Temperature is a plain 10 mV/degC transducer.  The smoke channel is a chain:
smoke scatters the chamber LED's beam onto a photocell, the photocell forms
the lower leg of a divider against a fixed 9 Mohm resistor, and a
non-inverting op-amp stage lifts the tap voltage until it clips at the rail.
Dark photocell (no smoke) means nearly the whole supply drops across it, so
the amplified output sits at the rail; more smoke means more light, less
resistance, and a lower output voltage.

All transfers are pure functions of their inputs with no noise model, which
keeps full-system runs bit-reproducible.  Disturbances are injected through
scenario steps instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

R_DARK_OHMS = 430e6      # photocell in the dark
R_BRIGHT_OHMS = 11e3     # photocell in bright light
R_FIXED_OHMS = 9e6       # divider's fixed upper leg
VCC_VOLTS = 5.0
AMP_GAIN = 1.5           # non-inverting stage, 1 + 0.5k/1k
V_SAT_VOLTS = 5.5        # rail the amplifier clips at (measured no-smoke output)

# Full density is pinned one converter step below the 3.0 V default alert
# voltage: the MCU alerts on codes strictly below the threshold code, so a
# chain that landed exactly on 3.0 V would quantize onto the threshold itself
# and heavy smoke would never trip the default setting.
ADC_STEP_VOLTS = 5.0 / 1024
SMOKE_TARGET_VOLTS = 3.0 - ADC_STEP_VOLTS

TEMP_VOLTS_PER_C = 0.010  # 10 mV/degC, 0 V at 0 degC
TEMP_MIN_C = -40.0
TEMP_MAX_C = 150.0


def calibrate_k_scatter(
    target_volts: float = SMOKE_TARGET_VOLTS,
    *,
    r_dark: float = R_DARK_OHMS,
    r_bright: float = R_BRIGHT_OHMS,
    r_fixed: float = R_FIXED_OHMS,
    vcc: float = VCC_VOLTS,
    gain: float = AMP_GAIN,
) -> float:
    """Light fraction reaching the photocell per unit smoke density.

    Solves the chain backwards: find the photocell resistance whose amplified
    divider tap equals ``target_volts``, then invert the log-linear photocell
    law for the light fraction that produces that resistance, and assign it
    to density 1.0.
    """
    r_target = r_fixed * target_volts / (gain * vcc - target_volts)
    span = math.log10(r_dark) - math.log10(r_bright)
    return (math.log10(r_dark) - math.log10(r_target)) / span


@dataclass(frozen=True)
class SmokeChainParams:
    """Electrical constants of one smoke-sensing chain."""

    r_dark: float = R_DARK_OHMS
    r_bright: float = R_BRIGHT_OHMS
    r_fixed: float = R_FIXED_OHMS
    vcc: float = VCC_VOLTS
    gain: float = AMP_GAIN
    v_sat: float = V_SAT_VOLTS
    k_scatter: float = field(default_factory=calibrate_k_scatter)

    def __post_init__(self) -> None:
        if not (self.r_dark > self.r_fixed > self.r_bright > 0):
            raise ValueError("resistances must satisfy r_dark > r_fixed > r_bright > 0")
        if self.gain != 1.5:
            raise ValueError("amplifier gain is fixed by the 0.5k/1k feedback pair")
        if not 0 < self.k_scatter < 1:
            raise ValueError(f"k_scatter out of (0, 1): {self.k_scatter}")


DEFAULT_CHAIN = SmokeChainParams()


def lm35_output(temp_c: float) -> float:
    """Transducer voltage for a temperature, clamped to [0, V_SAT_VOLTS]."""
    return min(max(TEMP_VOLTS_PER_C * temp_c, 0.0), V_SAT_VOLTS)


def ldr_resistance(light_fraction: float, params: SmokeChainParams = DEFAULT_CHAIN) -> float:
    """Photocell resistance at a given light fraction, log-linear in between.

    Endpoints are exact: 0.0 returns the dark resistance, 1.0 the bright one.
    """
    if not 0.0 <= light_fraction <= 1.0:
        raise ValueError(f"light_fraction out of [0, 1]: {light_fraction}")
    if light_fraction == 0.0:
        return params.r_dark
    if light_fraction == 1.0:
        return params.r_bright
    span = math.log10(params.r_dark) - math.log10(params.r_bright)
    return 10.0 ** (math.log10(params.r_dark) - light_fraction * span)


def scatter_fraction(density: float, params: SmokeChainParams = DEFAULT_CHAIN) -> float:
    """Fraction of LED light scattered down onto the photocell."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density out of [0, 1]: {density}")
    return params.k_scatter * density


def divider_voltage(r_ldr: float, params: SmokeChainParams = DEFAULT_CHAIN) -> float:
    """Tap voltage across the photocell leg of the divider."""
    if r_ldr <= 0:
        raise ValueError(f"resistance must be positive: {r_ldr}")
    return params.vcc * r_ldr / (r_ldr + params.r_fixed)


def amplify(v: float, params: SmokeChainParams = DEFAULT_CHAIN) -> float:
    """Non-inverting gain stage; clips at the saturation rail."""
    return min(params.gain * v, params.v_sat)


def smoke_chain_output(density: float, params: SmokeChainParams = DEFAULT_CHAIN) -> float:
    """Voltage at the ADC pin for a smoke density in [0, 1].

    Monotonically non-increasing: no smoke saturates the amplifier, full
    density lands on the calibration target.
    """
    light = scatter_fraction(density, params)
    return amplify(divider_voltage(ldr_resistance(light, params), params), params)


@dataclass
class EnvState:
    """Ground truth the transducers observe: two temperatures, two densities."""

    temp_c: list[float] = field(default_factory=lambda: [25.0, 25.0])
    smoke_density: list[float] = field(default_factory=lambda: [0.0, 0.0])

    def __post_init__(self) -> None:
        if len(self.temp_c) != 2 or len(self.smoke_density) != 2:
            raise ValueError("exactly two temperature and two smoke channels")
        for i in range(2):
            self.set_temp(i, self.temp_c[i])
            self.set_smoke(i, self.smoke_density[i])

    def set_temp(self, index: int, value: float) -> None:
        if not TEMP_MIN_C <= value <= TEMP_MAX_C:
            raise ValueError(f"temperature outside model validity: {value}")
        self.temp_c[index] = float(value)

    def set_smoke(self, index: int, value: float) -> None:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"smoke density out of [0, 1]: {value}")
        self.smoke_density[index] = float(value)


def channel_voltages(env: EnvState, params: SmokeChainParams = DEFAULT_CHAIN) -> tuple[float, float, float, float]:
    """Voltages on ADC channels 0..3: temp 1, temp 2, smoke 1, smoke 2."""
    return (
        lm35_output(env.temp_c[0]),
        lm35_output(env.temp_c[1]),
        smoke_chain_output(env.smoke_density[0], params),
        smoke_chain_output(env.smoke_density[1], params),
    )
