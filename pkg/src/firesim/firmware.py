"""MCU program model: sampling loop, thresholds, alert stream, password logic.

The loop samples four ADC channels every 10 ms and streams one distinct alert
byte per sensor for every tick its threshold condition holds.  Temperature
sensors alert at-or-above their code; smoke sensors alert below theirs (their
chain voltage falls as smoke thickens).  Emission is stateless: the byte
repeats each tick while the condition lasts and stops when it clears, and the
loop never halts after alerting.

Local control mirrors the front-panel wiring: seven password buttons form a
7-bit latch (128 combinations), a mode button opens a ten-minute password
change window, two select buttons pick the sensor, and eight range buttons
pick its threshold.  Three LEDs report mode/fail/ok.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

ADC_VREF = 5.0
ADC_STEPS = 1024
ADC_MAX = 1023
TICK_MS = 10
PASSWORD_WINDOW_MS = 600_000  # password mode holds for ten minutes
DEFAULT_PASSWORD = 0x3F
CRYSTAL_HZ = 11_059_200  # external clock source, recorded for reference

# LED wiring (port D pins).
MODE_LED_PIN = 21
FAIL_LED_PIN = 19
OK_LED_PIN = 20

TEMP_CHOICES = (35, 45, 55, 65, 75)
DEFAULT_TEMP_THRESHOLD_C = 55


class SmokeClass(Enum):
    """Density classes and the chain voltage each one alerts below."""

    HIGH = "High"
    MEDIUM = "Medium"
    LOW = "Low"

    @property
    def volts(self) -> float:
        return {SmokeClass.HIGH: 3.0, SmokeClass.MEDIUM: 3.5, SmokeClass.LOW: 4.0}[self]


DEFAULT_SMOKE_THRESHOLD = SmokeClass.HIGH


class SensorId(Enum):
    """The four sensors, each with a fixed ADC channel and alert byte."""

    TEMP1 = "temp1"
    TEMP2 = "temp2"
    SMOKE1 = "smoke1"
    SMOKE2 = "smoke2"

    @property
    def channel(self) -> int:
        # ADC0 pin 40, ADC1 pin 39, ADC2 pin 38, ADC3 pin 37
        return _CHANNELS[self]

    @property
    def alert_byte(self) -> int:
        return _ALERT_BYTES[self]

    @property
    def is_temp(self) -> bool:
        return self in (SensorId.TEMP1, SensorId.TEMP2)


_CHANNELS = {SensorId.TEMP1: 0, SensorId.TEMP2: 1, SensorId.SMOKE1: 2, SensorId.SMOKE2: 3}
_ALERT_BYTES = {SensorId.TEMP1: ord("1"), SensorId.TEMP2: ord("2"),
                SensorId.SMOKE1: ord("3"), SensorId.SMOKE2: ord("4")}
ALERT_SENSOR_BY_BYTE = {b: s for s, b in _ALERT_BYTES.items()}

# Sensor-select buttons: bit 1 = select button 2, bit 0 = select button 1.
SELECT_CODES = {0b00: SensorId.TEMP1, 0b01: SensorId.TEMP2,
                0b10: SensorId.SMOKE1, 0b11: SensorId.SMOKE2}

# Range buttons on port B: PB0..PB4 pick a temperature, PB5..PB7 a density class.
RANGE_BUTTONS: dict[str, int | SmokeClass] = {
    "PB0": 35, "PB1": 45, "PB2": 55, "PB3": 65, "PB4": 75,
    "PB5": SmokeClass.HIGH, "PB6": SmokeClass.MEDIUM, "PB7": SmokeClass.LOW,
}

# Remote single-byte threshold commands arriving on the serial link.
REMOTE_THRESHOLD_COMMANDS: dict[int, tuple[SensorId, int | SmokeClass]] = {}
for _i, _t in enumerate(TEMP_CHOICES):
    REMOTE_THRESHOLD_COMMANDS[ord("A") + _i] = (SensorId.TEMP1, _t)
    REMOTE_THRESHOLD_COMMANDS[ord("F") + _i] = (SensorId.TEMP2, _t)
for _i, _c in enumerate(SmokeClass):
    REMOTE_THRESHOLD_COMMANDS[ord("K") + _i] = (SensorId.SMOKE1, _c)
    REMOTE_THRESHOLD_COMMANDS[ord("N") + _i] = (SensorId.SMOKE2, _c)
del _i, _t, _c


def adc_sample(v: float) -> int:
    """10-bit conversion against the 5 V reference; clamps at full scale."""
    if v < 0:
        raise ValueError(f"ADC input must be non-negative: {v}")
    return min(math.floor(v * ADC_STEPS / ADC_VREF), ADC_MAX)


@dataclass
class ThresholdSetting:
    """Per-sensor thresholds, restricted to the front-panel choices."""

    temp1: int = DEFAULT_TEMP_THRESHOLD_C
    temp2: int = DEFAULT_TEMP_THRESHOLD_C
    smoke1: SmokeClass = DEFAULT_SMOKE_THRESHOLD
    smoke2: SmokeClass = DEFAULT_SMOKE_THRESHOLD

    def get(self, sensor: SensorId) -> int | SmokeClass:
        return getattr(self, sensor.value)

    def set(self, sensor: SensorId, value: int | SmokeClass) -> None:
        if sensor.is_temp:
            if value not in TEMP_CHOICES:
                raise ValueError(f"temperature threshold not selectable: {value}")
        elif not isinstance(value, SmokeClass):
            raise ValueError(f"smoke threshold must be a density class: {value}")
        setattr(self, sensor.value, value)


def threshold_code(sensor: SensorId, thresholds: ThresholdSetting) -> int:
    """ADC code the comparison runs against for one sensor."""
    setting = thresholds.get(sensor)
    if sensor.is_temp:
        return adc_sample(0.010 * setting)
    return adc_sample(setting.volts)


@dataclass
class LedState:
    mode: bool = False  # password change mode open
    fail: bool = False  # last password change failed
    ok: bool = False    # last password change succeeded


@dataclass(frozen=True)
class ThresholdChange:
    """Record of one applied threshold update, for the trace."""

    sensor: SensorId
    value: int | SmokeClass

    @property
    def payload_value(self) -> int | str:
        return self.value.value if isinstance(self.value, SmokeClass) else self.value


def _check_latch(latch: int) -> None:
    if not 0 <= latch <= 127:
        raise ValueError(f"password latch must be a 7-bit value: {latch}")


class Firmware:
    """One MCU instance.  Behavior is a pure function of initial state plus
    the sequence of tick inputs, button events, and serial bytes."""

    def __init__(self, stored_password: int = DEFAULT_PASSWORD,
                 thresholds: ThresholdSetting | None = None):
        _check_latch(stored_password)
        self.stored_password = stored_password
        self.thresholds = thresholds if thresholds is not None else ThresholdSetting()
        self.pw_mode_until: int | None = None
        self.leds = LedState()
        self.adc_codes = [0, 0, 0, 0]

    # -- sampling loop -----------------------------------------------------

    def tick(self, now: int, inputs: tuple[float, float, float, float]) -> bytes:
        """Sample all channels and return the alert bytes for this tick."""
        if self.pw_mode_until is not None and now >= self.pw_mode_until:
            self.pw_mode_until = None
            self.leds.mode = False
        out = bytearray()
        for sensor in SensorId:
            code = adc_sample(inputs[sensor.channel])
            self.adc_codes[sensor.channel] = code
            limit = threshold_code(sensor, self.thresholds)
            if (code >= limit) if sensor.is_temp else (code < limit):
                out.append(sensor.alert_byte)
        return bytes(out)

    # -- password handling ---------------------------------------------------

    def press_password_mode(self, now: int, latch: int) -> bool:
        """Open (or restart) the change window when the latch matches."""
        _check_latch(latch)
        if latch != self.stored_password:
            return False
        self.pw_mode_until = now + PASSWORD_WINDOW_MS
        self.leds.mode = True
        return True

    def commit_new_password(self, now: int, latch: int) -> bool:
        """Store the latch as the new password while the window is open."""
        _check_latch(latch)
        if self.pw_mode_until is not None and now < self.pw_mode_until:
            self.stored_password = latch
            self.pw_mode_until = None
            self.leds.mode = False
            self.leds.ok = True
            self.leds.fail = False
            return True
        self.pw_mode_until = None
        self.leds.mode = False
        self.leds.ok = False
        self.leds.fail = True
        return False

    # -- threshold controls ----------------------------------------------------

    def set_threshold_local(self, latch: int, select: int, range_button: str) -> ThresholdChange | None:
        """Front-panel threshold change; returns None when the latch is wrong.

        A range button of the wrong kind for the selected sensor is rejected
        outright, regardless of the latch.
        """
        _check_latch(latch)
        try:
            sensor = SELECT_CODES[select]
        except KeyError:
            raise ValueError(f"sensor select code out of range: {select}") from None
        try:
            value = RANGE_BUTTONS[range_button]
        except KeyError:
            raise ValueError(f"unknown range button: {range_button}") from None
        if sensor.is_temp != isinstance(value, int):
            raise ValueError(f"range button {range_button} does not apply to {sensor.value}")
        if latch != self.stored_password:
            return None
        self.thresholds.set(sensor, value)
        return ThresholdChange(sensor, value)

    def handle_serial_byte(self, byte: int) -> ThresholdChange | None:
        """Apply a remote threshold command byte; anything else is ignored."""
        entry = REMOTE_THRESHOLD_COMMANDS.get(byte)
        if entry is None:
            return None
        sensor, value = entry
        self.thresholds.set(sensor, value)
        return ThresholdChange(sensor, value)
