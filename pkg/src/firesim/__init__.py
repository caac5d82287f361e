"""firesim: a deterministic desk-scale simulator of an SMS/call fire-alert stack.

The package mirrors the deployed system's layering: analog front end
(envmodel), the MCU program (firmware), the two serial links (serialnet),
the server mobile and its network (gsm), the server daemon (gateway), and
the scheduler/scenario/trace harness (system, scenario, trace) with an HTTP
control surface (api) and CLI (cli).
"""

from .envmodel import (DEFAULT_CHAIN, EnvState, SmokeChainParams, amplify,
                       calibrate_k_scatter, channel_voltages, divider_voltage,
                       ldr_resistance, lm35_output, scatter_fraction,
                       smoke_chain_output)
from .firmware import (Firmware, SensorId, SmokeClass, ThresholdSetting,
                       adc_sample, threshold_code)
from .gateway import Gateway, GatewayConfig, RemoteCommand, parse_remote_command
from .gsm import Handset, MobileNetwork, Modem, SmsMessage
from .scenario import (Scenario, ScenarioError, ScenarioEvent,
                       bundled_scenario, load_scenario, parse_scenario)
from .serialnet import (COM1, COM15, LinkClosedError, LinkConfig, LinkRegistry,
                        SerialLink, standard_registry)
from .system import ExpectationFailed, SimSystem, SystemConfig, run_scenario
from .trace import TraceEvent, TraceRecorder, compare_traces, render_at_transcript

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CHAIN", "EnvState", "SmokeChainParams", "amplify",
    "calibrate_k_scatter", "channel_voltages", "divider_voltage",
    "ldr_resistance", "lm35_output", "scatter_fraction", "smoke_chain_output",
    "Firmware", "SensorId", "SmokeClass", "ThresholdSetting", "adc_sample",
    "threshold_code",
    "Gateway", "GatewayConfig", "RemoteCommand", "parse_remote_command",
    "Handset", "MobileNetwork", "Modem", "SmsMessage",
    "Scenario", "ScenarioError", "ScenarioEvent", "bundled_scenario",
    "load_scenario", "parse_scenario",
    "COM1", "COM15", "LinkClosedError", "LinkConfig", "LinkRegistry",
    "SerialLink", "standard_registry",
    "ExpectationFailed", "SimSystem", "SystemConfig", "run_scenario",
    "TraceEvent", "TraceRecorder", "compare_traces", "render_at_transcript",
    "__version__",
]
