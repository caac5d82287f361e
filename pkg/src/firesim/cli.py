"""Command line entry points: scripted runs and the live control server."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .scenario import Scenario, ScenarioError, bundled_scenario, load_scenario
from .system import ExpectationFailed, SimSystem, SystemConfig, run_scenario


def _load_config(path: str | None) -> SystemConfig:
    if path is None:
        return SystemConfig.default()
    return SystemConfig.from_file(path)


def _resolve_scenario(ref: str) -> Scenario:
    if Path(ref).exists():
        return load_scenario(ref)
    return bundled_scenario(ref)


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        config = _load_config(args.config)
        scenario = _resolve_scenario(args.scenario)
    except (ScenarioError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    system = SimSystem(config)
    system.schedule(scenario)
    failure: ExpectationFailed | None = None
    try:
        system.step(args.duration)
    except ExpectationFailed as exc:
        failure = exc

    if args.trace:
        system.trace.write_jsonl(args.trace)

    delivered = len(system.trace.find("SMS_DELIVERED"))
    rings = len(system.trace.find("RING"))
    print(f"scenario {scenario.name!r}: {system.now} ms simulated, "
          f"{system.trace.last_seq} events, {delivered} SMS delivered, {rings} rings")
    if failure is not None:
        print(f"expectation failed: {failure}", file=sys.stderr)
        return 2
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    try:
        config = _load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    ui_dir = args.ui
    if ui_dir is None:
        candidate = Path("frontend") / "public"
        ui_dir = str(candidate) if candidate.is_dir() else None

    import uvicorn

    from .api import create_app

    app = create_app(config, ui_dir=ui_dir, pace=args.pace)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="firesim",
                                     description="Deterministic fire-alert system simulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scripted scenario and exit")
    run_p.add_argument("--scenario", required=True,
                       help="scenario file path, or the name of a bundled scenario")
    run_p.add_argument("--duration", required=True, type=int, help="ticks (logical ms) to run")
    run_p.add_argument("--trace", help="write the canonical trace to this JSONL file")
    run_p.add_argument("--config", help="system config JSON file")
    run_p.set_defaults(func=_cmd_run)

    serve_p = sub.add_parser("serve", help="serve the HTTP/SSE control API")
    serve_p.add_argument("--port", type=int, default=8000)
    serve_p.add_argument("--host", default="127.0.0.1")
    serve_p.add_argument("--config", help="system config JSON file")
    serve_p.add_argument("--pace", type=float, default=1000.0,
                         help="ticks per wall-clock second (0 = paused, step manually)")
    serve_p.add_argument("--ui", help="directory of console assets to serve at /")
    serve_p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
