"""HTTP/SSE control surface over one live SimSystem.

Mutations (env, buttons, SMS, step) are funneled through a lock and queued
as events on the next unprocessed tick, so a recorded session replays through
the scenario runner with an identical trace.  Reads return snapshots; the
event stream pushes every TraceEvent in sequence order.
"""

from __future__ import annotations

import asyncio
import json
import threading
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .scenario import ScenarioEvent, _validate
from .system import SimSystem, SystemConfig

MAX_STEP_TICKS = 10_000_000


class EnvSet(BaseModel):
    sensor: str
    value: float


class ButtonPress(BaseModel):
    kind: str
    latch: int = Field(ge=0, le=127)
    select: int | None = None
    range: str | None = None


class SmsIn(BaseModel):
    from_: str = Field(alias="from")
    text: str


class StepRequest(BaseModel):
    ticks: int = Field(ge=0, le=MAX_STEP_TICKS)


class PaceRequest(BaseModel):
    ticks_per_second: float = Field(ge=0, le=1_000_000)


class Pacer:
    """Background wall-clock driver; rate 0 means paused.

    Only the number of ticks advanced depends on the wall clock; what each
    tick does is fixed, so pacing never changes a trace's content."""

    def __init__(self, system: SimSystem, lock: threading.Lock, rate: float):
        self.rate = rate
        self._system = system
        self._lock = lock
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def start(self) -> None:
        self._thread = threading.Thread(target=self._loop, name="firesim-pacer", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2)

    def _loop(self) -> None:
        carry = 0.0
        while not self._stop.wait(0.02):
            if self.rate <= 0:
                carry = 0.0
                continue
            carry += self.rate * 0.02
            ticks = int(carry)
            if ticks:
                carry -= ticks
                with self._lock:
                    self._system.step(ticks)


def _queue_op(system: SimSystem, op: str, args: dict) -> ScenarioEvent:
    # reuse scenario validation so API input rules match file input rules
    event = _validate({"t": system.now, "op": op, **args}, "<api>", 0)
    system.queue_event(event)
    return event


def create_app(config: SystemConfig | None = None, ui_dir: str | Path | None = None,
               pace: float = 0.0) -> FastAPI:
    system = SimSystem(config)
    lock = threading.Lock()
    pacer = Pacer(system, lock, pace)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        pacer.start()
        yield
        pacer.stop()

    app = FastAPI(title="firesim", lifespan=lifespan)
    app.state.system = system
    app.state.lock = lock
    app.state.pacer = pacer

    def queue_or_422(op: str, args: dict) -> dict:
        with lock:
            try:
                event = _queue_op(system, op, args)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            return {"scheduled_at": event.t}

    @app.post("/api/env")
    def post_env(body: EnvSet):
        kind_map = {"temp1": ("set_temp", 1), "temp2": ("set_temp", 2),
                    "smoke1": ("set_smoke", 1), "smoke2": ("set_smoke", 2)}
        if body.sensor not in kind_map:
            raise HTTPException(status_code=422, detail=f"unknown sensor {body.sensor!r}")
        op, index = kind_map[body.sensor]
        return queue_or_422(op, {"sensor": index, "value": body.value})

    @app.post("/api/button")
    def post_button(body: ButtonPress):
        if body.kind == "pw_mode":
            return queue_or_422("press_pw_mode", {"latch": body.latch})
        if body.kind == "commit":
            return queue_or_422("commit_password", {"latch": body.latch})
        if body.kind == "threshold":
            if body.select is None or body.range is None:
                raise HTTPException(status_code=422,
                                    detail="threshold press needs select and range")
            return queue_or_422("set_threshold_local", {
                "latch": body.latch, "select": body.select, "range": body.range})
        raise HTTPException(status_code=422, detail=f"unknown button kind {body.kind!r}")

    @app.post("/api/sms")
    def post_sms(body: SmsIn):
        return queue_or_422("send_sms", {"from": body.from_, "text": body.text})

    @app.post("/api/step")
    def post_step(body: StepRequest):
        with lock:
            return {"now": system.step(body.ticks)}

    @app.post("/api/pace")
    def post_pace(body: PaceRequest):
        pacer.rate = body.ticks_per_second
        return {"ticks_per_second": pacer.rate}

    @app.get("/api/state")
    def get_state():
        with lock:
            return system.state_snapshot()

    @app.get("/api/events")
    def get_events(since: int = 0):
        with lock:
            events = [e.to_dict() for e in system.trace.since(since)]
            return {"events": events, "last_seq": system.trace.last_seq, "now": system.now}

    @app.get("/api/oplog")
    def get_oplog():
        with lock:
            return system.oplog_scenario()

    @app.get("/api/stream")
    async def get_stream(since: int = 0, limit: int = 0):
        # limit > 0 closes the stream after that many events (handy for
        # polling clients and tests); 0 streams forever
        async def generate(cursor: int):
            sent = 0
            while True:
                with lock:
                    fresh = system.trace.since(cursor)
                for event in fresh:
                    cursor = event.seq
                    yield f"id: {event.seq}\ndata: {event.to_json()}\n\n"
                    sent += 1
                    if limit and sent >= limit:
                        return
                await asyncio.sleep(0.05)

        return StreamingResponse(generate(since), media_type="text/event-stream",
                                 headers={"Cache-Control": "no-cache"})

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="console")

    return app
