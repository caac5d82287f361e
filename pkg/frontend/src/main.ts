// Console bootstrap: wire controls to the API, the SSE stream to the
// timeline, and poll state snapshots for everything else.

import { ApiClient } from "./api.js";
import { EventFeed, parseSseData } from "./stream.js";
import { appendRow, latchValue, selectCode, toRow, TimelineRow } from "./timeline.js";
import { readLatchToggles, renderState, renderTimeline, setConnected, showLatchValue } from "./view.js";
import type { EnvSensor } from "./types.js";

const TIMELINE_LIMIT = 250;

const api = new ApiClient();
let rows: TimelineRow[] = [];
let connected = false;

const feed = new EventFeed(
  async (since) => (await api.getEvents(since)).events,
  (event) => {
    rows = appendRow(rows, toRow(event), TIMELINE_LIMIT);
    renderTimeline(rows);
  },
);

function byId<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

function guard(action: () => Promise<unknown>): void {
  action().catch((error) => console.error("action failed:", error));
}

function wireEnvSlider(sensor: EnvSensor): void {
  const slider = byId<HTMLInputElement>(`${sensor}-slider`);
  slider.addEventListener("change", () => {
    guard(() => api.setEnv(sensor, Number(slider.value)));
  });
}

function currentLatch(): number {
  const latch = latchValue(readLatchToggles());
  showLatchValue(latch);
  return latch;
}

function wireControls(): void {
  (["temp1", "temp2", "smoke1", "smoke2"] as EnvSensor[]).forEach(wireEnvSlider);

  for (let i = 0; i < 7; i += 1) {
    byId<HTMLInputElement>(`pw${i}`).addEventListener("change", currentLatch);
  }
  byId("btn-pw-mode").addEventListener("click", () =>
    guard(() => api.pressButton("pw_mode", currentLatch())));
  byId("btn-commit").addEventListener("click", () =>
    guard(() => api.pressButton("commit", currentLatch())));

  document.querySelectorAll<HTMLButtonElement>("[data-range]").forEach((button) => {
    button.addEventListener("click", () => {
      const select = selectCode(
        byId<HTMLInputElement>("sel2").checked,
        byId<HTMLInputElement>("sel1").checked,
      );
      guard(() => api.pressButton("threshold", currentLatch(), select, button.dataset.range));
    });
  });

  byId("btn-send-sms").addEventListener("click", () => {
    const from = byId<HTMLInputElement>("sms-from").value.trim();
    const text = byId<HTMLInputElement>("sms-text").value;
    guard(() => api.sendSms(from, text));
  });

  byId("btn-pause").addEventListener("click", () => guard(() => api.setPace(0)));
  byId("btn-run").addEventListener("click", () => guard(() => api.setPace(1000)));
  byId("btn-fast").addEventListener("click", () => guard(() => api.setPace(10000)));
  byId("btn-step").addEventListener("click", () => guard(() => api.step(1000)));
}

async function syncState(): Promise<void> {
  try {
    const state = await api.getState();
    if (!connected) {
      connected = true;
      setConnected(true);
    }
    renderState(state);
  } catch {
    if (connected) {
      connected = false;
      setConnected(false);
    }
  }
}

function openStream(): void {
  const source = new EventSource(`/api/stream?since=${feed.lastSeq}`);
  source.onmessage = (message) => {
    const event = parseSseData(message.data);
    if (event) void feed.ingest(event);
  };
  source.onerror = () => {
    source.close();
    setTimeout(openStream, 1000); // reconnect; the feed refetches any gap
  };
}

async function start(): Promise<void> {
  wireControls();
  showLatchValue(latchValue(readLatchToggles()));
  try {
    // backfill the timeline, then stream live
    const backlog = await api.getEvents(0);
    for (const event of backlog.events) void feed.ingest(event);
  } catch {
    // server will come up; polling shows the banner meanwhile
  }
  openStream();
  await syncState();
  setInterval(() => void syncState(), 400);
}

void start();
