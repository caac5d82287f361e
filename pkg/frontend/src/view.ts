// DOM rendering.  The console renders only server-reported state: controls
// fire API calls and nothing here mutates the model locally.

import type { SystemState } from "./types.js";
import type { TimelineRow } from "./timeline.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export function setConnected(connected: boolean): void {
  el("banner").classList.toggle("hidden", connected);
  el("dot").className = connected ? "dot live" : "dot dead";
  document.querySelectorAll("button, input").forEach((node) => {
    (node as HTMLButtonElement | HTMLInputElement).disabled = !connected;
  });
}

export function renderState(state: SystemState): void {
  el("clock").textContent = `t = ${state.now} ms`;
  el("phase").textContent = state.gateway.phase;

  const env = state.env;
  for (const [id, value] of [
    ["temp1", env.temp_c[0]], ["temp2", env.temp_c[1]],
    ["smoke1", env.smoke_density[0]], ["smoke2", env.smoke_density[1]],
  ] as const) {
    el(`${id}-value`).textContent = id.startsWith("temp")
      ? `${value.toFixed(1)} °C`
      : value.toFixed(2);
    const slider = el<HTMLInputElement>(`${id}-slider`);
    if (document.activeElement !== slider) slider.value = String(value);
  }

  const leds = state.firmware.leds;
  el("led-mode").classList.toggle("on", leds.mode);
  el("led-fail").classList.toggle("on", leds.fail);
  el("led-ok").classList.toggle("on", leds.ok);

  const ths = state.firmware.thresholds;
  el("thresholds").innerHTML = [
    `temp 1: ≥ ${ths.temp1} °C`,
    `temp 2: ≥ ${ths.temp2} °C`,
    `smoke 1: ${ths.smoke1}`,
    `smoke 2: ${ths.smoke2}`,
  ].map((text) => `<span class="chip">${text}</span>`).join(" ");

  const latched = state.gateway.latched;
  el("latched").innerHTML = latched.length === 0
    ? '<span class="chip quiet">none</span>'
    : latched.map((sensor) => `<span class="chip alarm">${sensor}</span>`).join(" ");

  renderHandsets(state);
}

function renderHandsets(state: SystemState): void {
  const container = el("handsets");
  const cards = Object.entries(state.handsets).map(([number, handset]) => {
    const inbox = handset.inbox.length === 0
      ? '<li class="quiet">no messages</li>'
      : handset.inbox.map((message) =>
          `<li><b>${message.from}</b> @${message.at} ms<br>${message.text}</li>`).join("");
    const rings = handset.rings.length === 0
      ? '<span class="quiet">no calls</span>'
      : handset.rings.map((ring) => `<span class="chip ring">☎ ${ring.at} ms</span>`).join(" ");
    return `<div class="card"><h3>${number}</h3><ul>${inbox}</ul><div>${rings}</div></div>`;
  });
  container.innerHTML = cards.join("");
}

export function renderTimeline(rows: TimelineRow[]): void {
  const list = el("timeline");
  list.innerHTML = rows.map((row) =>
    `<li class="lane-${row.lane}"><span class="seq">#${row.seq}</span>` +
    `<span class="time">${row.t} ms</span>` +
    `<span class="kind">${row.kind}</span> ${row.text}</li>`).join("");
  list.scrollTop = list.scrollHeight;
}

export function readLatchToggles(): boolean[] {
  return Array.from({ length: 7 }, (_, i) => el<HTMLInputElement>(`pw${i}`).checked);
}

export function showLatchValue(latch: number): void {
  el("latch-value").textContent = `0x${latch.toString(16).padStart(2, "0").toUpperCase()}`;
}
