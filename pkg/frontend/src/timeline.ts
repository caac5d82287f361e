// Pure helpers turning trace events into displayable rows.  Rendering code
// stays dumb; everything here is unit-testable.

import type { TraceEvent } from "./types.js";

export interface TimelineRow {
  seq: number;
  t: number;
  kind: string;
  text: string;
  lane: "modem" | "radio" | "firmware" | "control";
}

const LANES: Record<string, TimelineRow["lane"]> = {
  AT_TX: "modem",
  AT_RX: "modem",
  SMS_DELIVERED: "radio",
  SMS_DROPPED: "radio",
  SMS_RECEIVED: "radio",
  SIM_FULL: "radio",
  RING: "radio",
  RING_DROPPED: "radio",
  FW_ALERT_BEGIN: "firmware",
  FW_ALERT_END: "firmware",
  THRESHOLD_SET: "firmware",
  ALERT_BYTE: "firmware",
};

function escapeControl(raw: string): string {
  return raw.replace(/\r/g, "\\r").replace(/\n/g, "\\n");
}

export function describe(event: TraceEvent): string {
  const p = event.payload;
  switch (event.kind) {
    case "AT_TX":
      return `>> ${escapeControl(String(p.data))}`;
    case "AT_RX":
      return `<< ${escapeControl(String(p.data))}`;
    case "SMS_DELIVERED":
      return `SMS to ${p.to}: ${p.text}`;
    case "SMS_RECEIVED":
      return `SMS from ${p.from} stored in slot ${p.slot}: ${p.text}`;
    case "RING":
      return `ringing ${p.to}`;
    case "ALERT_BYTE":
      return `gateway latched ${p.sensor} (byte '${p.byte}')`;
    case "FW_ALERT_BEGIN":
      return `${p.sensor} over threshold, streaming '${p.byte}'`;
    case "FW_ALERT_END":
      return `${p.sensor} back under threshold`;
    case "THRESHOLD_SET":
      return `${p.sensor} threshold -> ${p.value} (${p.source})`;
    case "CMD_REJECTED":
      return `command rejected (${p.reason})`;
    case "RESET":
      return "alert latches cleared";
    case "ENV_SET":
      return `${p.sensor} = ${p.value}`;
    case "PW_MODE":
      return `password mode ${p.result}`;
    case "PW_COMMIT":
      return `password commit ${p.result}`;
    default:
      return Object.entries(p).map(([k, v]) => `${k}=${v}`).join(" ");
  }
}

export function toRow(event: TraceEvent): TimelineRow {
  return {
    seq: event.seq,
    t: event.t,
    kind: event.kind,
    text: describe(event),
    lane: LANES[event.kind] ?? "control",
  };
}

/** Keep the newest `limit` rows, in seq order. */
export function appendRow(rows: TimelineRow[], row: TimelineRow, limit: number): TimelineRow[] {
  const next = rows.concat(row);
  return next.length > limit ? next.slice(next.length - limit) : next;
}

export function latchValue(toggles: boolean[]): number {
  // toggle i is password button on port-C pin i
  return toggles.reduce((acc, on, i) => (on ? acc | (1 << i) : acc), 0);
}

export function selectCode(button2: boolean, button1: boolean): number {
  return (button2 ? 2 : 0) | (button1 ? 1 : 0);
}
