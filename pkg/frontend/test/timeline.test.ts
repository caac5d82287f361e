import { describe, expect, it } from "vitest";

import { appendRow, describe as describeEvent, latchValue, selectCode, toRow } from "../src/timeline.js";
import type { TraceEvent } from "../src/types.js";

function ev(kind: string, payload: Record<string, unknown>, seq = 1): TraceEvent {
  return { seq, t: seq, kind, payload };
}

describe("describe", () => {
  it("renders modem traffic with visible control characters", () => {
    expect(describeEvent(ev("AT_TX", { data: "AT+CMGF=1\r" }))).toBe(">> AT+CMGF=1\\r");
    expect(describeEvent(ev("AT_RX", { data: "\r\nOK\r\n" }))).toBe("<< \\r\\nOK\\r\\n");
  });

  it("summarizes deliveries and thresholds", () => {
    expect(describeEvent(ev("SMS_DELIVERED", { to: "017", text: "hi", from: "x" })))
      .toBe("SMS to 017: hi");
    expect(describeEvent(ev("THRESHOLD_SET", { sensor: "temp1", value: 65, source: "remote" })))
      .toBe("temp1 threshold -> 65 (remote)");
  });

  it("falls back to key=value for unknown kinds", () => {
    expect(describeEvent(ev("SOMETHING", { a: 1, b: "x" }))).toBe("a=1 b=x");
  });
});

describe("toRow lanes", () => {
  it("sorts kinds into lanes", () => {
    expect(toRow(ev("AT_TX", { data: "x" })).lane).toBe("modem");
    expect(toRow(ev("RING", { to: "y" })).lane).toBe("radio");
    expect(toRow(ev("FW_ALERT_BEGIN", { sensor: "temp1", byte: "1" })).lane).toBe("firmware");
    expect(toRow(ev("GW_READY", {})).lane).toBe("control");
  });
});

describe("appendRow", () => {
  it("keeps only the newest rows", () => {
    let rows = [toRow(ev("RING", { to: "a" }, 1))];
    for (let seq = 2; seq <= 10; seq += 1) {
      rows = appendRow(rows, toRow(ev("RING", { to: "a" }, seq)), 5);
    }
    expect(rows.map((r) => r.seq)).toEqual([6, 7, 8, 9, 10]);
  });
});

describe("panel encodings", () => {
  it("folds password toggles into the 7-bit latch", () => {
    expect(latchValue([true, true, true, true, true, true, false])).toBe(0x3f);
    expect(latchValue([false, false, false, false, false, false, false])).toBe(0);
    expect(latchValue([true, false, true, false, true, false, true])).toBe(0b1010101);
  });

  it("encodes the sensor select pair", () => {
    expect(selectCode(false, false)).toBe(0); // temp 1
    expect(selectCode(false, true)).toBe(1);  // temp 2
    expect(selectCode(true, false)).toBe(2);  // smoke 1
    expect(selectCode(true, true)).toBe(3);   // smoke 2
  });
});
