// Shapes of the control API's JSON payloads.

export interface TraceEvent {
  seq: number;
  t: number;
  kind: string;
  payload: Record<string, unknown>;
}

export interface FirmwareState {
  thresholds: { temp1: number; temp2: number; smoke1: string; smoke2: string };
  leds: { mode: boolean; fail: boolean; ok: boolean };
  password_mode_open: boolean;
  adc_codes: number[];
}

export interface HandsetState {
  inbox: { from: string; text: string; at: number }[];
  rings: { at: number; from: string }[];
}

export interface SystemState {
  now: number;
  env: { temp_c: number[]; smoke_density: number[] };
  firmware: FirmwareState;
  gateway: { phase: string; latched: string[] };
  handsets: Record<string, HandsetState>;
  last_seq: number;
}

export interface EventsResponse {
  events: TraceEvent[];
  last_seq: number;
  now: number;
}

export type EnvSensor = "temp1" | "temp2" | "smoke1" | "smoke2";

export type ButtonKind = "pw_mode" | "commit" | "threshold";
