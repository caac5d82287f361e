// Thin client over the control API.  Every mutation goes through here and is
// appended to the action log, so a session can be reconstructed and replayed
// (the server keeps the authoritative replayable form at /api/oplog).

import type { ButtonKind, EnvSensor, EventsResponse, SystemState } from "./types.js";

export interface ApiAction {
  method: string;
  path: string;
  body?: unknown;
  scheduledAt?: number;
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  readonly log: ApiAction[] = [];

  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  getState(): Promise<SystemState> {
    return this.get<SystemState>("/api/state");
  }

  getEvents(since: number): Promise<EventsResponse> {
    return this.get<EventsResponse>(`/api/events?since=${since}`);
  }

  async setEnv(sensor: EnvSensor, value: number): Promise<void> {
    await this.post("/api/env", { sensor, value });
  }

  async pressButton(kind: ButtonKind, latch: number, select?: number, range?: string): Promise<void> {
    const body: Record<string, unknown> = { kind, latch };
    if (select !== undefined) body.select = select;
    if (range !== undefined) body.range = range;
    await this.post("/api/button", body);
  }

  async sendSms(from: string, text: string): Promise<void> {
    await this.post("/api/sms", { from, text });
  }

  async step(ticks: number): Promise<number> {
    const result = await this.post<{ now: number }>("/api/step", { ticks });
    return result.now;
  }

  async setPace(ticksPerSecond: number): Promise<void> {
    await this.post("/api/pace", { ticks_per_second: ticksPerSecond });
  }

  private async get<T>(path: string): Promise<T> {
    const response = await this.fetchFn(this.base + path);
    if (!response.ok) throw new ApiError(response.status, `GET ${path} failed`);
    return (await response.json()) as T;
  }

  private async post<T = unknown>(path: string, body: unknown): Promise<T> {
    const entry: ApiAction = { method: "POST", path, body };
    this.log.push(entry);
    const response = await this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      const detail = await response.text();
      throw new ApiError(response.status, `POST ${path} failed: ${detail}`);
    }
    const payload = (await response.json()) as T & { scheduled_at?: number };
    if (payload && typeof payload.scheduled_at === "number") {
      entry.scheduledAt = payload.scheduled_at;
    }
    return payload;
  }
}
