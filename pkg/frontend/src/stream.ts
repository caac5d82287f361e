// Ordered event intake: SSE frames arrive one at a time; the feed guarantees
// handlers see every sequence number exactly once and in order.  A gap
// (missed frames, reconnect) triggers a refetch of the missing range through
// /api/events?since=.

import type { TraceEvent } from "./types.js";

export type FetchSince = (since: number) => Promise<TraceEvent[]>;

export class EventFeed {
  lastSeq = 0;
  private buffered = new Map<number, TraceEvent>();
  private refetching = false;

  constructor(
    private readonly fetchSince: FetchSince,
    private readonly onEvent: (event: TraceEvent) => void,
  ) {}

  /** Feed one incoming event; resolves once all deliverable events went out. */
  async ingest(event: TraceEvent): Promise<void> {
    if (event.seq <= this.lastSeq) return; // duplicate or already refetched
    this.buffered.set(event.seq, event);
    this.drain();
    if (this.buffered.size > 0 && !this.refetching) {
      // something below the smallest buffered seq is missing
      this.refetching = true;
      try {
        const missing = await this.fetchSince(this.lastSeq);
        for (const fetched of missing) {
          if (fetched.seq > this.lastSeq) this.buffered.set(fetched.seq, fetched);
        }
      } finally {
        this.refetching = false;
      }
      this.drain();
    }
  }

  /** Prime the feed from a snapshot's last_seq without emitting anything. */
  fastForward(seq: number): void {
    if (seq > this.lastSeq) {
      this.lastSeq = seq;
      for (const key of [...this.buffered.keys()]) {
        if (key <= seq) this.buffered.delete(key);
      }
    }
  }

  private drain(): void {
    let next = this.buffered.get(this.lastSeq + 1);
    while (next !== undefined) {
      this.buffered.delete(next.seq);
      this.lastSeq = next.seq;
      this.onEvent(next);
      next = this.buffered.get(this.lastSeq + 1);
    }
  }
}

export function parseSseData(data: string): TraceEvent | null {
  try {
    const parsed = JSON.parse(data) as TraceEvent;
    if (typeof parsed.seq === "number" && typeof parsed.kind === "string") return parsed;
    return null;
  } catch {
    return null;
  }
}
