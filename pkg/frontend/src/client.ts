/**
 * Session transport over the server's HTTP fallback.
 *
 * Browsers cannot open the raw TCP frame channel, so the client posts
 * each message and applies the returned frame batch. All state changes
 * are client-initiated, which makes request-response sufficient.
 */

import type { ClientMessage, ServerFrame } from "./types";
import type { FrameStore } from "./store";

export class SessionClient {
  private sessionId: string | null = null;

  constructor(
    private baseUrl: string,
    private store: FrameStore,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  async open(): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}/sessions`, { method: "POST" });
    if (!resp.ok) throw new Error(`session open failed: ${resp.status}`);
    const doc = (await resp.json()) as { session: string };
    this.sessionId = doc.session;
    return this.sessionId;
  }

  async send(msg: ClientMessage): Promise<ServerFrame[]> {
    if (this.sessionId === null) throw new Error("session not open");
    const resp = await this.fetchImpl(
      `${this.baseUrl}/sessions/${this.sessionId}/messages`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(msg),
      },
    );
    if (!resp.ok) throw new Error(`message failed: ${resp.status}`);
    const doc = (await resp.json()) as { frames: ServerFrame[] };
    this.store.applyBatch(doc.frames);
    return doc.frames;
  }

  async eventLog(): Promise<string> {
    if (this.sessionId === null) throw new Error("session not open");
    const resp = await this.fetchImpl(
      `${this.baseUrl}/sessions/${this.sessionId}/log`,
    );
    if (!resp.ok) throw new Error(`log fetch failed: ${resp.status}`);
    return await resp.text();
  }
}
