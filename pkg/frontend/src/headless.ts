/**
 * Headless client: runs a scripted gesture sequence through the exact
 * same gesture-to-message path the panels use, resolving chart elements
 * by their x_key so scripts stay readable. Used for round-trip testing
 * (script in, server event log out) in both conditions.
 */

import { emit, type Gesture } from "./gestures";
import { FrameStore } from "./store";
import { SessionClient } from "./client";
import type { ClientMessage } from "./types";

export type ScriptStep =
  | Gesture
  | { kind: "hover_start" | "hover_end"; t: number; x_key: unknown }
  | { kind: "detail_hover_member"; t: number; x_key: unknown; index: number };

export class HeadlessClient {
  readonly store = new FrameStore();
  readonly messages: ClientMessage[] = [];
  private client: SessionClient | null = null;

  constructor(baseUrl?: string, fetchImpl?: typeof fetch) {
    if (baseUrl !== undefined) {
      this.client = new SessionClient(baseUrl, this.store, fetchImpl ?? fetch);
    }
  }

  async open(): Promise<void> {
    await this.client?.open();
  }

  /** Run the script; returns the emitted message log. */
  async run(script: ScriptStep[]): Promise<ClientMessage[]> {
    for (const step of script) {
      const gesture = this.resolve(step);
      const msg = emit(gesture);
      this.messages.push(msg);
      if (this.client) {
        await this.client.send(msg);
      }
    }
    return this.messages;
  }

  async eventLog(): Promise<string> {
    if (!this.client) throw new Error("headless client is offline");
    return await this.client.eventLog();
  }

  private resolve(step: ScriptStep): Gesture {
    if ("x_key" in step) {
      const el = this.elementByKey(step.x_key);
      if (step.kind === "detail_hover_member") {
        return { kind: "detail_hover", t: step.t, row: el.members[step.index] };
      }
      return { kind: step.kind, t: step.t, element: el.id };
    }
    return step;
  }

  private elementByKey(xKey: unknown) {
    const el = this.store.elements.find(
      (e) => JSON.stringify(e.x_key) === JSON.stringify(xKey),
    );
    if (!el) throw new Error(`no element with x_key ${JSON.stringify(xKey)}`);
    return el;
  }
}
