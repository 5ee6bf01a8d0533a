/**
 * The gesture emitter must reproduce the reference message log for the
 * scripted session, with chart elements resolved by x_key through a
 * replay transport feeding the recorded server frame batches.
 */

import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { HeadlessClient, type ScriptStep } from "../src/headless";
import { emit, type Gesture } from "../src/gestures";

const FIXTURES = join(__dirname, "fixtures");
const script = JSON.parse(readFileSync(join(FIXTURES, "roundtrip_script.json"), "utf8"));
const referenceMessages = JSON.parse(
  readFileSync(join(FIXTURES, "reference_messages.json"), "utf8"),
);
const goldenBatches = JSON.parse(readFileSync(join(FIXTURES, "golden_frames.json"), "utf8"));

/** fetch stub replaying the recorded batches, one per message. */
function replayFetch(): typeof fetch {
  let next = 0;
  return (async (url: string | URL, init?: RequestInit) => {
    const path = String(url);
    if (path.endsWith("/sessions") && init?.method === "POST") {
      return new Response(JSON.stringify({ session: "replay", condition: "awareness" }), {
        status: 201,
      });
    }
    if (path.endsWith("/messages")) {
      const frames = goldenBatches[next];
      next += 1;
      return new Response(JSON.stringify({ frames }), { status: 200 });
    }
    throw new Error(`unexpected fetch: ${path}`);
  }) as typeof fetch;
}

describe("gesture emission", () => {
  it("replays the 30-gesture script into the reference messages", async () => {
    const client = new HeadlessClient("http://replay", replayFetch());
    await client.open();
    const messages = await client.run(script as ScriptStep[]);
    expect(messages).toEqual(referenceMessages);
  });

  it("hover gestures carry phases and never a dwell", () => {
    const start = emit({ kind: "hover_start", t: 5, element: "e1" });
    const end = emit({ kind: "hover_end", t: 9, element: "e1" });
    expect(start).toEqual({ type: "hover", t: 5, element: "e1", phase: "start" });
    expect(end).toEqual({ type: "hover", t: 9, element: "e1", phase: "end" });
    expect("dwell" in start).toBe(false); // the client never computes dwell
  });

  it("filter removal is an explicit null", () => {
    const msg = emit({ kind: "set_filter", t: 1, attribute: "Age", filter: null });
    expect(msg.filter).toBeNull();
  });

  it("settings changes flatten into the message", () => {
    const msg = emit({
      kind: "set_settings",
      t: 2,
      settings: { color_mode: "binary" },
    } as Gesture);
    expect(msg).toEqual({ type: "set_settings", t: 2, color_mode: "binary" });
  });
});
