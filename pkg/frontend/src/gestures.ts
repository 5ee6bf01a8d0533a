/**
 * Gesture-to-message translation.
 *
 * Every user gesture becomes exactly one client message; the client
 * never computes dwell (hover end is emitted on pointer-leave or
 * element change) and never computes a metric. The same emitter drives
 * both the live panels and the headless client used for scripted
 * round-trip testing, so a scripted session and a real one produce
 * identical server logs.
 */

import type { ClientMessage, FilterSpec } from "./types";

export type Gesture =
  | { kind: "load_dataset"; t: number; text?: string; path?: string; json_text?: string }
  | { kind: "set_encoding"; t: number; chart_type: string; x: string; y?: string | null; aggregation: string }
  | { kind: "set_filter"; t: number; attribute: string; filter: FilterSpec | null }
  | { kind: "hover_start"; t: number; element: string }
  | { kind: "hover_end"; t: number; element: string }
  | { kind: "detail_hover"; t: number; row: number }
  | { kind: "set_target"; t: number; attribute: string; mode: string; weights?: Record<string, number>; points?: Array<[number, number]> }
  | { kind: "set_settings"; t: number; settings: Record<string, string> }
  | { kind: "open_card"; t: number; attribute: string }
  | { kind: "close_card"; t: number; attribute: string };

export function emit(gesture: Gesture): ClientMessage {
  switch (gesture.kind) {
    case "load_dataset": {
      const msg: ClientMessage = { type: "load_dataset", t: gesture.t };
      if (gesture.text !== undefined) msg.text = gesture.text;
      if (gesture.path !== undefined) msg.path = gesture.path;
      if (gesture.json_text !== undefined) msg.json_text = gesture.json_text;
      return msg;
    }
    case "set_encoding":
      return {
        type: "set_encoding",
        t: gesture.t,
        chart_type: gesture.chart_type,
        x: gesture.x,
        y: gesture.y ?? null,
        aggregation: gesture.aggregation,
      };
    case "set_filter":
      return {
        type: "set_filter",
        t: gesture.t,
        attribute: gesture.attribute,
        filter: gesture.filter,
      };
    case "hover_start":
      return { type: "hover", t: gesture.t, element: gesture.element, phase: "start" };
    case "hover_end":
      return { type: "hover", t: gesture.t, element: gesture.element, phase: "end" };
    case "detail_hover":
      return { type: "detail_hover", t: gesture.t, row: gesture.row };
    case "set_target": {
      const msg: ClientMessage = {
        type: "set_target",
        t: gesture.t,
        attribute: gesture.attribute,
        mode: gesture.mode,
      };
      if (gesture.weights !== undefined) msg.weights = gesture.weights;
      if (gesture.points !== undefined) msg.points = gesture.points;
      return msg;
    }
    case "set_settings":
      return { type: "set_settings", t: gesture.t, ...gesture.settings };
    case "open_card":
      return { type: "open_card", t: gesture.t, attribute: gesture.attribute };
    case "close_card":
      return { type: "close_card", t: gesture.t, attribute: gesture.attribute };
  }
}

/** Translate a whole scripted gesture sequence into its message log. */
export function emitScript(gestures: Gesture[]): ClientMessage[] {
  return gestures.map(emit);
}
