/**
 * Presentation ramps for server-supplied intensities. The intensity
 * values themselves always come from the server; these only map a
 * number in [0, 1] onto a CSS color.
 */

import { interpolateBlues, interpolateViridis } from "d3";

export type TraceRamp = (intensity: number) => string;

const WHITE = "#ffffff";

export function traceRamp(colorScale: string): TraceRamp {
  // "viridis" is the color-blind-safe alternative; anything else gets
  // the default white-to-blue ramp.
  if (colorScale === "viridis") {
    return (v) => (v <= 0 ? WHITE : interpolateViridis(1 - 0.8 * v));
  }
  return (v) => (v <= 0 ? WHITE : interpolateBlues(0.15 + 0.85 * v));
}
