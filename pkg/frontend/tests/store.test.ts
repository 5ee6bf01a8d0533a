import { describe, expect, it } from "vitest";

import { FrameStore } from "../src/store";
import type { ServerFrame } from "../src/types";

const schemaFrame = (revision: number): ServerFrame => ({
  type: "schema",
  revision,
  attributes: [
    { name: "c", datatype: "N", index: 0, domain: ["a", "b"] },
    { name: "v", datatype: "Q", index: 1, domain: [0, 10] },
  ],
  n_rows: 2,
  rows_preview: [
    ["a", 1],
    ["b", 2],
  ],
});

describe("FrameStore", () => {
  it("applies frames in revision order", () => {
    const store = new FrameStore();
    store.apply({ type: "ok", revision: 1, applied: "load_dataset", frames: 2 });
    store.apply(schemaFrame(1));
    expect(store.revision).toBe(1);
    expect(store.attributes.map((a) => a.name)).toEqual(["c", "v"]);
    expect(store.attributeOrder).toEqual(["c", "v"]);
  });

  it("drops stale frames", () => {
    const store = new FrameStore();
    store.apply({ type: "ok", revision: 1, applied: "x", frames: 1 } as ServerFrame);
    store.apply({ type: "ok", revision: 2, applied: "y", frames: 1 } as ServerFrame);
    store.apply(schemaFrame(1)); // from an already-superseded batch
    expect(store.attributes).toEqual([]);
    expect(store.dropped).toBe(1);
  });

  it("requests a resync on revision gaps", () => {
    const store = new FrameStore();
    let resyncs = 0;
    store.onResyncNeeded(() => (resyncs += 1));
    store.apply({ type: "ok", revision: 1, applied: "x", frames: 1 } as ServerFrame);
    store.apply({ type: "ok", revision: 5, applied: "y", frames: 1 } as ServerFrame);
    expect(resyncs).toBe(1);
    expect(store.revision).toBe(1);
    expect(store.dropped).toBe(1);
  });

  it("merges intensity deltas and restates on elements frames", () => {
    const store = new FrameStore();
    store.apply({ type: "ok", revision: 1, applied: "x", frames: 1 } as ServerFrame);
    store.apply({
      type: "intensities",
      revision: 1,
      elements: { e1: 0.5 },
      datapoints: { 0: 0.5, 1: 1.0 },
    });
    store.apply({
      type: "intensities",
      revision: 1,
      elements: { e2: 1.0 },
      datapoints: { 0: 0.25 },
    });
    expect(store.elementIntensity).toEqual({ e1: 0.5, e2: 1.0 });
    expect(store.datapointIntensity).toEqual({ 0: 0.25, 1: 1.0 });

    store.apply({
      type: "elements",
      revision: 2,
      spec: { chart_type: "bar", x: "c", y: null, aggregation: "count", filters: [] },
      elements: [],
      intensities: { e9: 0.1 },
    });
    expect(store.elementIntensity).toEqual({ e9: 0.1 }); // baseline restated
  });

  it("keeps card snapshots per attribute and surfaces violations", () => {
    const store = new FrameStore();
    store.apply({ type: "ok", revision: 1, applied: "x", frames: 1 } as ServerFrame);
    store.apply({
      type: "cards",
      revision: 1,
      snapshots: [
        {
          attribute: "c",
          datatype: "N",
          keys: ["a", "b"],
          observed: [1, 0],
          target: [0.5, 0.5],
          total_mass: 1,
          missing_mass: 0,
          ad: 0.3,
          color_t: 0.3,
          color: "#6a8576",
          flag: "ok",
          edges: null,
          focus_mode: "percentage",
          series: { observed: [1, 0], target: [0.5, 0.5] },
          suggestion: null,
          open: false,
        },
      ],
    });
    expect(store.cards.get("c")?.ad).toBe(0.3);

    store.apply({ type: "violation", revision: 1, violations: ["bad encoding"], frames: 1 });
    expect(store.violations).toEqual(["bad encoding"]);
    store.apply({ type: "ok", revision: 2, applied: "y", frames: 1 } as ServerFrame);
    expect(store.violations).toEqual([]); // cleared by the next applied message
  });
});
