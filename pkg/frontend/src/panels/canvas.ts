/**
 * Visualization Canvas: scatter, strip, bar, and line charts rendered
 * from server-supplied elements. In the awareness build every mark is
 * filled from its server-sent intensity on the trace ramp (white = no
 * interactions); the control build uses a single neutral fill. Pointer
 * enter/leave on a mark emit hover start/end.
 */

import { scaleBand, scaleLinear, select } from "d3";
import type { FrameStore } from "../store";
import type { Gesture } from "../gestures";
import type { Condition, ElementInfo, Settings } from "../types";
import { traceRamp } from "../scales";

const WIDTH = 560;
const HEIGHT = 320;
const MARGIN = { top: 12, right: 12, bottom: 28, left: 46 };
const NEUTRAL_FILL = "#7aa6c2";

export class CanvasPanel {
  hoveredElement: ElementInfo | null = null;

  constructor(
    private root: HTMLElement,
    private condition: Condition,
    private emit: (g: Gesture) => void,
    private onHoverElement: (el: ElementInfo | null) => void,
  ) {
    this.root.classList.add("panel", "canvas-panel");
  }

  render(store: FrameStore, settings: Settings): void {
    this.root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = "Visualization";
    this.root.appendChild(heading);
    if (!store.spec || store.elements.length === 0) return;

    const svg = select(this.root)
      .append("svg")
      .attr("viewBox", `0 0 ${WIDTH} ${HEIGHT}`)
      .attr("width", WIDTH)
      .attr("height", HEIGHT);

    const ramp = traceRamp(settings.color_scale);
    const fill = (el: ElementInfo) =>
      this.condition === "awareness"
        ? ramp(store.elementIntensity[el.id] ?? 0)
        : NEUTRAL_FILL;

    const chart = store.spec.chart_type;
    if (chart === "scatter" || chart === "strip") {
      this.renderUnits(svg, store, fill);
    } else {
      this.renderGroups(svg, store, fill, chart === "line");
    }
  }

  private markAttrs(selection: any, el: ElementInfo): void {
    selection
      .attr("data-element", el.id)
      .attr("data-kind", el.kind)
      .on("pointerenter", () => {
        this.hoveredElement = el;
        this.onHoverElement(el);
        this.emit({ kind: "hover_start", t: 0, element: el.id });
      })
      .on("pointerleave", () => {
        this.hoveredElement = null;
        this.emit({ kind: "hover_end", t: 0, element: el.id });
      });
  }

  private renderUnits(svg: any, store: FrameStore, fill: (el: ElementInfo) => string): void {
    const values = store.elements.map((e) => e.value as [number | string, number | string]);
    const xs = values.map((v) => (Array.isArray(v) ? v[0] : v));
    const ys = values.map((v) => (Array.isArray(v) ? v[1] : 0));
    const x = this.axisScale(xs, [MARGIN.left, WIDTH - MARGIN.right]);
    const y = this.axisScale(ys, [HEIGHT - MARGIN.bottom, MARGIN.top]);

    for (const el of store.elements) {
      const value = el.value as [number | string, number | string];
      const cx = Array.isArray(value) ? x(value[0]) : x(value);
      const cy = Array.isArray(value) && value.length > 1 ? y(value[1]) : HEIGHT / 2;
      const mark = svg
        .append("circle")
        .attr("cx", cx)
        .attr("cy", cy)
        .attr("r", 4)
        .attr("stroke", "#555")
        .attr("fill", fill(el));
      this.markAttrs(mark, el);
    }
  }

  private renderGroups(
    svg: any,
    store: FrameStore,
    fill: (el: ElementInfo) => string,
    asLine: boolean,
  ): void {
    const keys = store.elements.map((e) => this.keyLabel(e.x_key));
    const x = scaleBand<string>().domain(keys).range([MARGIN.left, WIDTH - MARGIN.right]).padding(0.15);
    const numeric = store.elements
      .map((e) => e.value)
      .filter((v): v is number => typeof v === "number");
    const top = numeric.length > 0 ? Math.max(...numeric) : 1;
    const y = scaleLinear().domain([0, top]).nice().range([HEIGHT - MARGIN.bottom, MARGIN.top]);

    if (asLine) {
      const points = store.elements
        .filter((e) => typeof e.value === "number")
        .map((e) => `${(x(this.keyLabel(e.x_key)) ?? 0) + x.bandwidth() / 2},${y(e.value as number)}`);
      svg
        .append("path")
        .attr("class", "line-path")
        .attr("d", points.length ? `M${points.join("L")}` : "")
        .attr("fill", "none")
        .attr("stroke", "#333");
    }
    for (const el of store.elements) {
      if (el.value === null) continue; // all-null aggregate: nothing to draw
      const label = this.keyLabel(el.x_key);
      const mark = asLine
        ? svg
            .append("circle")
            .attr("cx", (x(label) ?? 0) + x.bandwidth() / 2)
            .attr("cy", y(el.value as number))
            .attr("r", 5)
            .attr("stroke", "#333")
            .attr("fill", fill(el))
        : svg
            .append("rect")
            .attr("x", x(label) ?? 0)
            .attr("width", x.bandwidth())
            .attr("y", y(el.value as number))
            .attr("height", HEIGHT - MARGIN.bottom - y(el.value as number))
            .attr("stroke", "#333")
            .attr("fill", fill(el));
      this.markAttrs(mark, el);
    }
  }

  private axisScale(values: Array<number | string>, range: [number, number]) {
    if (values.every((v) => typeof v === "number")) {
      const nums = values as number[];
      const scale = scaleLinear()
        .domain([Math.min(...nums), Math.max(...nums)])
        .nice()
        .range(range);
      return (v: number | string) => scale(v as number);
    }
    const scale = scaleBand<string>()
      .domain(values.map(String))
      .range(range)
      .padding(0.2);
    return (v: number | string) => (scale(String(v)) ?? 0) + scale.bandwidth() / 2;
  }

  private keyLabel(key: unknown): string {
    if (Array.isArray(key)) return `${key[0]}–${key[1]}`;
    return String(key);
  }
}
