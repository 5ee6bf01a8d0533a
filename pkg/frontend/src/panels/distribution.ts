/**
 * Distribution Panel: one toggleable card per attribute, its background
 * on the server-sent green-grey-red deviation color. An open card draws
 * the user's observed behavior in blue (bars for N, area for Q/T) over
 * the black target (strips / curve), offers the target-mode editors
 * (draggable bars for N custom weights, click-to-add sketch points for
 * Q/T), and surfaces the server's reverse-filter suggestion, which is
 * applied only when the user presses it.
 */

import { scaleBand, scaleLinear, select } from "d3";
import type { FrameStore } from "../store";
import type { Gesture } from "../gestures";
import type { CardSnapshot, Condition } from "../types";

const W = 260;
const H = 120;
const PAD = { top: 8, right: 8, bottom: 18, left: 8 };

export class DistributionPanel {
  /** In-progress custom editor state, per attribute. */
  private draftWeights = new Map<string, Record<string, number>>();
  private draftPoints = new Map<string, Array<[number, number]>>();

  constructor(
    private root: HTMLElement,
    private condition: Condition,
    private emit: (g: Gesture) => void,
  ) {
    this.root.classList.add("panel", "distribution-panel");
  }

  render(store: FrameStore): void {
    this.root.innerHTML = "";
    if (this.condition === "control") return; // no ex-situ traces at all

    const heading = document.createElement("h2");
    heading.textContent = "Distributions";
    this.root.appendChild(heading);

    for (const name of store.attributeOrder) {
      const snap = store.cards.get(name);
      if (!snap) continue;
      this.root.appendChild(this.renderCard(snap));
    }
  }

  private renderCard(snap: CardSnapshot): HTMLElement {
    const card = document.createElement("div");
    card.className = "distribution-card";
    card.dataset.attribute = snap.attribute;
    card.dataset.open = String(snap.open);
    card.style.backgroundColor =
      snap.flag === "insufficient-evidence" ? "#f2f2f2" : snap.color;

    const header = document.createElement("div");
    header.className = "card-header";
    header.textContent = snap.attribute;
    header.addEventListener("click", () =>
      this.emit({
        kind: snap.open ? "close_card" : "open_card",
        t: 0,
        attribute: snap.attribute,
      }),
    );
    card.appendChild(header);
    if (!snap.open) return card;

    const chart = document.createElement("div");
    chart.className = "card-chart";
    card.appendChild(chart);
    if (snap.datatype === "N") {
      this.renderCategoricalChart(chart, snap);
    } else {
      this.renderBinnedChart(chart, snap);
    }

    card.appendChild(this.renderTargetEditor(snap));
    if (snap.suggestion) {
      card.appendChild(this.renderSuggestion(snap));
    }
    return card;
  }

  /** Blue observed bars over black target strips. */
  private renderCategoricalChart(host: HTMLElement, snap: CardSnapshot): void {
    const svg = select(host)
      .append("svg")
      .attr("viewBox", `0 0 ${W} ${H}`)
      .attr("width", W)
      .attr("height", H);
    const x = scaleBand<string>()
      .domain(snap.keys.map(String))
      .range([PAD.left, W - PAD.right])
      .padding(0.2);
    const peak = Math.max(...snap.series.observed, ...snap.series.target, 1e-9);
    const y = scaleLinear().domain([0, peak]).range([H - PAD.bottom, PAD.top]);

    for (const [i, key] of snap.keys.entries()) {
      svg
        .append("rect")
        .attr("class", "observed-bar")
        .attr("data-key", String(key))
        .attr("x", x(String(key)) ?? 0)
        .attr("width", x.bandwidth())
        .attr("y", y(snap.series.observed[i]))
        .attr("height", H - PAD.bottom - y(snap.series.observed[i]))
        .attr("fill", "#4c8ebf")
        .attr("opacity", 0.85);
      svg
        .append("line")
        .attr("class", "target-strip")
        .attr("x1", x(String(key)) ?? 0)
        .attr("x2", (x(String(key)) ?? 0) + x.bandwidth())
        .attr("y1", y(snap.series.target[i]))
        .attr("y2", y(snap.series.target[i]))
        .attr("stroke", "#111")
        .attr("stroke-width", 2);
    }
  }

  /** Blue observed area under the black target curve. */
  private renderBinnedChart(host: HTMLElement, snap: CardSnapshot): void {
    const svg = select(host)
      .append("svg")
      .attr("viewBox", `0 0 ${W} ${H}`)
      .attr("width", W)
      .attr("height", H);
    const n = snap.keys.length;
    const x = scaleLinear().domain([0, n - 1]).range([PAD.left, W - PAD.right]);
    const peak = Math.max(...snap.series.observed, ...snap.series.target, 1e-9);
    const y = scaleLinear().domain([0, peak]).range([H - PAD.bottom, PAD.top]);

    const area =
      `M${x(0)},${y(0)}` +
      snap.series.observed.map((v, i) => `L${x(i)},${y(v)}`).join("") +
      `L${x(n - 1)},${H - PAD.bottom}Z`;
    svg.append("path").attr("class", "observed-area").attr("d", area).attr("fill", "#4c8ebf").attr("opacity", 0.6);
    const curve = snap.series.target
      .map((v, i) => `${i === 0 ? "M" : "L"}${x(i)},${y(v)}`)
      .join("");
    svg
      .append("path")
      .attr("class", "target-curve")
      .attr("d", curve)
      .attr("fill", "none")
      .attr("stroke", "#111")
      .attr("stroke-width", 2);
  }

  private renderTargetEditor(snap: CardSnapshot): HTMLElement {
    const editor = document.createElement("div");
    editor.className = "target-editor";
    for (const mode of ["proportional", "equal", "custom"]) {
      const label = document.createElement("label");
      const radio = document.createElement("input");
      radio.type = "radio";
      radio.name = `target-${snap.attribute}`;
      radio.value = mode;
      radio.addEventListener("change", () => {
        if (mode === "custom") return; // custom commits from its editor
        this.emit({ kind: "set_target", t: 0, attribute: snap.attribute, mode });
      });
      label.append(radio, document.createTextNode(mode));
      editor.appendChild(label);
    }
    if (snap.datatype === "N") {
      editor.appendChild(this.renderWeightEditor(snap));
    } else {
      editor.appendChild(this.renderSketchEditor(snap));
    }
    return editor;
  }

  /** Custom N: one draggable bar per category; commit sends the weights. */
  private renderWeightEditor(snap: CardSnapshot): HTMLElement {
    const host = document.createElement("div");
    host.className = "weight-editor";
    const weights =
      this.draftWeights.get(snap.attribute) ??
      Object.fromEntries(snap.keys.map((k, i) => [String(k), snap.target[i]]));
    this.draftWeights.set(snap.attribute, weights);

    for (const key of snap.keys.map(String)) {
      const bar = document.createElement("input");
      bar.type = "range";
      bar.min = "0";
      bar.max = "1";
      bar.step = "0.01";
      bar.value = String(weights[key]);
      bar.dataset.category = key;
      bar.addEventListener("input", () => {
        weights[key] = Number(bar.value); // drag in progress
      });
      const label = document.createElement("label");
      label.append(document.createTextNode(key), bar);
      host.appendChild(label);
    }
    const commit = document.createElement("button");
    commit.className = "commit-weights";
    commit.textContent = "set custom target";
    commit.addEventListener("click", () => this.commitWeights(snap.attribute));
    host.appendChild(commit);
    return host;
  }

  /** Exposed for tests and the drag handlers: drag one category's bar. */
  dragWeight(attribute: string, category: string, value: number): void {
    const weights = this.draftWeights.get(attribute) ?? {};
    weights[category] = value;
    this.draftWeights.set(attribute, weights);
  }

  commitWeights(attribute: string): void {
    const weights = this.draftWeights.get(attribute);
    if (!weights) return;
    this.emit({ kind: "set_target", t: 0, attribute, mode: "custom", weights });
  }

  /** Custom Q/T: click adds a control point; commit sends the sketch. */
  private renderSketchEditor(snap: CardSnapshot): HTMLElement {
    const host = document.createElement("div");
    host.className = "sketch-editor";
    const edges = snap.edges ?? [0, 1];
    const lo = edges[0];
    const hi = edges[edges.length - 1];
    const svg = select(host)
      .append("svg")
      .attr("class", "sketch-surface")
      .attr("viewBox", `0 0 ${W} ${H}`)
      .attr("width", W)
      .attr("height", H);
    svg.on("click", (event: MouseEvent) => {
      // Map click position onto (attribute position, proportion).
      const rect = (event.currentTarget as SVGSVGElement).getBoundingClientRect();
      const fx = rect.width > 0 ? (event.clientX - rect.left) / rect.width : 0.5;
      const fy = rect.height > 0 ? (event.clientY - rect.top) / rect.height : 0.5;
      this.addSketchPoint(snap.attribute, lo + fx * (hi - lo), Math.max(0, 1 - fy));
    });
    const commit = document.createElement("button");
    commit.className = "commit-sketch";
    commit.textContent = "set custom target";
    commit.addEventListener("click", () => this.commitSketch(snap.attribute));
    host.appendChild(commit);
    return host;
  }

  /** Exposed for tests and the click handler: add one control point. */
  addSketchPoint(attribute: string, position: number, proportion: number): void {
    const points = this.draftPoints.get(attribute) ?? [];
    points.push([position, proportion]);
    points.sort((a, b) => a[0] - b[0]);
    this.draftPoints.set(attribute, points);
  }

  commitSketch(attribute: string): void {
    const points = this.draftPoints.get(attribute);
    if (!points || points.length < 2) return;
    this.emit({ kind: "set_target", t: 0, attribute, mode: "custom", points });
  }

  private renderSuggestion(snap: CardSnapshot): HTMLElement {
    const chip = document.createElement("div");
    chip.className = "suggestion";
    const suggestion = snap.suggestion!;
    const text =
      suggestion.kind === "categories"
        ? `neglected: ${suggestion.categories.join(", ")}`
        : `neglected range: ${suggestion.lo}–${suggestion.hi}`;
    const label = document.createElement("span");
    label.textContent = text;
    const apply = document.createElement("button");
    apply.className = "apply-suggestion";
    apply.textContent = "apply reverse filter";
    apply.addEventListener("click", () => {
      const { attribute, ...filter } = suggestion;
      this.emit({ kind: "set_filter", t: 0, attribute, filter });
    });
    chip.append(label, apply);
    return chip;
  }
}
