/**
 * Encoding Panel: chart type, X, Y, aggregation dropdowns. Any change
 * emits a set_encoding gesture; server violations render verbatim as
 * fix-it messages.
 */

import type { FrameStore } from "../store";
import type { Gesture } from "../gestures";

const CHART_TYPES = ["scatter", "strip", "bar", "line"];
const AGGREGATIONS = ["none", "count", "sum", "min", "max", "average"];

export class EncodingPanel {
  private selects: Record<string, HTMLSelectElement> = {};

  constructor(
    private root: HTMLElement,
    private emit: (g: Gesture) => void,
  ) {
    this.root.classList.add("panel", "encoding-panel");
  }

  render(store: FrameStore): void {
    this.root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = "Encoding";
    this.root.appendChild(heading);

    const attrNames = store.attributes.map((a) => a.name);
    this.addSelect("chart_type", CHART_TYPES, store.spec?.chart_type ?? "bar");
    this.addSelect("x", attrNames, store.spec?.x ?? "");
    this.addSelect("y", ["", ...attrNames], store.spec?.y ?? "");
    this.addSelect("aggregation", AGGREGATIONS, store.spec?.aggregation ?? "count");

    if (store.violations.length > 0) {
      const box = document.createElement("div");
      box.className = "violations";
      for (const message of store.violations) {
        const line = document.createElement("p");
        line.textContent = message; // server wording, verbatim
        box.appendChild(line);
      }
      this.root.appendChild(box);
    }
  }

  private addSelect(name: string, options: string[], current: string): void {
    const label = document.createElement("label");
    label.textContent = name.replace("_", " ");
    const select = document.createElement("select");
    select.name = name;
    for (const option of options) {
      const el = document.createElement("option");
      el.value = option;
      el.textContent = option === "" ? "(none)" : option;
      if (option === current) el.selected = true;
      select.appendChild(el);
    }
    select.addEventListener("change", () => this.changed());
    label.appendChild(select);
    this.root.appendChild(label);
    this.selects[name] = select;
  }

  private changed(): void {
    const value = (k: string) => this.selects[k].value;
    if (!value("x")) return; // nothing to encode yet
    this.emit({
      kind: "set_encoding",
      t: 0, // the app stamps real times
      chart_type: value("chart_type"),
      x: value("x"),
      y: value("y") || null,
      aggregation: value("aggregation"),
    });
  }
}
