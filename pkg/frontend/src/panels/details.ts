/**
 * Details View: hovering a unit mark lists the datapoint's attribute
 * values; hovering an aggregate mark tables every member row. Table
 * rows carry their own trace shading and emit detail_hover on pointer
 * enter.
 */

import type { FrameStore } from "../store";
import type { Gesture } from "../gestures";
import type { Condition, ElementInfo, Settings } from "../types";
import { traceRamp } from "../scales";

export class DetailsPanel {
  private element: ElementInfo | null = null;

  constructor(
    private root: HTMLElement,
    private condition: Condition,
    private emit: (g: Gesture) => void,
  ) {
    this.root.classList.add("panel", "details-panel");
  }

  showElement(el: ElementInfo | null): void {
    this.element = el;
  }

  render(store: FrameStore, settings: Settings): void {
    this.root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = "Details";
    this.root.appendChild(heading);
    if (!this.element) return;

    if (this.element.kind === "unit") {
      this.renderUnit(store, this.element.members[0]);
    } else {
      this.renderAggregate(store, settings, this.element.members);
    }
  }

  private renderUnit(store: FrameStore, row: number): void {
    const list = document.createElement("dl");
    list.className = "unit-details";
    const values = store.rowsPreview[row];
    for (const [i, attr] of store.attributes.entries()) {
      const dt = document.createElement("dt");
      dt.textContent = attr.name;
      const dd = document.createElement("dd");
      dd.textContent = values ? String(values[i] ?? "—") : "(not in preview)";
      list.append(dt, dd);
    }
    this.root.appendChild(list);
  }

  private renderAggregate(store: FrameStore, settings: Settings, members: number[]): void {
    const ramp = traceRamp(settings.color_scale);
    const table = document.createElement("table");
    table.className = "aggregate-details";
    const head = table.createTHead().insertRow();
    for (const attr of store.attributes) {
      const th = document.createElement("th");
      th.textContent = attr.name;
      head.appendChild(th);
    }
    const body = table.createTBody();
    for (const row of members) {
      const tr = body.insertRow();
      tr.dataset.row = String(row);
      if (this.condition === "awareness") {
        tr.style.backgroundColor = ramp(store.datapointIntensity[row] ?? 0);
      }
      tr.addEventListener("pointerenter", () =>
        this.emit({ kind: "detail_hover", t: 0, row }),
      );
      const values = store.rowsPreview[row];
      for (let i = 0; i < store.attributes.length; i += 1) {
        tr.insertCell().textContent = values ? String(values[i] ?? "—") : "…";
      }
    }
    this.root.appendChild(table);
  }
}
