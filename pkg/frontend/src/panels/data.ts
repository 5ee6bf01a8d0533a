/** Data Panel: the currently loaded dataset (preview rows). */

import type { FrameStore } from "../store";

export class DataPanel {
  constructor(private root: HTMLElement) {
    this.root.classList.add("panel", "data-panel");
  }

  render(store: FrameStore): void {
    this.root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = `Data (${store.nRows} rows)`;
    this.root.appendChild(heading);
    if (store.attributes.length === 0) return;

    const table = document.createElement("table");
    const head = table.createTHead().insertRow();
    for (const attr of store.attributes) {
      const th = document.createElement("th");
      th.textContent = attr.name;
      head.appendChild(th);
    }
    const body = table.createTBody();
    for (const row of store.rowsPreview) {
      const tr = body.insertRow();
      for (const cell of row) {
        tr.insertCell().textContent = cell === null ? "—" : String(cell);
      }
    }
    this.root.appendChild(table);
  }
}
