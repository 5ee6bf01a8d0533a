/**
 * Filter Panel: range sliders for Q/T attributes, category multiselects
 * for N. Controls appear when the Attribute Panel's filter shortcut is
 * used; every commit emits one set_filter gesture.
 */

import type { FrameStore } from "../store";
import type { Gesture } from "../gestures";
import type { FilterInfo } from "../types";

export class FilterPanel {
  private active = new Set<string>();

  constructor(
    private root: HTMLElement,
    private emit: (g: Gesture) => void,
  ) {
    this.root.classList.add("panel", "filter-panel");
  }

  /** Called by the Attribute Panel's filter shortcut. */
  addAttribute(name: string): void {
    this.active.add(name);
  }

  render(store: FrameStore): void {
    this.root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = "Filters";
    this.root.appendChild(heading);

    for (const f of store.spec?.filters ?? []) {
      this.active.add(f.attribute);
    }
    const current = new Map<string, FilterInfo>(
      (store.spec?.filters ?? []).map((f) => [f.attribute, f]),
    );

    for (const name of this.active) {
      const attr = store.attribute(name);
      if (!attr) continue;
      const box = document.createElement("fieldset");
      box.dataset.attribute = name;
      const legend = document.createElement("legend");
      legend.textContent = name;
      box.appendChild(legend);
      if (attr.datatype === "N") {
        this.renderCategoryControl(box, name, attr.domain as string[], current.get(name));
      } else {
        this.renderRangeControl(box, name, attr.domain as number[], current.get(name));
      }
      const clear = document.createElement("button");
      clear.className = "clear-filter";
      clear.textContent = "clear";
      clear.addEventListener("click", () => {
        if (current.has(name)) {
          this.emit({ kind: "set_filter", t: 0, attribute: name, filter: null });
        }
        this.active.delete(name);
      });
      box.appendChild(clear);
      this.root.appendChild(box);
    }
  }

  private renderRangeControl(
    box: HTMLElement,
    name: string,
    domain: number[],
    existing?: FilterInfo,
  ): void {
    const [lo, hi] = domain;
    const loInput = document.createElement("input");
    const hiInput = document.createElement("input");
    for (const [input, bound, fallback] of [
      [loInput, "lo", lo],
      [hiInput, "hi", hi],
    ] as const) {
      input.type = "range";
      input.min = String(lo);
      input.max = String(hi);
      input.step = "any";
      input.name = bound;
      const has = existing && existing.kind === "range";
      input.value = String(has ? (existing as { lo: number; hi: number })[bound] : fallback);
      box.appendChild(input);
    }
    const commit = () =>
      this.emit({
        kind: "set_filter",
        t: 0,
        attribute: name,
        filter: { kind: "range", lo: Number(loInput.value), hi: Number(hiInput.value) },
      });
    loInput.addEventListener("change", commit);
    hiInput.addEventListener("change", commit);
  }

  private renderCategoryControl(
    box: HTMLElement,
    name: string,
    domain: string[],
    existing?: FilterInfo,
  ): void {
    const selected = new Set(
      existing && existing.kind === "categories" ? existing.categories : domain,
    );
    const commit = () => {
      const chosen = Array.from(
        box.querySelectorAll<HTMLInputElement>("input[type=checkbox]:checked"),
      ).map((el) => el.value);
      if (chosen.length === 0) return; // an empty selection is not a filter
      this.emit({
        kind: "set_filter",
        t: 0,
        attribute: name,
        filter: { kind: "categories", categories: chosen },
      });
    };
    for (const category of domain) {
      const label = document.createElement("label");
      const checkbox = document.createElement("input");
      checkbox.type = "checkbox";
      checkbox.value = category;
      checkbox.checked = selected.has(category);
      checkbox.addEventListener("change", commit);
      label.append(checkbox, document.createTextNode(category));
      box.appendChild(label);
    }
  }
}
