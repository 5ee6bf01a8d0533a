/**
 * Attribute Panel: one card per attribute with its datatype badge and a
 * filter shortcut. In the awareness build each card's background shows
 * the server-sent interaction intensity on the trace ramp.
 */

import type { FrameStore } from "../store";
import type { Condition, Datatype, Settings } from "../types";
import { traceRamp } from "../scales";

const BADGES: Record<Datatype, string> = { N: "abc", Q: "#", T: "cal" };

export class AttributePanel {
  constructor(
    private root: HTMLElement,
    private condition: Condition,
    private onFilterClick: (attribute: string) => void,
  ) {
    this.root.classList.add("panel", "attribute-panel");
  }

  render(store: FrameStore, settings: Settings): void {
    this.root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = "Attributes";
    this.root.appendChild(heading);
    const ramp = traceRamp(settings.color_scale);

    for (const name of store.attributeOrder) {
      const attr = store.attribute(name);
      if (!attr) continue;
      const card = document.createElement("div");
      card.className = "attribute-card";
      card.dataset.attribute = name;
      if (this.condition === "awareness") {
        const intensity = store.attributeIntensity[name] ?? 0;
        card.style.backgroundColor = ramp(intensity);
        card.dataset.intensity = String(intensity);
      }

      const badge = document.createElement("span");
      badge.className = `datatype-badge datatype-${attr.datatype}`;
      badge.textContent = BADGES[attr.datatype];
      const label = document.createElement("span");
      label.className = "attribute-name";
      label.textContent = name;
      const filterBtn = document.createElement("button");
      filterBtn.className = "filter-button";
      filterBtn.textContent = "filter";
      filterBtn.addEventListener("click", () => this.onFilterClick(name));

      card.append(badge, label, filterBtn);
      this.root.appendChild(card);
    }
  }
}
