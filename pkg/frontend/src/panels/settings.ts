/** Settings menu: sort order, color mode, focus mode, color scale. */

import type { Gesture } from "../gestures";
import type { Settings } from "../types";

const OPTIONS: Record<keyof Settings, string[]> = {
  sort_by: ["order_in_dataset", "name", "datatype", "focus"],
  color_mode: ["relative", "absolute", "binary"],
  focus_mode: ["percentage", "raw"],
  color_scale: ["default-diverging", "viridis"],
};

export class SettingsMenu {
  constructor(
    private root: HTMLElement,
    private emit: (g: Gesture) => void,
  ) {
    this.root.classList.add("panel", "settings-menu");
  }

  render(settings: Settings): void {
    this.root.innerHTML = "";
    const heading = document.createElement("h2");
    heading.textContent = "Settings";
    this.root.appendChild(heading);

    for (const key of Object.keys(OPTIONS) as Array<keyof Settings>) {
      const label = document.createElement("label");
      label.textContent = key.replace("_", " ");
      const selectEl = document.createElement("select");
      selectEl.name = key;
      for (const option of OPTIONS[key]) {
        const el = document.createElement("option");
        el.value = option;
        el.textContent = option;
        if (settings[key] === option) el.selected = true;
        selectEl.appendChild(el);
      }
      selectEl.addEventListener("change", () =>
        this.emit({ kind: "set_settings", t: 0, settings: { [key]: selectEl.value } }),
      );
      label.appendChild(selectEl);
      this.root.appendChild(label);
    }
  }
}
