/**
 * Application shell: builds the seven panels, owns the session clock,
 * stamps gesture timestamps, and re-renders on every store change.
 */

import { FrameStore } from "./store";
import { SessionClient } from "./client";
import { emit, type Gesture } from "./gestures";
import type { ClientMessage, Condition, Settings } from "./types";
import { DEFAULT_SETTINGS } from "./types";
import { DataPanel } from "./panels/data";
import { AttributePanel } from "./panels/attributes";
import { EncodingPanel } from "./panels/encoding";
import { FilterPanel } from "./panels/filters";
import { CanvasPanel } from "./panels/canvas";
import { DetailsPanel } from "./panels/details";
import { DistributionPanel } from "./panels/distribution";
import { SettingsMenu } from "./panels/settings";

export interface AppOptions {
  baseUrl: string;
  condition?: Condition;
  fetchImpl?: typeof fetch;
  now?: () => number;
}

export class App {
  readonly store = new FrameStore();
  readonly client: SessionClient;
  readonly condition: Condition;
  settings: Settings = { ...DEFAULT_SETTINGS };
  sentMessages: ClientMessage[] = [];

  private panels: {
    data: DataPanel;
    attributes: AttributePanel;
    encoding: EncodingPanel;
    filters: FilterPanel;
    canvas: CanvasPanel;
    details: DetailsPanel;
    distribution: DistributionPanel;
    settings: SettingsMenu;
  };
  private startedAt: number;
  private lastT = 0;
  private now: () => number;
  private queue: Promise<unknown> = Promise.resolve();

  constructor(root: HTMLElement, options: AppOptions) {
    this.condition = options.condition ?? "awareness";
    this.now = options.now ?? (() => Date.now());
    this.startedAt = this.now();
    this.client = new SessionClient(
      options.baseUrl,
      this.store,
      options.fetchImpl ?? fetch,
    );

    const section = (name: string): HTMLElement => {
      const el = document.createElement("section");
      el.id = `${name}-panel`;
      root.appendChild(el);
      return el;
    };

    const emitFn = (g: Gesture) => this.dispatch(g);
    this.panels = {
      data: new DataPanel(section("data")),
      attributes: new AttributePanel(section("attributes"), this.condition, (attr) => {
        this.panels.filters.addAttribute(attr);
        this.renderAll();
      }),
      encoding: new EncodingPanel(section("encoding"), emitFn),
      filters: new FilterPanel(section("filters"), emitFn),
      canvas: new CanvasPanel(section("canvas"), this.condition, emitFn, (el) => {
        this.panels.details.showElement(el);
        this.renderAll();
      }),
      details: new DetailsPanel(section("details"), this.condition, emitFn),
      distribution: new DistributionPanel(section("distribution"), this.condition, emitFn),
      settings: new SettingsMenu(section("settings"), emitFn),
    };
    this.store.onChange(() => this.renderAll());
  }

  /** Session-relative, non-decreasing timestamp in milliseconds. */
  clock(): number {
    const t = Math.max(this.lastT, Math.round(this.now() - this.startedAt));
    this.lastT = t;
    return t;
  }

  /** Stamp a gesture with the clock and send it; sends are serialized. */
  dispatch(gesture: Gesture): Promise<unknown> {
    const stamped = { ...gesture, t: gesture.t || this.clock() } as Gesture;
    if (stamped.kind === "set_settings") {
      Object.assign(this.settings, stamped.settings);
    }
    const msg = emit(stamped);
    this.sentMessages.push(msg);
    this.queue = this.queue.then(() => this.client.send(msg));
    return this.queue;
  }

  async start(): Promise<void> {
    await this.client.open();
  }

  renderAll(): void {
    this.panels.data.render(this.store);
    this.panels.attributes.render(this.store, this.settings);
    this.panels.encoding.render(this.store);
    this.panels.filters.render(this.store);
    this.panels.canvas.render(this.store, this.settings);
    this.panels.details.render(this.store, this.settings);
    this.panels.distribution.render(this.store);
    this.panels.settings.render(this.settings);
  }
}

export function mount(root: HTMLElement, options: AppOptions): App {
  return new App(root, options);
}
