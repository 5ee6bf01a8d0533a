/**
 * Client-side mirror of the session state, fed by server frames.
 *
 * Frames apply in revision order. A frame older than the current
 * revision is dropped; a gap (revision jumps by more than one between
 * batches) drops the frame and fires the resync callback. Intensity
 * frames are deltas and merge into the accumulated maps; an elements
 * frame restates the chart and resets the element intensity baseline.
 */

import type {
  AttributeInfo,
  CardSnapshot,
  ElementInfo,
  ServerFrame,
  ChartSpecInfo,
} from "./types";

export type StoreListener = (store: FrameStore) => void;

export class FrameStore {
  revision = 0;
  attributes: AttributeInfo[] = [];
  nRows = 0;
  rowsPreview: Array<Array<string | number | null>> = [];
  spec: ChartSpecInfo | null = null;
  elements: ElementInfo[] = [];
  elementIntensity: Record<string, number> = {};
  datapointIntensity: Record<string, number> = {};
  attributeIntensity: Record<string, number> = {};
  attributeOrder: string[] = [];
  cards: Map<string, CardSnapshot> = new Map();
  lastError: { code: string; message: string } | null = null;
  violations: string[] = [];
  dropped = 0;

  private listeners: StoreListener[] = [];
  private resyncHandler: (() => void) | null = null;

  onChange(listener: StoreListener): void {
    this.listeners.push(listener);
  }

  onResyncNeeded(handler: () => void): void {
    this.resyncHandler = handler;
  }

  /** Apply one batch of frames (the response to one message). */
  applyBatch(frames: ServerFrame[]): void {
    for (const frame of frames) {
      this.apply(frame);
    }
  }

  apply(frame: ServerFrame): void {
    if (frame.type === "error") {
      this.lastError = { code: frame.code, message: frame.message };
      this.notify();
      return;
    }
    if (frame.type === "violation") {
      this.violations = frame.violations;
      this.notify();
      return;
    }
    if (frame.revision < this.revision) {
      this.dropped += 1; // stale frame from an older batch
      return;
    }
    if (frame.revision > this.revision + 1) {
      this.dropped += 1; // gap: we missed a batch somewhere
      this.resyncHandler?.();
      return;
    }
    this.revision = frame.revision;

    switch (frame.type) {
      case "ok":
        this.lastError = null;
        this.violations = [];
        break;
      case "schema":
        this.attributes = frame.attributes;
        this.nRows = frame.n_rows;
        this.rowsPreview = frame.rows_preview;
        this.attributeOrder = frame.attributes.map((a) => a.name);
        this.attributeIntensity = {};
        this.datapointIntensity = {};
        this.elementIntensity = {};
        this.elements = [];
        this.spec = null;
        this.cards = new Map();
        break;
      case "elements":
        this.spec = frame.spec;
        this.elements = frame.elements;
        this.elementIntensity = { ...(frame.intensities ?? {}) };
        break;
      case "intensities":
        Object.assign(this.elementIntensity, frame.elements);
        Object.assign(this.datapointIntensity, frame.datapoints);
        break;
      case "attributes":
        this.attributeIntensity = frame.intensities;
        this.attributeOrder = frame.order;
        break;
      case "cards":
        for (const snap of frame.snapshots) {
          this.cards.set(snap.attribute, snap);
        }
        break;
    }
    this.notify();
  }

  attribute(name: string): AttributeInfo | undefined {
    return this.attributes.find((a) => a.name === name);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this);
    }
  }
}
