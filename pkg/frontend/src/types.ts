/**
 * Wire types mirroring protocol.md. The client renders only what the
 * server sends: intensities, deviation values, and card colors arrive
 * precomputed; no metric is computed here.
 */

export type Datatype = "N" | "Q" | "T";

export interface AttributeInfo {
  name: string;
  datatype: Datatype;
  index: number;
  domain: Array<string | number>;
}

export interface ElementInfo {
  id: string;
  kind: "unit" | "aggregate";
  members: number[];
  value: unknown;
  x_key: unknown;
}

export interface ChartSpecInfo {
  chart_type: "scatter" | "strip" | "bar" | "line";
  x: string;
  y: string | null;
  aggregation: string;
  filters: FilterInfo[];
}

export type FilterSpec =
  | { kind: "range"; lo: number; hi: number }
  | { kind: "categories"; categories: string[] };

export type FilterInfo = FilterSpec & { attribute: string };

export interface CardSnapshot {
  attribute: string;
  datatype: Datatype;
  keys: Array<string | number>;
  observed: number[];
  target: number[];
  total_mass: number;
  missing_mass: number;
  ad: number;
  color_t: number;
  color: string;
  flag: "ok" | "insufficient-evidence";
  edges: number[] | null;
  focus_mode: "percentage" | "raw";
  series: { observed: number[]; target: number[] };
  suggestion: FilterInfo | null;
  open: boolean;
}

export interface OkFrame {
  type: "ok";
  revision: number;
  applied: string;
  frames: number;
}
export interface ErrorFrame {
  type: "error";
  revision: number;
  code: string;
  message: string;
  frames: number;
}
export interface ViolationFrame {
  type: "violation";
  revision: number;
  violations: string[];
  frames: number;
}
export interface SchemaFrame {
  type: "schema";
  revision: number;
  attributes: AttributeInfo[];
  n_rows: number;
  rows_preview: Array<Array<string | number | null>>;
}
export interface ElementsFrame {
  type: "elements";
  revision: number;
  spec: ChartSpecInfo;
  elements: ElementInfo[];
  intensities?: Record<string, number>;
}
export interface IntensitiesFrame {
  type: "intensities";
  revision: number;
  /** Delta maps: an absent key is unchanged since the last frame. */
  elements: Record<string, number>;
  datapoints: Record<string, number>;
}
export interface AttributesFrame {
  type: "attributes";
  revision: number;
  intensities: Record<string, number>;
  order: string[];
}
export interface CardsFrame {
  type: "cards";
  revision: number;
  snapshots: CardSnapshot[];
}

export type ServerFrame =
  | OkFrame
  | ErrorFrame
  | ViolationFrame
  | SchemaFrame
  | ElementsFrame
  | IntensitiesFrame
  | AttributesFrame
  | CardsFrame;

export interface ClientMessage {
  type: string;
  t: number;
  [key: string]: unknown;
}

export type Condition = "awareness" | "control";

export interface Settings {
  sort_by: "order_in_dataset" | "name" | "datatype" | "focus";
  color_mode: "relative" | "absolute" | "binary";
  focus_mode: "percentage" | "raw";
  color_scale: string;
}

export const DEFAULT_SETTINGS: Settings = {
  sort_by: "order_in_dataset",
  color_mode: "relative",
  focus_mode: "percentage",
  color_scale: "default-diverging",
};
