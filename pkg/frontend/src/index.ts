export { render } from "./plots.js";
export type { PlotSpec, PlotKind, GuideLine } from "./plots.js";
export { parseCsv, requireColumns, SchemaError } from "./csv.js";
