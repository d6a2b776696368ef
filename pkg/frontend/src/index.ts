export { COLUMNS, metricNames, parseResultCsv, toSeries } from "./csv.js";
export type { ResultRow, Series } from "./csv.js";
export { buildFigure, curveLabel, FRONTEND_PRESETS } from "./presets.js";
export type { PresetName } from "./presets.js";
export { renderFigure } from "./render.js";
export type { AxisKind, Curve, FigureSpec, PanelSpec } from "./render.js";
export { main, plotPreset } from "./cli.js";
