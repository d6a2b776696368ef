import { scaleLinear, scaleLog } from "d3-scale";
import { line } from "d3-shape";

export type AxisKind = "linear" | "log";

export interface Curve {
  label: string;
  x: number[];
  y: number[];
  /** Theoretical overlays are dashed; simulated curves are solid. */
  dashed: boolean;
}

export interface PanelSpec {
  title: string;
  xLabel: string;
  yLabel: string;
  xKind?: AxisKind;
  yKind?: AxisKind;
  curves: Curve[];
}

export interface FigureSpec {
  name: string;
  panels: PanelSpec[];
}

const PANEL_W = 420;
const PANEL_H = 330;
const MARGIN = { top: 34, right: 16, bottom: 46, left: 62 };
const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

function finitePoints(c: Curve, logY: boolean, logX: boolean) {
  const pts: Array<[number, number]> = [];
  for (let i = 0; i < c.x.length; i++) {
    const x = c.x[i];
    const y = c.y[i];
    if (!Number.isFinite(x) || !Number.isFinite(y)) continue;
    if (logY && y <= 0) continue;
    if (logX && x <= 0) continue;
    pts.push([x, y]);
  }
  return pts;
}

function makeScale(kind: AxisKind, domain: [number, number], range: [number, number]) {
  if (kind === "log") {
    return scaleLog().domain(domain).range(range).nice();
  }
  let [lo, hi] = domain;
  if (lo === hi) {
    lo -= 1;
    hi += 1;
  }
  return scaleLinear().domain([lo, hi]).range(range).nice();
}

function renderPanel(panel: PanelSpec, xOffset: number): string {
  const logX = panel.xKind === "log";
  const logY = panel.yKind === "log";
  const data = panel.curves.map((c) => finitePoints(c, logY, logX));
  const all = data.flat();
  if (all.length === 0) {
    throw new Error(`panel "${panel.title}" has no drawable points`);
  }
  const xs = all.map((p) => p[0]);
  const ys = all.map((p) => p[1]);
  const innerW = PANEL_W - MARGIN.left - MARGIN.right;
  const innerH = PANEL_H - MARGIN.top - MARGIN.bottom;
  const sx = makeScale(panel.xKind ?? "linear",
    [Math.min(...xs), Math.max(...xs)], [0, innerW]);
  const sy = makeScale(panel.yKind ?? "linear",
    [Math.min(...ys), Math.max(...ys)], [innerH, 0]);

  const parts: string[] = [];
  parts.push(`<g transform="translate(${xOffset + MARGIN.left},${MARGIN.top})">`);
  parts.push(`<rect x="0" y="0" width="${innerW}" height="${innerH}" fill="none" stroke="#444"/>`);
  parts.push(`<text x="${innerW / 2}" y="-14" text-anchor="middle" font-size="14" font-weight="bold">${esc(panel.title)}</text>`);

  const xTicks = sx.ticks(logX ? 4 : 7);
  for (const t of xTicks) {
    const px = sx(t);
    parts.push(`<line x1="${px}" y1="0" x2="${px}" y2="${innerH}" stroke="#ddd"/>`);
    parts.push(`<text x="${px}" y="${innerH + 18}" text-anchor="middle" font-size="11">${logX ? t.toExponential(0) : t}</text>`);
  }
  const yTicks = sy.ticks(logY ? 4 : 7);
  for (const t of yTicks) {
    const py = sy(t);
    parts.push(`<line x1="0" y1="${py}" x2="${innerW}" y2="${py}" stroke="#ddd"/>`);
    parts.push(`<text x="-6" y="${py + 4}" text-anchor="end" font-size="11">${logY ? t.toExponential(0) : t}</text>`);
  }
  parts.push(`<text x="${innerW / 2}" y="${innerH + 38}" text-anchor="middle" font-size="12">${esc(panel.xLabel)}</text>`);
  parts.push(`<text transform="translate(${-46},${innerH / 2}) rotate(-90)" text-anchor="middle" font-size="12">${esc(panel.yLabel)}</text>`);

  const gen = line<[number, number]>()
    .x((d) => sx(d[0]))
    .y((d) => sy(d[1]));
  panel.curves.forEach((curve, i) => {
    const pts = data[i];
    if (pts.length === 0) return;
    const color = PALETTE[i % PALETTE.length];
    const dash = curve.dashed ? ' stroke-dasharray="7,4"' : "";
    const path = gen(pts);
    if (path) {
      parts.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.8"${dash}/>`);
    }
    for (const [x, y] of pts) {
      if (!curve.dashed) {
        parts.push(`<circle cx="${sx(x)}" cy="${sy(y)}" r="2.4" fill="${color}"/>`);
      }
    }
  });

  // Legend: one entry per curve, top-left inside the panel.
  panel.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = 12 + i * 15;
    const dash = curve.dashed ? ' stroke-dasharray="7,4"' : "";
    parts.push(`<line x1="6" y1="${y}" x2="30" y2="${y}" stroke="${color}" stroke-width="1.8"${dash}/>`);
    parts.push(`<text x="34" y="${y + 4}" font-size="11">${esc(curve.label)}</text>`);
  });

  parts.push("</g>");
  return parts.join("\n");
}

/** Render a multi-panel figure to an SVG document string. */
export function renderFigure(spec: FigureSpec): string {
  if (spec.panels.length === 0 ||
      spec.panels.every((p) => p.curves.length === 0)) {
    throw new Error(`figure ${spec.name}: empty curve list`);
  }
  const width = PANEL_W * spec.panels.length;
  const body = spec.panels
    .map((p, i) => {
      if (p.curves.length === 0) {
        throw new Error(`figure ${spec.name}: panel "${p.title}" has no curves`);
      }
      return renderPanel(p, i * PANEL_W);
    })
    .join("\n");
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${PANEL_H}" font-family="sans-serif">`,
    `<rect width="${width}" height="${PANEL_H}" fill="white"/>`,
    body,
    "</svg>",
  ].join("\n");
}
