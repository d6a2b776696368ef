import { ResultRow, Series, toSeries } from "./csv.js";
import { Curve, FigureSpec, PanelSpec } from "./render.js";

/** Legend naming: 'r'/'c' for the RDM kind, 'pp' for the sub-block
 *  framework, 'sim' vs theory; sub-block lengths appear as plain numbers. */
export function curveLabel(metric: string): string {
  const parts: string[] = [];
  const kind = /(?:^|_)(r|c)(?:_|$)/.exec(metric);
  if (kind) parts.push(kind[1]);
  const mt = /_M(\d+)/.exec(metric);
  if (mt) parts.push(mt[1]);
  const g = /_g(-?\d+)/.exec(metric);
  if (g) parts.push(`${g[1]} dB`);
  const rmax = /_rmax([\d.]+)/.exec(metric);
  if (rmax) parts.push(`${rmax[1]} m`);
  if (/_lo(_|$)/.test(metric)) parts.push("lo");
  if (/_hi(_|$)/.test(metric)) parts.push("hi");
  parts.push(metric.includes("cos") ? "COS" : "pp");
  if (metric.endsWith("_sim")) parts.push("sim");
  if (metric.endsWith("_theory")) parts.push("theory");
  return parts.join(", ");
}

const isTheory = (m: string) => m.endsWith("_theory");

function seriesToCurves(series: Series[]): Curve[] {
  // Solid simulated curves first, each theory overlay dashed after it.
  const sims = series.filter((s) => !isTheory(s.metric));
  const thys = series.filter((s) => isTheory(s.metric));
  const out: Curve[] = [];
  for (const s of [...sims, ...thys]) {
    out.push({ label: curveLabel(s.metric), x: s.x, y: s.y,
               dashed: isTheory(s.metric) });
  }
  return out;
}

function pick(rows: ResultRow[], pred: (m: string) => boolean): Curve[] {
  const names = [...new Set(rows.map((r) => r.metric))].filter(pred).sort();
  return seriesToCurves(toSeries(rows, names));
}

function kindOf(metric: string): "r" | "c" | null {
  // The RDM kind token appears between underscores: pp_r_M600_sim, cos_c_sim,
  // pd_pp_r_M600, pfa_cos_c_g-15_rmax8.
  for (const token of metric.split("_")) {
    if (token === "r") return "r";
    if (token === "c") return "c";
  }
  return null;
}

function figureSinr(name: string, rows: ResultRow[], xLabel: string): FigureSpec {
  return {
    name,
    panels: [
      {
        title: "ratio-based RDM",
        xLabel,
        yLabel: "SINR (dB)",
        curves: pick(rows, (m) => kindOf(m) === "r"),
      },
      {
        title: "CCC-based RDM",
        xLabel,
        yLabel: "SINR (dB)",
        curves: pick(rows, (m) => kindOf(m) === "c"),
      },
    ],
  };
}

function figureDetection(name: string, rows: ResultRow[]): FigureSpec {
  return {
    name,
    panels: [
      {
        title: "detection probability",
        xLabel: "gamma0 (dB)",
        yLabel: "Pd",
        curves: pick(rows, (m) => m.startsWith("pd_")),
      },
      {
        title: "false-alarm rate",
        xLabel: "gamma0 (dB)",
        yLabel: "Pfa",
        yKind: "log",
        curves: pick(rows, (m) => m.startsWith("pfa_")),
      },
    ],
  };
}

function figureRoc(name: string, rows: ResultRow[]): FigureSpec {
  // Pair pd_X with pfa_X across the threshold sweep to get ROC points.
  const metrics = [...new Set(rows.map((r) => r.metric))];
  const bases = metrics
    .filter((m) => m.startsWith("pd_"))
    .map((m) => m.slice(3))
    .filter((b) => metrics.includes(`pfa_${b}`))
    .sort();
  const panels: PanelSpec[] = (["r", "c"] as const).map((kind) => {
    const curves: Curve[] = [];
    for (const b of bases) {
      if (kindOf(b) !== kind) continue;
      const pd = toSeries(rows, [`pd_${b}`])[0];
      const pfa = toSeries(rows, [`pfa_${b}`])[0];
      if (!pd || !pfa) continue;
      const pts = pd.x
        .map((_, i) => [pfa.y[i], pd.y[i]] as const)
        .filter(([x]) => x > 0)
        .sort((a, b2) => a[0] - b2[0]);
      curves.push({
        label: curveLabel(b),
        x: pts.map((p) => p[0]),
        y: pts.map((p) => p[1]),
        dashed: false,
      });
    }
    return {
      title: kind === "r" ? "ROC, ratio-based RDM" : "ROC, CCC-based RDM",
      xLabel: "empirical Pfa",
      yLabel: "Pd",
      xKind: "log" as const,
      curves,
    };
  });
  return { name, panels };
}

function figureValidation(name: string, rows: ResultRow[]): FigureSpec {
  const emp = toSeries(rows, [...new Set(rows.map((r) => r.metric))]
    .filter((m) => !isTheory(m)));
  const thy = toSeries(rows, [...new Set(rows.map((r) => r.metric))]
    .filter(isTheory));
  const curves: Curve[] = [
    {
      label: "empirical",
      x: emp.map((s) => s.x[0]),
      y: emp.map((s) => s.y[0]),
      dashed: false,
    },
    {
      label: "theory",
      x: thy.map((s) => s.x[0]),
      y: thy.map((s) => s.y[0]),
      dashed: true,
    },
  ];
  return {
    name,
    panels: [{
      title: "statistical checks (by index)",
      xLabel: "check index",
      yLabel: "value",
      curves,
    }],
  };
}

export const FRONTEND_PRESETS = [
  "fig3_sinr_vs_gamma0",
  "fig4_sinr_vs_qtilde",
  "fig5_6_sinr_vs_qbar",
  "fig7_8_pd_pfa_vs_gamma0",
  "fig9_10_roc",
  "fig11_pd_vs_qbar",
  "lemma_validation",
  "proposition_validation",
] as const;

export type PresetName = (typeof FRONTEND_PRESETS)[number];

export function buildFigure(preset: string, rows: ResultRow[]): FigureSpec {
  switch (preset) {
    case "fig3_sinr_vs_gamma0":
      return figureSinr(preset, rows, "gamma0 (dB)");
    case "fig4_sinr_vs_qtilde":
      return figureSinr(preset, rows, "VCP length (samples)");
    case "fig5_6_sinr_vs_qbar":
      return figureSinr(preset, rows, "overlap (samples)");
    case "fig7_8_pd_pfa_vs_gamma0":
      return figureDetection(preset, rows);
    case "fig9_10_roc":
      return figureRoc(preset, rows);
    case "fig11_pd_vs_qbar": {
      return {
        name: preset,
        panels: [{
          title: "detection probability vs overlap",
          xLabel: "overlap (samples)",
          yLabel: "Pd",
          curves: pick(rows, (m) => m.startsWith("pd_")),
        }],
      };
    }
    case "lemma_validation":
    case "proposition_validation":
      return figureValidation(preset, rows);
    default:
      throw new Error(`unknown preset ${preset}`);
  }
}
