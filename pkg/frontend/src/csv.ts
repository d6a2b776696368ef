import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { z } from "zod";

export const COLUMNS = [
  "sweep_name",
  "sweep_value",
  "metric",
  "mean",
  "stderr",
  "trials",
  "seed",
] as const;

const rowSchema = z.object({
  sweep_name: z.string().min(1),
  sweep_value: z.number(),
  metric: z.string().min(1),
  mean: z.number(),
  stderr: z.number(),
  trials: z.number().int(),
  seed: z.number().int(),
});

export type ResultRow = z.infer<typeof rowSchema>;

/** One metric's points along the sweep axis, sorted by sweep value. */
export interface Series {
  metric: string;
  x: number[];
  y: number[];
  stderr: number[];
}

export function parseResultCsv(path: string): ResultRow[] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${path}: row ${e.row}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  const missing = COLUMNS.filter((c) => !fields.includes(c));
  if (missing.length > 0) {
    throw new Error(`${path}: missing columns ${missing.join(", ")}`);
  }
  return parsed.data.map((raw, i) => {
    const candidate = {
      sweep_name: raw.sweep_name,
      sweep_value: Number(raw.sweep_value),
      metric: raw.metric,
      mean: Number(raw.mean),
      stderr: Number(raw.stderr),
      trials: Number(raw.trials),
      seed: Number(raw.seed),
    };
    const res = rowSchema.safeParse(candidate);
    if (!res.success) {
      throw new Error(`${path}: row ${i + 2}: ${res.error.issues[0].message}`);
    }
    return res.data;
  });
}

/** Group rows into per-metric series, keeping only finite means. */
export function toSeries(rows: ResultRow[], metrics?: string[]): Series[] {
  const wanted = metrics ? new Set(metrics) : null;
  const byMetric = new Map<string, ResultRow[]>();
  for (const r of rows) {
    if (wanted && !wanted.has(r.metric)) continue;
    if (!Number.isFinite(r.mean)) continue;
    const list = byMetric.get(r.metric) ?? [];
    list.push(r);
    byMetric.set(r.metric, list);
  }
  return [...byMetric.entries()].map(([metric, list]) => {
    const sorted = [...list].sort((a, b) => a.sweep_value - b.sweep_value);
    return {
      metric,
      x: sorted.map((r) => r.sweep_value),
      y: sorted.map((r) => r.mean),
      stderr: sorted.map((r) => r.stderr),
    };
  });
}

export function metricNames(rows: ResultRow[]): string[] {
  return [...new Set(rows.map((r) => r.metric))].sort();
}
