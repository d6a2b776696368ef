import { existsSync, mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";
import { parseResultCsv } from "../src/csv.js";
import { buildFigure, FRONTEND_PRESETS } from "../src/presets.js";
import { renderFigure } from "../src/render.js";
import { main, plotPreset } from "../src/cli.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "testdata");

describe("buildFigure on generated sweeps", () => {
  it("fig3 is a two-panel figure (ratio | CCC) with dashed theory overlays", () => {
    const rows = parseResultCsv(join(FIXTURES, "fig3_sinr_vs_gamma0.csv"));
    const fig = buildFigure("fig3_sinr_vs_gamma0", rows);
    expect(fig.panels).toHaveLength(2);
    expect(fig.panels[0].title).toMatch(/ratio/);
    expect(fig.panels[1].title).toMatch(/CCC/);
    for (const panel of fig.panels) {
      expect(panel.curves.some((c) => c.dashed)).toBe(true);
      expect(panel.curves.some((c) => !c.dashed)).toBe(true);
      // No cross-contamination between the panels.
      const other = panel.title.includes("ratio") ? /(^|, )c(,|$)/ : /(^|, )r(,|$)/;
      expect(panel.curves.every((c) => !other.test(c.label))).toBe(true);
    }
  });

  it("every preset with a fixture renders to a nonempty SVG", () => {
    for (const preset of FRONTEND_PRESETS) {
      const path = join(FIXTURES, `${preset}.csv`);
      if (!existsSync(path)) continue;
      const rows = parseResultCsv(path);
      const svg = renderFigure(buildFigure(preset, rows));
      expect(svg.startsWith("<svg"), preset).toBe(true);
      expect(svg.length, preset).toBeGreaterThan(2000);
    }
  });

  it("roc pairs pd with pfa into monotone x values", () => {
    const rows = parseResultCsv(join(FIXTURES, "fig9_10_roc.csv"));
    const fig = buildFigure("fig9_10_roc", rows);
    for (const panel of fig.panels) {
      expect(panel.xKind).toBe("log");
      for (const c of panel.curves) {
        const sorted = [...c.x].sort((a, b) => a - b);
        expect(c.x).toEqual(sorted);
      }
    }
  });

  it("unknown preset is rejected", () => {
    expect(() => buildFigure("fig99", [])).toThrow(/unknown preset/);
  });
});

describe("cli", () => {
  it("writes one SVG per preset and fails cleanly on a missing CSV", async () => {
    const out = mkdtempSync(join(tmpdir(), "plots-out-"));
    const written = plotPreset("fig3_sinr_vs_gamma0", FIXTURES, out);
    expect(existsSync(written)).toBe(true);
    expect(readFileSync(written, "utf8")).toContain("stroke-dasharray");

    const rc = await main(["--preset", "fig3_sinr_vs_gamma0",
                           "--in", join(FIXTURES, "does-not-exist"),
                           "--out", out]);
    expect(rc).toBe(1);
  });

  it("renders all available fixtures via --preset all semantics", async () => {
    const out = mkdtempSync(join(tmpdir(), "plots-all-"));
    for (const preset of FRONTEND_PRESETS) {
      if (!existsSync(join(FIXTURES, `${preset}.csv`))) continue;
      const rc = await main(["--preset", preset, "--in", FIXTURES, "--out", out]);
      expect(rc, preset).toBe(0);
      expect(existsSync(join(out, `${preset}.svg`)), preset).toBe(true);
    }
  });
});
