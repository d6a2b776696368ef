import { describe, expect, it } from "vitest";
import { renderFigure } from "../src/render.js";
import { curveLabel } from "../src/presets.js";

const curve = (label: string, dashed = false) => ({
  label,
  x: [0, 1, 2],
  y: [1, 3, 2],
  dashed,
});

describe("renderFigure", () => {
  it("draws solid simulated and dashed theoretical curves", () => {
    const svg = renderFigure({
      name: "t",
      panels: [{
        title: "p",
        xLabel: "x",
        yLabel: "y",
        curves: [curve("sim"), curve("thy", true)],
      }],
    });
    expect(svg).toContain("<svg");
    expect(svg).toContain('stroke-dasharray="7,4"');
    expect(svg.match(/<path /g)!.length).toBe(2);
  });

  it("rejects an empty curve list and writes nothing", () => {
    expect(() => renderFigure({ name: "t", panels: [] })).toThrow(/empty/);
    expect(() =>
      renderFigure({
        name: "t",
        panels: [{ title: "p", xLabel: "x", yLabel: "y", curves: [] }],
      })).toThrow(/empty|no curves/);
  });

  it("drops nonpositive values on log axes instead of failing", () => {
    const svg = renderFigure({
      name: "t",
      panels: [{
        title: "p",
        xLabel: "x",
        yLabel: "y",
        yKind: "log",
        curves: [{ label: "a", x: [1, 2, 3], y: [0, 1e-3, 1e-2], dashed: false }],
      }],
    });
    expect(svg).toContain("<path");
  });

  it("escapes markup in labels", () => {
    const svg = renderFigure({
      name: "t",
      panels: [{
        title: "a < b",
        xLabel: "x",
        yLabel: "y",
        curves: [curve("q & r")],
      }],
    });
    expect(svg).toContain("a &lt; b");
    expect(svg).toContain("q &amp; r");
  });
});

describe("curveLabel", () => {
  it("follows the r/c, length, pp/COS, sim convention", () => {
    expect(curveLabel("pp_r_M600_sim")).toBe("r, 600, pp, sim");
    expect(curveLabel("pp_c_M1200_theory")).toBe("c, 1200, pp, theory");
    expect(curveLabel("cos_r_sim")).toBe("r, COS, sim");
    expect(curveLabel("pd_pp_c_M600")).toBe("c, 600, pp");
    expect(curveLabel("pp_r_g-15_rmax8")).toBe("r, -15 dB, 8 m, pp");
  });
});
