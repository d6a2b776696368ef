#!/usr/bin/env node
import { existsSync, mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { parseResultCsv } from "./csv.js";
import { buildFigure, FRONTEND_PRESETS } from "./presets.js";
import { renderFigure } from "./render.js";

export function plotPreset(preset: string, inDir: string, outDir: string): string {
  const csvPath = join(inDir, `${preset}.csv`);
  if (!existsSync(csvPath)) {
    throw new Error(`no CSV for preset ${preset}: expected ${csvPath}`);
  }
  const rows = parseResultCsv(csvPath);
  const figure = buildFigure(preset, rows);
  const svg = renderFigure(figure);
  mkdirSync(outDir, { recursive: true });
  const outPath = join(outDir, `${preset}.svg`);
  writeFileSync(outPath, svg);
  return outPath;
}

export async function main(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .option("preset", {
      type: "string",
      demandOption: true,
      describe: `one of ${FRONTEND_PRESETS.join(", ")}, or "all"`,
    })
    .option("in", { type: "string", demandOption: true, describe: "directory with sweep CSVs" })
    .option("out", { type: "string", demandOption: true, describe: "directory for SVG output" })
    .strict()
    .parse();

  const presets = args.preset === "all" ? [...FRONTEND_PRESETS] : [args.preset];
  try {
    for (const p of presets) {
      const out = plotPreset(p, args.in as string, args.out as string);
      console.log(`wrote ${out}`);
    }
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  return 0;
}

const invokedDirectly = process.argv[1] &&
  import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => process.exit(code));
}
