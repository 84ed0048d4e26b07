#!/usr/bin/env node
/**
 * figs <kind> <in.csv> <out.svg>
 *
 * Kinds: EnergyVsAlpha | ObservablesVsJ | TotalEnergyVsJ | GcVsJ | TimingBars.
 * Reads a solver result CSV, writes one vector figure. On any error
 * nothing is written and the exit code is 1.
 */

import * as fs from "fs";
import { parseResultCsv } from "./csv";
import { FIGURE_KINDS, renderFigure } from "./figures";

export function run(argv: string[]): number {
  if (argv.length !== 3) {
    process.stderr.write(
      `usage: figs <kind> <in.csv> <out.svg>\nkinds: ${FIGURE_KINDS.join(" | ")}\n`);
    return 1;
  }
  const [kind, inPath, outPath] = argv;
  try {
    const text = fs.readFileSync(inPath, "utf-8");
    const svg = renderFigure(kind, parseResultCsv(text));
    fs.writeFileSync(outPath, svg, "utf-8");
  } catch (err) {
    process.stderr.write(`figs: ${(err as Error).message}\n`);
    return 1;
  }
  return 0;
}

if (require.main === module) {
  process.exit(run(process.argv.slice(2)));
}
