/** CLI: render scan CSVs as heatmap figures.
 *
 *   render --scan <csv> [--scan2 <csv> --scan3 <csv>] --layout fig5|fig6
 *          --out <png> [--audit X,Y]
 *
 * Writes the PNG plus <out>.layout.json with panel rectangles and axis
 * ranges.  --audit prints the cell under the given pixel as JSON.  Exit
 * codes: 0 success, 1 data/schema error (the offending column is named),
 * 2 usage error.
 */

import * as fs from "fs";
import { parseArgs } from "util";

import { parseScanCsv, ScanTable } from "./csv";
import { LayoutName, pixelToCell, renderFigure } from "./figure";

const USAGE =
  "usage: render --scan <csv> [--scan2 <csv> --scan3 <csv>] " +
  "--layout fig5|fig6 --out <png> [--audit X,Y]";

export function main(argv: string[]): number {
  if (argv[0] !== "render") {
    process.stderr.write(`${USAGE}\n`);
    return 2;
  }
  let parsed;
  try {
    parsed = parseArgs({
      args: argv.slice(1),
      options: {
        scan: { type: "string" },
        scan2: { type: "string" },
        scan3: { type: "string" },
        layout: { type: "string" },
        out: { type: "string" },
        audit: { type: "string" },
      },
    });
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n${USAGE}\n`);
    return 2;
  }
  const { values } = parsed;
  if (!values.scan || !values.out || !values.layout) {
    process.stderr.write(`${USAGE}\n`);
    return 2;
  }
  if (values.layout !== "fig5" && values.layout !== "fig6") {
    process.stderr.write(`error: unknown layout ${values.layout}\n`);
    return 2;
  }
  const sources = [values.scan, values.scan2, values.scan3]
    .filter((s): s is string => s !== undefined);

  try {
    const tables: ScanTable[] = sources.map((path) =>
      parseScanCsv(fs.readFileSync(path, "utf-8")));
    const { png, info } = renderFigure(values.layout as LayoutName, tables,
                                       sources);
    fs.writeFileSync(values.out, png);
    fs.writeFileSync(`${values.out}.layout.json`,
                     JSON.stringify(info, null, 2) + "\n");
    if (values.audit) {
      const match = /^(\d+),(\d+)$/.exec(values.audit);
      if (!match) {
        process.stderr.write("error: --audit expects X,Y pixel coordinates\n");
        return 2;
      }
      const byName = new Map(sources.map((s, i) => [s, tables[i]]));
      const hit = pixelToCell(info, byName,
                              parseInt(match[1], 10), parseInt(match[2], 10));
      process.stdout.write(JSON.stringify(hit, null, 2) + "\n");
    }
    return 0;
  } catch (err) {
    if (err instanceof Error) {
      process.stderr.write(`error: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
