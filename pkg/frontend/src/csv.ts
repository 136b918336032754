/** Strict parser for qlandscape scan CSVs. */

export const REQUIRED_COLUMNS = [
  "phi", "psi", "J0", "P", "count_below", "samples", "label",
] as const;

export const DOMAIN_LABELS = ["D1", "D2", "D3", "D4", "B"] as const;
export type DomainLabel = (typeof DOMAIN_LABELS)[number];

export interface ScanCell {
  phi: number;
  psi: number;
  J0: number;
  P: number;
  countBelow: number;
  samples: number;
  label: DomainLabel;
}

export interface ScanTable {
  /** Cells in file order; rendering never reorders this array. */
  cells: ScanCell[];
  /** Sorted unique angle values defining the grid. */
  phiValues: number[];
  psiValues: number[];
  /** Lookup from (phi index, psi index) into `cells`. */
  indexOf(iPhi: number, iPsi: number): number;
}

export class SchemaError extends Error {}

function checkHeader(headerLine: string): void {
  const header = headerLine.split(",");
  for (const col of REQUIRED_COLUMNS) {
    if (!header.includes(col)) {
      throw new SchemaError(`missing column: ${col}`);
    }
  }
  for (const col of header) {
    if (!(REQUIRED_COLUMNS as readonly string[]).includes(col)) {
      throw new SchemaError(`unknown column: ${col}`);
    }
  }
  if (header.join(",") !== REQUIRED_COLUMNS.join(",")) {
    throw new SchemaError(
      `columns out of order: expected ${REQUIRED_COLUMNS.join(",")}, ` +
      `got ${header.join(",")}`);
  }
}

function parseNumber(token: string, column: string, line: number): number {
  const value = Number(token);
  if (token.trim() === "" || Number.isNaN(value)) {
    throw new SchemaError(
      `column ${column}: cannot parse ${JSON.stringify(token)} on line ${line}`);
  }
  return value;
}

export function parseScanCsv(text: string): ScanTable {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new SchemaError("scan CSV has no data rows");
  }
  checkHeader(lines[0]);

  const cells: ScanCell[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== REQUIRED_COLUMNS.length) {
      throw new SchemaError(
        `line ${i + 1}: expected ${REQUIRED_COLUMNS.length} fields, got ${fields.length}`);
    }
    const label = fields[6];
    if (!(DOMAIN_LABELS as readonly string[]).includes(label)) {
      throw new SchemaError(
        `column label: invalid value ${JSON.stringify(label)} on line ${i + 1}`);
    }
    cells.push({
      phi: parseNumber(fields[0], "phi", i + 1),
      psi: parseNumber(fields[1], "psi", i + 1),
      J0: parseNumber(fields[2], "J0", i + 1),
      P: parseNumber(fields[3], "P", i + 1),
      countBelow: parseNumber(fields[4], "count_below", i + 1),
      samples: parseNumber(fields[5], "samples", i + 1),
      label: label as DomainLabel,
    });
  }

  const phiValues = [...new Set(cells.map((c) => c.phi))].sort((a, b) => a - b);
  const psiValues = [...new Set(cells.map((c) => c.psi))].sort((a, b) => a - b);
  if (phiValues.length * psiValues.length !== cells.length) {
    throw new SchemaError(
      `cells do not form a complete grid: ${phiValues.length} phi x ` +
      `${psiValues.length} psi values but ${cells.length} rows`);
  }
  const index = new Map<string, number>();
  cells.forEach((c, k) => index.set(`${c.phi}|${c.psi}`, k));
  if (index.size !== cells.length) {
    throw new SchemaError("duplicate (phi, psi) cell in scan CSV");
  }
  return {
    cells,
    phiValues,
    psiValues,
    indexOf(iPhi: number, iPsi: number): number {
      const key = `${phiValues[iPhi]}|${psiValues[iPsi]}`;
      const k = index.get(key);
      if (k === undefined) {
        throw new SchemaError(`grid hole at phi index ${iPhi}, psi index ${iPsi}`);
      }
      return k;
    },
  };
}
