/** Figure layouts over scan tables.
 *
 * "fig5": one scan, two panels side by side (domain map | P map).
 * "fig6": one row of (J0 map | P map) per scan, typically three horizons.
 *
 * Axes cover phi in [0, 2*pi) (x, left to right) and psi in [0, 2*pi)
 * (y, bottom to top); cells are painted by grid index so the data is
 * never reordered.  A layout-metadata object accompanies every render
 * (written as <out>.layout.json by the CLI) describing panel rectangles
 * and axis ranges, and backs the pixel-to-cell audit mode.
 */

import { DOMAIN_COLORS, probabilityColor, RGB } from "./colors";
import { ScanCell, ScanTable } from "./csv";
import { BLACK, Raster, TEXT_HEIGHT, textWidth } from "./raster";

export type LayoutName = "fig5" | "fig6";
export type PanelKind = "domains" | "P" | "J0";

export interface FigureSpec {
  layout: LayoutName;
  inputs: string[];
  output: string;
}

export interface PanelInfo {
  kind: PanelKind;
  title: string;
  source: string;
  /** Plot area rectangle [x, y, width, height] in pixels. */
  rect: [number, number, number, number];
  gridPhi: number;
  gridPsi: number;
  axis: {
    phi: { min: number; max: number; openRight: boolean };
    psi: { min: number; max: number; openRight: boolean };
  };
}

export interface FigureLayoutInfo {
  layout: LayoutName;
  width: number;
  height: number;
  panels: PanelInfo[];
}

const TAU = 2 * Math.PI;
const MARGIN_LEFT = 58;
const MARGIN_RIGHT = 14;
const MARGIN_TOP = 30;
const MARGIN_BOTTOM = 44;
const PANEL_GAP = 34;
const ROW_GAP = 26;
const LEGEND_H = 14;

interface PanelDef {
  kind: PanelKind;
  title: string;
  table: ScanTable;
  source: string;
}

function panelRows(layout: LayoutName, tables: ScanTable[],
                   sources: string[]): PanelDef[][] {
  if (layout === "fig5") {
    if (tables.length !== 1) {
      throw new Error(`fig5 layout takes exactly one scan CSV, got ${tables.length}`);
    }
    return [[
      { kind: "domains", title: "domains", table: tables[0], source: sources[0] },
      { kind: "P", title: "P", table: tables[0], source: sources[0] },
    ]];
  }
  if (tables.length < 1) {
    throw new Error("fig6 layout needs at least one scan CSV");
  }
  return tables.map((t, i) => [
    { kind: "J0", title: "J0", table: t, source: sources[i] },
    { kind: "P", title: "P", table: t, source: sources[i] },
  ]);
}

function cellPixels(table: ScanTable): number {
  const n = Math.max(table.phiValues.length, table.psiValues.length);
  return Math.max(2, Math.round(320 / n));
}

function cellColor(kind: PanelKind, cell: ScanCell): RGB {
  if (kind === "domains") return DOMAIN_COLORS[cell.label];
  if (kind === "P") return probabilityColor(cell.P);
  return probabilityColor(cell.J0);
}

const X_TICKS: Array<[number, string]> = [
  [0, "0"], [Math.PI / 2, "pi/2"], [Math.PI, "pi"],
  [(3 * Math.PI) / 2, "3pi/2"], [TAU, "2pi"],
];

function drawPanel(raster: Raster, def: PanelDef, x0: number, y0: number,
                   plotW: number, plotH: number): void {
  const nPhi = def.table.phiValues.length;
  const nPsi = def.table.psiValues.length;
  const cellW = plotW / nPhi;
  const cellH = plotH / nPsi;
  for (let i = 0; i < nPhi; i++) {
    for (let j = 0; j < nPsi; j++) {
      const cell = def.table.cells[def.table.indexOf(i, j)];
      const px = x0 + Math.round(i * cellW);
      const pw = x0 + Math.round((i + 1) * cellW) - px;
      // psi grows upward
      const pyTop = y0 + plotH - Math.round((j + 1) * cellH);
      const ph = y0 + plotH - Math.round(j * cellH) - pyTop;
      raster.fillRect(px, pyTop, pw, ph, cellColor(def.kind, cell));
    }
  }
  raster.strokeRect(x0 - 1, y0 - 1, plotW + 2, plotH + 2, BLACK);

  // title
  raster.drawText(x0 + Math.round(plotW / 2) - Math.round(textWidth(def.title) / 2),
                  y0 - TEXT_HEIGHT - 10, def.title);
  // axis ticks: x = phi, y = psi, both [0, 2pi)
  for (const [value, label] of X_TICKS) {
    const tx = x0 + Math.round((value / TAU) * plotW);
    for (let d = 0; d < 4; d++) raster.set(tx, y0 + plotH + d, BLACK);
    raster.drawText(tx - Math.round(textWidth(label) / 2),
                    y0 + plotH + 6, label);
    const ty = y0 + plotH - Math.round((value / TAU) * plotH);
    for (let d = 1; d <= 4; d++) raster.set(x0 - d, ty, BLACK);
    raster.drawText(x0 - 6 - textWidth(label), ty - 3, label);
  }
  raster.drawText(x0 + Math.round(plotW / 2) - Math.round(textWidth("phi") / 2),
                  y0 + plotH + 18, "phi");
  raster.drawText(x0 - MARGIN_LEFT + 2, y0 - TEXT_HEIGHT - 10, "psi");
}

function drawDomainLegend(raster: Raster, x: number, y: number): void {
  let cx = x;
  for (const label of ["D1", "D2", "D3", "D4", "B"] as const) {
    raster.fillRect(cx, y, 8, 8, DOMAIN_COLORS[label]);
    raster.strokeRect(cx, y, 8, 8, BLACK);
    raster.drawText(cx + 10, y, label);
    cx += 10 + textWidth(label) + 10;
  }
}

export function renderFigure(layout: LayoutName, tables: ScanTable[],
                             sources: string[]): { png: Buffer; info: FigureLayoutInfo } {
  const rows = panelRows(layout, tables, sources);

  const rowDims = rows.map((row) => {
    const px = cellPixels(row[0].table);
    const plotW = px * row[0].table.phiValues.length;
    const plotH = px * row[0].table.psiValues.length;
    return { plotW, plotH };
  });
  const width = MARGIN_LEFT
    + Math.max(...rowDims.map((d, i) => rows[i].length * d.plotW
                                        + (rows[i].length - 1) * (PANEL_GAP + MARGIN_LEFT)))
    + MARGIN_RIGHT;
  const height = rowDims.reduce((acc, d) => acc + MARGIN_TOP + d.plotH + MARGIN_BOTTOM, 0)
    + (rows.length - 1) * ROW_GAP + (layout === "fig5" ? LEGEND_H : 0);

  const raster = new Raster(width, height);
  const panels: PanelInfo[] = [];
  let yCursor = 0;
  rows.forEach((row, r) => {
    const { plotW, plotH } = rowDims[r];
    const y0 = yCursor + MARGIN_TOP;
    let x0 = MARGIN_LEFT;
    for (const def of row) {
      drawPanel(raster, def, x0, y0, plotW, plotH);
      panels.push({
        kind: def.kind,
        title: def.title,
        source: def.source,
        rect: [x0, y0, plotW, plotH],
        gridPhi: def.table.phiValues.length,
        gridPsi: def.table.psiValues.length,
        axis: {
          phi: { min: 0, max: TAU, openRight: true },
          psi: { min: 0, max: TAU, openRight: true },
        },
      });
      x0 += plotW + PANEL_GAP + MARGIN_LEFT;
    }
    yCursor = y0 + plotH + MARGIN_BOTTOM + ROW_GAP;
  });
  if (layout === "fig5") {
    drawDomainLegend(raster, MARGIN_LEFT, height - LEGEND_H - 2);
  }

  return {
    png: raster.toPng(),
    info: { layout, width, height, panels },
  };
}

export interface AuditResult {
  pixel: [number, number];
  panel: PanelKind;
  source: string;
  phiIndex: number;
  psiIndex: number;
  cell: ScanCell;
}

/** Map a pixel back to the cell painted under it (the audit mode). */
export function pixelToCell(info: FigureLayoutInfo, tables: Map<string, ScanTable>,
                            x: number, y: number): AuditResult | null {
  for (const panel of info.panels) {
    const [px, py, pw, ph] = panel.rect;
    if (x < px || y < py || x >= px + pw || y >= py + ph) continue;
    const table = tables.get(panel.source);
    if (!table) continue;
    const cellW = pw / panel.gridPhi;
    const cellH = ph / panel.gridPsi;
    const iPhi = Math.min(panel.gridPhi - 1, Math.floor((x - px) / cellW));
    const fromBottom = ph - 1 - (y - py);
    const iPsi = Math.min(panel.gridPsi - 1, Math.floor(fromBottom / cellH));
    return {
      pixel: [x, y],
      panel: panel.kind,
      source: panel.source,
      phiIndex: iPhi,
      psiIndex: iPsi,
      cell: table.cells[table.indexOf(iPhi, iPsi)],
    };
  }
  return null;
}
