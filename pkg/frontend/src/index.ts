/**
 * figrender: read the computation CLI's CSV outputs and render figure
 * panels as SVG. Strictly read-only over the CSVs — no physics here.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { dirname, isAbsolute, resolve } from "node:path";

import { parseCsv } from "./csv.js";
import { PanelSpec, parsePanelSpec } from "./panel.js";
import { extractLines, renderSvg } from "./svg.js";

export { CsvError, Table, columnIndex, numericColumn, parseCsv } from "./csv.js";
export { IniError, parseIni } from "./ini.js";
export {
  AxisScale,
  DEFAULT_STYLES,
  LineStyle,
  PanelSpec,
  PanelSpecError,
  parsePanelSpec,
} from "./panel.js";
export { Line, extractLines, renderSvg } from "./svg.js";

/** Render a parsed panel spec against CSV text to an SVG string. */
export function renderPanel(spec: PanelSpec, csvText: string, source = "<csv>"): string {
  const table = parseCsv(csvText, source);
  return renderSvg(spec, extractLines(spec, table, source), source);
}

/** Render a panel spec file to an SVG file; csv path is spec-relative. */
export function renderPanelFile(specPath: string, outPath: string): void {
  const specText = readFileSync(specPath, "utf-8");
  const spec = parsePanelSpec(specText, specPath);
  const csvPath = isAbsolute(spec.csvPath)
    ? spec.csvPath
    : resolve(dirname(specPath), spec.csvPath);
  const svg = renderPanel(spec, readFileSync(csvPath, "utf-8"), csvPath);
  writeFileSync(outPath, svg, "utf-8");
}
