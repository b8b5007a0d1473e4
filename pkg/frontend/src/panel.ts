/**
 * Panel specification: which CSV, which columns, how to style each line.
 *
 * The spec file uses the same flat `key = value` dialect as the computation
 * CLI. Example:
 *
 *   csv = spectrum.csv
 *   x = g_over_wc
 *   y = E1, E2, E3
 *   series = model            ; optional: one line per distinct value
 *   style.full = solid
 *   style.qrm = dashed
 *   style.rqrm = dash-dot
 *   yscale = log
 *   title = transition energies
 */

import { parseIni } from "./ini.js";

export type LineStyle = "solid" | "dashed" | "dash-dot" | "dotted";
export type AxisScale = "linear" | "log";

export interface PanelSpec {
  csvPath: string;
  x: string;
  y: string[];
  /** column whose distinct values split rows into separate lines */
  series?: string;
  /** style per series value (or per y column when there is no series) */
  styles: Map<string, LineStyle>;
  xScale: AxisScale;
  yScale: AxisScale;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  width: number;
  height: number;
}

export class PanelSpecError extends Error {}

const LINE_STYLES: ReadonlySet<string> = new Set(["solid", "dashed", "dash-dot", "dotted"]);

/** Default legend mapping mirroring the source figures. */
export const DEFAULT_STYLES: ReadonlyMap<string, LineStyle> = new Map([
  ["full", "solid"],
  ["qrm", "dashed"],
  ["rqrm", "dash-dot"],
]);

function parseScale(raw: string | undefined, key: string, source: string): AxisScale {
  if (raw === undefined) return "linear";
  if (raw === "linear" || raw === "log") return raw;
  throw new PanelSpecError(`${source}: ${key} must be linear or log, got '${raw}'`);
}

function parseSize(raw: string | undefined, key: string, fallback: number, source: string): number {
  if (raw === undefined) return fallback;
  const v = Number(raw);
  if (!Number.isFinite(v) || v <= 0) {
    throw new PanelSpecError(`${source}: ${key} must be a positive number, got '${raw}'`);
  }
  return v;
}

export function parsePanelSpec(text: string, source = "<memory>"): PanelSpec {
  const values = parseIni(text, source);
  const require = (key: string): string => {
    const v = values.get(key);
    if (v === undefined) {
      throw new PanelSpecError(`${source}: missing required key '${key}'`);
    }
    return v;
  };

  const y = require("y")
    .split(",")
    .map((tok) => tok.trim())
    .filter((tok) => tok.length > 0);
  if (y.length === 0) {
    throw new PanelSpecError(`${source}: 'y' lists no columns`);
  }

  const styles = new Map<string, LineStyle>(DEFAULT_STYLES);
  for (const [key, value] of values) {
    if (!key.startsWith("style.")) continue;
    if (!LINE_STYLES.has(value)) {
      throw new PanelSpecError(
        `${source}: '${key}' = '${value}' is not one of ${[...LINE_STYLES].join(", ")}`,
      );
    }
    styles.set(key.slice("style.".length), value as LineStyle);
  }

  return {
    csvPath: require("csv"),
    x: require("x"),
    y,
    series: values.get("series"),
    styles,
    xScale: parseScale(values.get("xscale"), "xscale", source),
    yScale: parseScale(values.get("yscale"), "yscale", source),
    title: values.get("title"),
    xLabel: values.get("xlabel") ?? values.get("x"),
    yLabel: values.get("ylabel"),
    width: parseSize(values.get("width"), "width", 640, source),
    height: parseSize(values.get("height"), "height", 420, source),
  };
}
