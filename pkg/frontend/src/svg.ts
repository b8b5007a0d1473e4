/**
 * Deterministic SVG line-plot rendering. Pure string assembly: no DOM, no
 * fonts beyond a generic family, so identical inputs give identical bytes.
 */

import { Table, columnIndex, numericColumn } from "./csv.js";
import { AxisScale, LineStyle, PanelSpec } from "./panel.js";

export interface Line {
  label: string;
  style: LineStyle;
  color: string;
  xs: number[];
  ys: number[];
}

const MARGIN = { top: 40, right: 20, bottom: 48, left: 64 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];
const DASH: Record<LineStyle, string> = {
  solid: "",
  dashed: "8 5",
  "dash-dot": "8 4 2 4",
  dotted: "2 4",
};

/** Split the table into one line per (series value x y column). */
export function extractLines(spec: PanelSpec, table: Table, source = "<csv>"): Line[] {
  const lines: Line[] = [];
  const xsAll = numericColumn(table, spec.x, source);
  let color = 0;
  const nextColor = () => PALETTE[color++ % PALETTE.length];

  if (spec.series !== undefined) {
    const sIdx = columnIndex(table, spec.series, source);
    const order: string[] = [];
    for (const row of table.rows) {
      if (!order.includes(row[sIdx])) order.push(row[sIdx]);
    }
    for (const value of order) {
      const keep = table.rows.map((row, i) => [row, i] as const).filter(([row]) => row[sIdx] === value);
      for (const yName of spec.y) {
        const yIdx = columnIndex(table, yName, source);
        lines.push({
          label: spec.y.length > 1 ? `${value} ${yName}` : value,
          style: spec.styles.get(value) ?? "solid",
          color: nextColor(),
          xs: keep.map(([, i]) => xsAll[i]),
          ys: keep.map(([row, i]) => {
            const v = Number(row[yIdx]);
            void i;
            return v;
          }),
        });
      }
    }
  } else {
    for (const yName of spec.y) {
      lines.push({
        label: yName,
        style: spec.styles.get(yName) ?? "solid",
        color: nextColor(),
        xs: xsAll,
        ys: numericColumn(table, yName, source),
      });
    }
  }
  return lines;
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function makeScale(
  values: number[],
  kind: AxisScale,
  rangeLo: number,
  rangeHi: number,
  source: string,
): Scale {
  const finite = values.filter((v) => Number.isFinite(v) && (kind === "linear" || v > 0));
  if (finite.length === 0) {
    throw new Error(`${source}: no plottable values for a ${kind} axis`);
  }
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    // degenerate extent: pad symmetrically so a single point still renders
    const pad = kind === "log" ? 0.301 : Math.max(Math.abs(lo) * 0.1, 1);
    if (kind === "log") {
      lo = Math.pow(10, Math.log10(lo) - pad);
      hi = Math.pow(10, Math.log10(hi) + pad);
    } else {
      lo -= pad;
      hi += pad;
    }
  }

  const fwd = kind === "log" ? Math.log10 : (v: number) => v;
  const a = fwd(lo);
  const b = fwd(hi);
  const scale = ((v: number) => rangeLo + ((fwd(v) - a) / (b - a)) * (rangeHi - rangeLo)) as Scale;

  if (kind === "log") {
    const ticks: number[] = [];
    for (let e = Math.ceil(a); e <= Math.floor(b); e++) ticks.push(Math.pow(10, e));
    scale.ticks = ticks.length >= 2 ? ticks : [lo, hi];
  } else {
    const span = hi - lo;
    const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
    const mult = span / step > 20 ? 5 : span / step > 8 ? 2 : 1;
    const s = step * mult;
    const ticks: number[] = [];
    for (let t = Math.ceil(lo / s) * s; t <= hi + 1e-12 * span; t += s) ticks.push(t);
    scale.ticks = ticks;
  }
  return scale;
}

function fmtTick(v: number): string {
  if (v === 0) return "0";
  const mag = Math.abs(v);
  if (mag >= 1e4 || mag < 1e-3) return v.toExponential(0).replace("+", "");
  return parseFloat(v.toPrecision(6)).toString();
}

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderSvg(spec: PanelSpec, lines: Line[], source = "<csv>"): string {
  const { width, height } = spec;
  const plotW: [number, number] = [MARGIN.left, width - MARGIN.right];
  const plotH: [number, number] = [height - MARGIN.bottom, MARGIN.top];

  const sx = makeScale(lines.flatMap((l) => l.xs), spec.xScale, plotW[0], plotW[1], source);
  const sy = makeScale(lines.flatMap((l) => l.ys), spec.yScale, plotH[0], plotH[1], source);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="#ffffff"/>`,
  );

  // grid + ticks
  for (const t of sx.ticks) {
    const x = sx(t).toFixed(2);
    parts.push(
      `<line x1="${x}" y1="${plotH[0]}" x2="${x}" y2="${plotH[1]}" stroke="#e0e0e0" stroke-width="1"/>`,
      `<text x="${x}" y="${plotH[0] + 18}" font-size="11" text-anchor="middle" fill="#333">${fmtTick(t)}</text>`,
    );
  }
  for (const t of sy.ticks) {
    const y = sy(t).toFixed(2);
    parts.push(
      `<line x1="${plotW[0]}" y1="${y}" x2="${plotW[1]}" y2="${y}" stroke="#e0e0e0" stroke-width="1"/>`,
      `<text x="${plotW[0] - 6}" y="${y}" font-size="11" text-anchor="end" dominant-baseline="middle" fill="#333">${fmtTick(t)}</text>`,
    );
  }

  // axes frame
  parts.push(
    `<rect x="${plotW[0]}" y="${plotH[1]}" width="${plotW[1] - plotW[0]}" ` +
      `height="${plotH[0] - plotH[1]}" fill="none" stroke="#000" stroke-width="1"/>`,
  );

  // data
  for (const line of lines) {
    const pts: string[] = [];
    let run: string[] = [];
    const flush = () => {
      if (run.length === 1) {
        // lone point: visible marker instead of a zero-length segment
        const [x, y] = run[0].split(",");
        parts.push(`<circle cx="${x}" cy="${y}" r="3" fill="${line.color}"/>`);
      } else if (run.length > 1) {
        pts.push(run.join(" "));
      }
      run = [];
    };
    for (let i = 0; i < line.xs.length; i++) {
      const vx = line.xs[i];
      const vy = line.ys[i];
      const plottable =
        Number.isFinite(vx) &&
        Number.isFinite(vy) &&
        (spec.xScale === "linear" || vx > 0) &&
        (spec.yScale === "linear" || vy > 0);
      if (!plottable) {
        flush();
        continue;
      }
      run.push(`${sx(vx).toFixed(2)},${sy(vy).toFixed(2)}`);
    }
    flush();
    const dash = DASH[line.style] === "" ? "" : ` stroke-dasharray="${DASH[line.style]}"`;
    for (const segment of pts) {
      parts.push(
        `<polyline points="${segment}" fill="none" stroke="${line.color}" stroke-width="1.8"${dash}/>`,
      );
    }
  }

  // legend
  lines.forEach((line, i) => {
    const y = plotH[1] + 14 + 16 * i;
    const x = plotW[1] - 150;
    const dash = DASH[line.style] === "" ? "" : ` stroke-dasharray="${DASH[line.style]}"`;
    parts.push(
      `<line x1="${x}" y1="${y}" x2="${x + 26}" y2="${y}" stroke="${line.color}" stroke-width="1.8"${dash}/>`,
      `<text x="${x + 32}" y="${y}" font-size="11" dominant-baseline="middle" fill="#000">${esc(line.label)}</text>`,
    );
  });

  // labels
  if (spec.title !== undefined) {
    parts.push(
      `<text x="${(plotW[0] + plotW[1]) / 2}" y="22" font-size="14" text-anchor="middle" fill="#000">${esc(spec.title)}</text>`,
    );
  }
  if (spec.xLabel !== undefined) {
    parts.push(
      `<text x="${(plotW[0] + plotW[1]) / 2}" y="${height - 10}" font-size="12" text-anchor="middle" fill="#000">${esc(spec.xLabel)}</text>`,
    );
  }
  if (spec.yLabel !== undefined) {
    parts.push(
      `<text x="16" y="${(plotH[0] + plotH[1]) / 2}" font-size="12" text-anchor="middle" ` +
        `transform="rotate(-90 16 ${(plotH[0] + plotH[1]) / 2})" fill="#000">${esc(spec.yLabel)}</text>`,
    );
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
