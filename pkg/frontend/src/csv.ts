/** Thin typed wrapper around papaparse for the CLI's strict CSV dialect. */

import Papa from "papaparse";

export interface Table {
  header: string[];
  /** raw string cells, row-major, same width as header */
  rows: string[][];
}

export class CsvError extends Error {}

export function parseCsv(text: string, source = "<memory>"): Table {
  const result = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (result.errors.length > 0) {
    const first = result.errors[0];
    throw new CsvError(`${source}: ${first.message} (row ${first.row})`);
  }
  const data = result.data;
  if (data.length === 0) {
    throw new CsvError(`${source}: empty CSV`);
  }
  const header = data[0];
  for (const [i, row] of data.slice(1).entries()) {
    if (row.length !== header.length) {
      throw new CsvError(
        `${source}: row ${i + 2} has ${row.length} cells, header has ${header.length}`,
      );
    }
  }
  return { header, rows: data.slice(1) };
}

export function columnIndex(table: Table, name: string, source = "<csv>"): number {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new CsvError(
      `${source}: no column '${name}'; available columns: ${table.header.join(", ")}`,
    );
  }
  return idx;
}

export function numericColumn(table: Table, name: string, source = "<csv>"): number[] {
  const idx = columnIndex(table, name, source);
  return table.rows.map((row, i) => {
    const v = Number(row[idx]);
    if (Number.isNaN(v) && row[idx].trim().toLowerCase() !== "nan") {
      throw new CsvError(`${source}: row ${i + 2}, column '${name}': not a number: ${row[idx]}`);
    }
    return v;
  });
}
