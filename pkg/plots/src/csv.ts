/** CSV loading with schema checks that name the offending column. */

import { readFileSync } from "fs";
import Papa from "papaparse";

export class SchemaError extends Error {}

export type Row = Record<string, number>;

/**
 * Read a harness CSV and coerce every required column to a number.
 *
 * The header row must be present even when there is no data; a missing or
 * non-numeric column raises SchemaError naming it. Empty cells become NaN
 * (the harness writes NaN as an empty cell), which is valid for optional
 * quantities like interpolated power offsets.
 */
export function readCsv(path: string, requiredColumns: string[]): Row[] {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  const fields = parsed.meta.fields ?? [];
  for (const column of requiredColumns) {
    if (!fields.includes(column)) {
      throw new SchemaError(`${path}: missing required column "${column}"`);
    }
  }
  return parsed.data.map((raw, i) => {
    const row: Row = {};
    for (const column of requiredColumns) {
      const cell = raw[column] ?? "";
      if (cell === "") {
        row[column] = NaN;
        continue;
      }
      const value = Number(cell);
      if (Number.isNaN(value)) {
        throw new SchemaError(
          `${path}: column "${column}" holds non-numeric value "${cell}" (data row ${i + 1})`
        );
      }
      row[column] = value;
    }
    return row;
  });
}
