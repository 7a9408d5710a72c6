/** Minimal CSV reading with schema validation against the producer formats. */

export interface Table {
  columns: string[];
  rows: number[][];
  /** raw string cells for non-numeric columns */
  raw: string[][];
}

export class SchemaError extends Error {}

export function parseCsv(text: string): Table {
  const lines = text.split(/\r?\n/).filter((l) => l.trim().length > 0);
  if (lines.length === 0) {
    return { columns: [], rows: [], raw: [] };
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows: number[][] = [];
  const raw: string[][] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    raw.push(cells);
    rows.push(cells.map((c) => (c === "" ? NaN : Number(c))));
  }
  return { columns, rows, raw };
}

/** Require the named columns; returns their indices. Names the first
 * offending column on mismatch. */
export function requireColumns(table: Table, needed: string[]): number[] {
  return needed.map((name) => {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
      throw new SchemaError(
        `missing column '${name}' (found: ${table.columns.join(", ") || "none"})`,
      );
    }
    return idx;
  });
}

export function column(table: Table, name: string): number[] {
  const [idx] = requireColumns(table, [name]);
  return table.rows.map((r) => r[idx]);
}
