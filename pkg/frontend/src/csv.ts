/**
 * Result-table CSV handling.
 *
 * The solver emits one fixed column order; benchmark tables append a
 * single speedup column. Values never contain commas or quotes, so a
 * plain split is an exact parser for this schema.
 */

export const BASE_HEADER = [
  "solver", "scheme_kind", "n_c", "alpha_opt", "mu_over_u", "j_over_u",
  "z", "l_bath", "phi", "n_mean", "e_tot", "e_paper", "g_c0", "e_kin_con",
  "iters", "time_ms", "converged",
] as const;

export interface ResultRow {
  solver: string;
  scheme_kind: string;
  n_c: number;
  alpha_opt: number;
  mu_over_u: number;
  j_over_u: number;
  z: number;
  l_bath: number | null;
  phi: number;
  n_mean: number;
  e_tot: number;
  e_paper: number | null;
  g_c0: number | null;
  e_kin_con: number | null;
  iters: number;
  time_ms: number;
  converged: boolean;
  speedup_vs_ref: number | null;
}

function optional(cell: string): number | null {
  return cell === "" ? null : Number(cell);
}

export function parseResultCsv(text: string): ResultRow[] {
  const lines = text.split("\n").filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header row");
  }
  const header = lines[0].split(",");
  const base = BASE_HEADER as readonly string[];
  for (let i = 0; i < base.length; i++) {
    if (header[i] !== base[i]) {
      throw new Error(
        `CSV header mismatch at column ${i}: expected '${base[i]}', ` +
        `got '${header[i] ?? "<missing>"}'`);
    }
  }
  const hasSpeedup = header.length > base.length
    && header[base.length] === "speedup_vs_ref";

  const rows: ResultRow[] = [];
  for (const line of lines.slice(1)) {
    const c = line.split(",");
    if (c.length < base.length) {
      throw new Error(`CSV row has ${c.length} cells, expected ${base.length}`);
    }
    rows.push({
      solver: c[0],
      scheme_kind: c[1],
      n_c: Number(c[2]),
      alpha_opt: Number(c[3]),
      mu_over_u: Number(c[4]),
      j_over_u: Number(c[5]),
      z: Number(c[6]),
      l_bath: optional(c[7]),
      phi: Number(c[8]),
      n_mean: Number(c[9]),
      e_tot: Number(c[10]),
      e_paper: optional(c[11]),
      g_c0: optional(c[12]),
      e_kin_con: optional(c[13]),
      iters: Number(c[14]),
      time_ms: Number(c[15]),
      converged: c[16] === "true",
      speedup_vs_ref: hasSpeedup ? optional(c[17]) : null,
    });
  }
  if (rows.length === 0) {
    throw new Error("empty CSV: no data rows");
  }
  return rows;
}

/** Columns that must be non-empty for a figure kind. */
export function requireValues(
  rows: ResultRow[], columns: (keyof ResultRow)[],
): void {
  const missing = columns.filter((col) =>
    rows.some((row) => row[col] === null || Number.isNaN(row[col] as number)));
  if (missing.length > 0) {
    throw new Error(`missing values in required columns: ${missing.join(", ")}`);
  }
}

export function schemeLabel(row: ResultRow): string {
  return `${row.scheme_kind}:${row.n_c}`;
}
