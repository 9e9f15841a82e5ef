/**
 * Parser for the per-round report CSV the service serves at /report.
 *
 * Layout: "#"-prefixed comment lines, then a column header row, then one
 * row per committed round. Values never contain commas or quotes, so a
 * straight split is exact.
 */

export interface ReportRow {
  dataset: string;
  strategy: string;
  reward_kind: string;
  rep: number;
  round: number;
  side: string;
  reward_AL: number;
  reward_LR: number;
  tau: number;
  test_cost: number;
  cumulative_labels: number;
}

const NUMERIC: ReadonlySet<string> = new Set([
  "rep",
  "round",
  "reward_AL",
  "reward_LR",
  "tau",
  "test_cost",
  "cumulative_labels",
]);

export interface ParsedReport {
  comments: string[];
  rows: ReportRow[];
}

export function parseReport(text: string): ParsedReport {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  const comments: string[] = [];
  let i = 0;
  while (i < lines.length && lines[i]!.startsWith("#")) {
    comments.push(lines[i]!);
    i += 1;
  }
  if (i >= lines.length) {
    throw new Error("report has no column header row");
  }
  const columns = lines[i]!.split(",");
  i += 1;

  const rows: ReportRow[] = [];
  for (; i < lines.length; i += 1) {
    const parts = lines[i]!.split(",");
    if (parts.length !== columns.length) {
      throw new Error(`row ${i + 1}: expected ${columns.length} fields, got ${parts.length}`);
    }
    const row: Record<string, string | number> = {};
    columns.forEach((col, j) => {
      const raw = parts[j]!;
      if (NUMERIC.has(col)) {
        const num = Number(raw);
        if (Number.isNaN(num)) {
          throw new Error(`row ${i + 1}: field ${col} is not numeric: ${raw}`);
        }
        row[col] = num;
      } else {
        row[col] = raw;
      }
    });
    rows.push(row as unknown as ReportRow);
  }
  return { comments, rows };
}
