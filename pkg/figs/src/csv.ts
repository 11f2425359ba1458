/**
 * Parser for the benchmark CSV emitted by the netlab harness.
 *
 * Expected header:
 *   scenario,protocol,sweep_param,sweep_value,file_size_bytes,mean_ms,rep1_ms,...,failures
 *
 * Rows whose mean is empty (every repetition failed) are kept but flagged;
 * they are skipped when charting.
 */

export interface BenchRow {
  scenario: string;
  protocol: string;
  sweepParam: string;
  sweepValue: number;
  fileSizeBytes: number;
  meanMs: number | null;
  failures: number;
}

export class CsvFormatError extends Error {}

const REQUIRED_COLUMNS = [
  'scenario',
  'protocol',
  'sweep_param',
  'sweep_value',
  'file_size_bytes',
  'mean_ms',
  'failures',
];

export function parseBenchCsv(text: string): BenchRow[] {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvFormatError('empty file: expected a benchmark CSV header');
  }
  const header = lines[0].split(',');
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new CsvFormatError(`missing required column: ${column}`);
    }
  }

  const rows: BenchRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(',');
    if (cells.length !== header.length) {
      throw new CsvFormatError(
        `row ${i + 1}: expected ${header.length} cells, got ${cells.length}`,
      );
    }
    const cell = (name: string) => cells[index.get(name)!];
    const sweepValue = Number(cell('sweep_value'));
    const fileSize = Number(cell('file_size_bytes'));
    const failures = Number(cell('failures'));
    if (!Number.isFinite(sweepValue) || !Number.isFinite(fileSize) || !Number.isFinite(failures)) {
      throw new CsvFormatError(`row ${i + 1}: non-numeric value`);
    }
    const meanText = cell('mean_ms');
    const meanMs = meanText === '' ? null : Number(meanText);
    if (meanMs !== null && !Number.isFinite(meanMs)) {
      throw new CsvFormatError(`row ${i + 1}: bad mean_ms ${JSON.stringify(meanText)}`);
    }
    rows.push({
      scenario: cell('scenario'),
      protocol: cell('protocol'),
      sweepParam: cell('sweep_param'),
      sweepValue,
      fileSizeBytes: fileSize,
      meanMs,
      failures,
    });
  }
  return rows;
}

/** Group rows by scenario, preserving first-seen order. */
export function byScenario(rows: BenchRow[]): Map<string, BenchRow[]> {
  const groups = new Map<string, BenchRow[]>();
  for (const row of rows) {
    const bucket = groups.get(row.scenario);
    if (bucket) {
      bucket.push(row);
    } else {
      groups.set(row.scenario, [row]);
    }
  }
  return groups;
}
