"use strict";
/**
 * Parser for the benchmark CSV emitted by the netlab harness.
 *
 * Expected header:
 *   scenario,protocol,sweep_param,sweep_value,file_size_bytes,mean_ms,rep1_ms,...,failures
 *
 * Rows whose mean is empty (every repetition failed) are kept but flagged;
 * they are skipped when charting.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.CsvFormatError = void 0;
exports.parseBenchCsv = parseBenchCsv;
exports.byScenario = byScenario;
class CsvFormatError extends Error {
}
exports.CsvFormatError = CsvFormatError;
const REQUIRED_COLUMNS = [
    'scenario',
    'protocol',
    'sweep_param',
    'sweep_value',
    'file_size_bytes',
    'mean_ms',
    'failures',
];
function parseBenchCsv(text) {
    const lines = text
        .split(/\r?\n/)
        .map((line) => line.trim())
        .filter((line) => line.length > 0);
    if (lines.length === 0) {
        throw new CsvFormatError('empty file: expected a benchmark CSV header');
    }
    const header = lines[0].split(',');
    const index = new Map();
    header.forEach((name, i) => index.set(name, i));
    for (const column of REQUIRED_COLUMNS) {
        if (!index.has(column)) {
            throw new CsvFormatError(`missing required column: ${column}`);
        }
    }
    const rows = [];
    for (let i = 1; i < lines.length; i++) {
        const cells = lines[i].split(',');
        if (cells.length !== header.length) {
            throw new CsvFormatError(`row ${i + 1}: expected ${header.length} cells, got ${cells.length}`);
        }
        const cell = (name) => cells[index.get(name)];
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
function byScenario(rows) {
    const groups = new Map();
    for (const row of rows) {
        const bucket = groups.get(row.scenario);
        if (bucket) {
            bucket.push(row);
        }
        else {
            groups.set(row.scenario, [row]);
        }
    }
    return groups;
}
