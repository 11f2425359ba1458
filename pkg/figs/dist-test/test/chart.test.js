"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_test_1 = require("node:test");
const chart_1 = require("../src/chart");
const csv_1 = require("../src/csv");
const HEADER = 'scenario,protocol,sweep_param,sweep_value,file_size_bytes,mean_ms,rep1_ms,failures';
function sampleRows(scenario = 'wifi') {
    const lines = [HEADER];
    for (const [value, smudp, quic, tcp] of [
        [51200, 400, 500, 600],
        [256000, 1300, 1400, 2300],
        [1024000, 4500, 4700, 12000],
    ]) {
        lines.push(`${scenario},smudp,file_size,${value},${value},${smudp}.000,${smudp}.000,0`);
        lines.push(`${scenario},quic,file_size,${value},${value},${quic}.000,${quic}.000,0`);
        lines.push(`${scenario},tcp,file_size,${value},${value},${tcp}.000,${tcp}.000,0`);
    }
    return (0, csv_1.parseBenchCsv)(lines.join('\n'));
}
(0, node_test_1.test)('chart contains one named series per protocol', () => {
    const svg = (0, chart_1.renderChart)('wifi', sampleRows());
    for (const proto of ['smudp', 'quic', 'tcp']) {
        strict_1.default.match(svg, new RegExp(`data-series="${proto}"`));
        strict_1.default.match(svg, new RegExp(`>${proto}</text>`));
    }
    strict_1.default.equal((svg.match(/<polyline/g) ?? []).length, 3);
});
(0, node_test_1.test)('axes carry units', () => {
    const svg = (0, chart_1.renderChart)('wifi', sampleRows());
    strict_1.default.match(svg, /file size \(KiB\)/);
    strict_1.default.match(svg, /mean completion \(ms\)/);
});
(0, node_test_1.test)('title is the scenario name', () => {
    strict_1.default.match((0, chart_1.renderChart)('2g', sampleRows('2g')), />2g<\/text>/);
});
(0, node_test_1.test)('failed rows are skipped, not plotted', () => {
    const rows = (0, csv_1.parseBenchCsv)([
        HEADER,
        'wifi,tcp,file_size,51200,51200,600.000,600.000,0',
        'wifi,tcp,file_size,256000,256000,,,5',
    ].join('\n'));
    const svg = (0, chart_1.renderChart)('wifi', rows);
    strict_1.default.equal((svg.match(/<circle/g) ?? []).length, 1);
});
(0, node_test_1.test)('log scale option changes the geometry', () => {
    const linear = (0, chart_1.renderChart)('wifi', sampleRows());
    const log = (0, chart_1.renderChart)('wifi', sampleRows(), { logY: true });
    strict_1.default.notEqual(linear, log);
});
(0, node_test_1.test)('all-failed scenario raises', () => {
    const rows = (0, csv_1.parseBenchCsv)([HEADER, 'wifi,tcp,file_size,51200,51200,,,5'].join('\n'));
    strict_1.default.throws(() => (0, chart_1.renderChart)('wifi', rows), /no successful rows/);
});
