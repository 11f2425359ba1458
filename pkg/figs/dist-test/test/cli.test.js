"use strict";
var __createBinding = (this && this.__createBinding) || (Object.create ? (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    var desc = Object.getOwnPropertyDescriptor(m, k);
    if (!desc || ("get" in desc ? !m.__esModule : desc.writable || desc.configurable)) {
      desc = { enumerable: true, get: function() { return m[k]; } };
    }
    Object.defineProperty(o, k2, desc);
}) : (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    o[k2] = m[k];
}));
var __setModuleDefault = (this && this.__setModuleDefault) || (Object.create ? (function(o, v) {
    Object.defineProperty(o, "default", { enumerable: true, value: v });
}) : function(o, v) {
    o["default"] = v;
});
var __importStar = (this && this.__importStar) || (function () {
    var ownKeys = function(o) {
        ownKeys = Object.getOwnPropertyNames || function (o) {
            var ar = [];
            for (var k in o) if (Object.prototype.hasOwnProperty.call(o, k)) ar[ar.length] = k;
            return ar;
        };
        return ownKeys(o);
    };
    return function (mod) {
        if (mod && mod.__esModule) return mod;
        var result = {};
        if (mod != null) for (var k = ownKeys(mod), i = 0; i < k.length; i++) if (k[i] !== "default") __createBinding(result, mod, k[i]);
        __setModuleDefault(result, mod);
        return result;
    };
})();
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
const strict_1 = __importDefault(require("node:assert/strict"));
const node_child_process_1 = require("node:child_process");
const fs = __importStar(require("node:fs"));
const os = __importStar(require("node:os"));
const path = __importStar(require("node:path"));
const node_test_1 = require("node:test");
const CLI = path.join(__dirname, '..', 'src', 'index.js');
const HEADER = 'scenario,protocol,sweep_param,sweep_value,file_size_bytes,mean_ms,rep1_ms,failures';
const SCENARIOS = {
    wifi: ['file_size', [51200, 256000, 1024000]],
    lte: ['file_size', [51200, 256000, 1024000]],
    '3g': ['file_size', [51200, 256000, 1024000]],
    '2g': ['file_size', [51200, 256000, 1024000]],
    rtt: ['rtt', [10, 100, 1000]],
    loss: ['loss_pct', [0.5, 1.5, 2.5]],
    bandwidth: ['bandwidth', [0.2, 1.0, 2.2]],
};
function writeMatrix(dir) {
    for (const [scenario, [param, values]] of Object.entries(SCENARIOS)) {
        const lines = [HEADER];
        for (const value of values) {
            for (const [i, proto] of ['smudp', 'quic', 'tcp'].entries()) {
                const mean = (100 * (i + 1) + value).toFixed(3);
                lines.push(`${scenario},${proto},${param},${value},256000,${mean},${mean},0`);
            }
        }
        fs.writeFileSync(path.join(dir, `${scenario}.csv`), lines.join('\n') + '\n');
    }
}
function run(args) {
    return (0, node_child_process_1.spawnSync)('node', [CLI, ...args], { encoding: 'utf-8' });
}
(0, node_test_1.test)('full matrix directory renders exactly seven charts with three series', () => {
    const work = fs.mkdtempSync(path.join(os.tmpdir(), 'figs-'));
    const csvDir = path.join(work, 'csv');
    const outDir = path.join(work, 'out');
    fs.mkdirSync(csvDir);
    writeMatrix(csvDir);
    const proc = run([csvDir, '--out', outDir]);
    strict_1.default.equal(proc.status, 0, proc.stderr);
    const images = fs.readdirSync(outDir).sort();
    strict_1.default.deepEqual(images, ['2g.svg', '3g.svg', 'bandwidth.svg', 'loss.svg', 'lte.svg', 'rtt.svg', 'wifi.svg']);
    for (const image of images) {
        const svg = fs.readFileSync(path.join(outDir, image), 'utf-8');
        for (const proto of ['smudp', 'quic', 'tcp']) {
            strict_1.default.match(svg, new RegExp(`data-series="${proto}"`), image);
        }
    }
});
(0, node_test_1.test)('malformed CSV exits nonzero and names the problem', () => {
    const work = fs.mkdtempSync(path.join(os.tmpdir(), 'figs-'));
    const bad = path.join(work, 'bad.csv');
    fs.writeFileSync(bad, 'scenario,protocol\nwifi,tcp\n');
    const proc = run([bad, '--out', path.join(work, 'out')]);
    strict_1.default.notEqual(proc.status, 0);
    strict_1.default.match(proc.stderr, /missing required column/);
});
(0, node_test_1.test)('header-only CSV renders nothing and exits zero with a warning', () => {
    const work = fs.mkdtempSync(path.join(os.tmpdir(), 'figs-'));
    const empty = path.join(work, 'empty.csv');
    fs.writeFileSync(empty, HEADER + '\n');
    const outDir = path.join(work, 'out');
    const proc = run([empty, '--out', outDir]);
    strict_1.default.equal(proc.status, 0, proc.stderr);
    strict_1.default.ok(!fs.existsSync(outDir) || fs.readdirSync(outDir).length === 0);
    strict_1.default.match(proc.stderr, /nothing to render/);
});
(0, node_test_1.test)('missing input path is an error', () => {
    const proc = run(['/definitely/not/here.csv', '--out', '/tmp/x']);
    strict_1.default.notEqual(proc.status, 0);
});
(0, node_test_1.test)('usage error without arguments', () => {
    const proc = run([]);
    strict_1.default.equal(proc.status, 1);
    strict_1.default.match(proc.stderr, /usage/);
});
(0, node_test_1.test)('rerunning overwrites deterministically', () => {
    const work = fs.mkdtempSync(path.join(os.tmpdir(), 'figs-'));
    const csvDir = path.join(work, 'csv');
    const outDir = path.join(work, 'out');
    fs.mkdirSync(csvDir);
    writeMatrix(csvDir);
    run([csvDir, '--out', outDir]);
    const first = fs.readFileSync(path.join(outDir, 'wifi.svg'), 'utf-8');
    run([csvDir, '--out', outDir]);
    const second = fs.readFileSync(path.join(outDir, 'wifi.svg'), 'utf-8');
    strict_1.default.equal(first, second);
});
