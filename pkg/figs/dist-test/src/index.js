#!/usr/bin/env node
"use strict";
/**
 * figs: render one SVG chart per benchmark scenario from netlab CSV output.
 *
 * Usage:
 *   figs <csv-file-or-directory> [--out <dir>] [--logy]
 *
 * A directory input reads every *.csv inside it (the layout `netlab matrix`
 * produces).  Exit codes: 0 on success (including zero charts from a
 * header-only CSV, with a warning), 1 on usage or malformed input.
 */
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
Object.defineProperty(exports, "__esModule", { value: true });
exports.parseArgs = parseArgs;
exports.main = main;
const fs = __importStar(require("fs"));
const path = __importStar(require("path"));
const csv_1 = require("./csv");
const chart_1 = require("./chart");
function parseArgs(argv) {
    let input;
    let outDir = 'figures';
    let logY = false;
    for (let i = 0; i < argv.length; i++) {
        const arg = argv[i];
        if (arg === '--out') {
            outDir = argv[++i];
            if (outDir === undefined) {
                throw new Error('--out requires a directory');
            }
        }
        else if (arg === '--logy') {
            logY = true;
        }
        else if (arg.startsWith('--')) {
            throw new Error(`unknown option ${arg}`);
        }
        else if (input === undefined) {
            input = arg;
        }
        else {
            throw new Error(`unexpected argument ${arg}`);
        }
    }
    if (input === undefined) {
        throw new Error('usage: figs <csv-or-dir> [--out <dir>] [--logy]');
    }
    return { input, outDir, logY };
}
function inputFiles(input) {
    const stat = fs.statSync(input);
    if (stat.isDirectory()) {
        return fs
            .readdirSync(input)
            .filter((name) => name.endsWith('.csv'))
            .sort()
            .map((name) => path.join(input, name));
    }
    return [input];
}
function main(argv) {
    let args;
    try {
        args = parseArgs(argv);
    }
    catch (err) {
        console.error(`figs: ${err.message}`);
        return 1;
    }
    let files;
    try {
        files = inputFiles(args.input);
    }
    catch (err) {
        console.error(`figs: cannot read ${args.input}: ${err.message}`);
        return 1;
    }
    if (files.length === 0) {
        console.error(`figs: no .csv files under ${args.input}`);
        return 1;
    }
    const scenarios = new Map();
    for (const file of files) {
        let rows;
        try {
            rows = (0, csv_1.parseBenchCsv)(fs.readFileSync(file, 'utf-8'));
        }
        catch (err) {
            if (err instanceof csv_1.CsvFormatError) {
                console.error(`figs: ${file}: ${err.message}`);
                return 1;
            }
            throw err;
        }
        for (const [scenario, group] of (0, csv_1.byScenario)(rows)) {
            const bucket = scenarios.get(scenario);
            if (bucket) {
                bucket.push(...group);
            }
            else {
                scenarios.set(scenario, [...group]);
            }
        }
    }
    if (scenarios.size === 0) {
        console.warn('figs: no data rows found; nothing to render');
        return 0;
    }
    fs.mkdirSync(args.outDir, { recursive: true });
    for (const [scenario, rows] of scenarios) {
        const svg = (0, chart_1.renderChart)(scenario, rows, { logY: args.logY });
        const file = path.join(args.outDir, `${scenario}.svg`);
        fs.writeFileSync(file, svg);
        console.log(`wrote ${file}`);
    }
    return 0;
}
if (require.main === module) {
    process.exit(main(process.argv.slice(2)));
}
