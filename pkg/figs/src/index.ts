#!/usr/bin/env node
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

import * as fs from 'fs';
import * as path from 'path';

import { byScenario, CsvFormatError, parseBenchCsv } from './csv';
import { renderChart } from './chart';

interface Args {
  input: string;
  outDir: string;
  logY: boolean;
}

export function parseArgs(argv: string[]): Args {
  let input: string | undefined;
  let outDir = 'figures';
  let logY = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === '--out') {
      outDir = argv[++i];
      if (outDir === undefined) {
        throw new Error('--out requires a directory');
      }
    } else if (arg === '--logy') {
      logY = true;
    } else if (arg.startsWith('--')) {
      throw new Error(`unknown option ${arg}`);
    } else if (input === undefined) {
      input = arg;
    } else {
      throw new Error(`unexpected argument ${arg}`);
    }
  }
  if (input === undefined) {
    throw new Error('usage: figs <csv-or-dir> [--out <dir>] [--logy]');
  }
  return { input, outDir, logY };
}

function inputFiles(input: string): string[] {
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

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`figs: ${(err as Error).message}`);
    return 1;
  }

  let files: string[];
  try {
    files = inputFiles(args.input);
  } catch (err) {
    console.error(`figs: cannot read ${args.input}: ${(err as Error).message}`);
    return 1;
  }
  if (files.length === 0) {
    console.error(`figs: no .csv files under ${args.input}`);
    return 1;
  }

  const scenarios = new Map<string, ReturnType<typeof parseBenchCsv>>();
  for (const file of files) {
    let rows;
    try {
      rows = parseBenchCsv(fs.readFileSync(file, 'utf-8'));
    } catch (err) {
      if (err instanceof CsvFormatError) {
        console.error(`figs: ${file}: ${err.message}`);
        return 1;
      }
      throw err;
    }
    for (const [scenario, group] of byScenario(rows)) {
      const bucket = scenarios.get(scenario);
      if (bucket) {
        bucket.push(...group);
      } else {
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
    const svg = renderChart(scenario, rows, { logY: args.logY });
    const file = path.join(args.outDir, `${scenario}.svg`);
    fs.writeFileSync(file, svg);
    console.log(`wrote ${file}`);
  }
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
