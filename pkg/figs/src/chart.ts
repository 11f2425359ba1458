/**
 * SVG line chart: mean completion time against the swept parameter, one
 * line per protocol.  Pure string assembly, no rendering dependencies.
 */

import { BenchRow } from './csv';

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 150, bottom: 60, left: 84 };

const SERIES_COLORS: Record<string, string> = {
  smudp: '#2563eb',
  quic: '#16a34a',
  tcp: '#dc2626',
};
const FALLBACK_COLORS = ['#9333ea', '#ea580c', '#0891b2'];

const AXIS_LABELS: Record<string, string> = {
  file_size: 'file size (KiB)',
  rtt: 'round-trip time (ms)',
  loss_pct: 'packet loss (%)',
  bandwidth: 'bandwidth (Mbit/s)',
};

function xValue(row: BenchRow): number {
  // The CSV stores file sizes in bytes; everything else is already in its
  // display unit (ms, %, Mbit/s).
  return row.sweepParam === 'file_size' ? row.sweepValue / 1024 : row.sweepValue;
}

function ticks(lo: number, hi: number, count: number): number[] {
  if (hi === lo) {
    return [lo];
  }
  const step = (hi - lo) / (count - 1);
  return Array.from({ length: count }, (_, i) => lo + i * step);
}

function formatTick(value: number): string {
  if (Math.abs(value) >= 1000) {
    return value.toFixed(0);
  }
  return Number(value.toPrecision(3)).toString();
}

export interface ChartOptions {
  logY?: boolean;
}

export function renderChart(
  scenario: string,
  rows: BenchRow[],
  options: ChartOptions = {},
): string {
  const usable = rows.filter((r) => r.meanMs !== null);
  if (usable.length === 0) {
    throw new Error(`no successful rows for scenario ${scenario}`);
  }
  const sweepParam = usable[0].sweepParam;
  const protocols = [...new Set(usable.map((r) => r.protocol))].sort();

  const xs = usable.map(xValue);
  const ys = usable.map((r) => r.meanMs as number);
  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLoRaw = options.logY ? Math.min(...ys) : 0;
  const yHi = Math.max(...ys) * 1.05;
  const yLo = options.logY ? yLoRaw / 1.1 : 0;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    MARGIN.left + (xHi === xLo ? plotW / 2 : ((x - xLo) / (xHi - xLo)) * plotW);
  const sy = (y: number) => {
    if (options.logY) {
      const t = (Math.log(y) - Math.log(yLo)) / (Math.log(yHi) - Math.log(yLo));
      return MARGIN.top + plotH - t * plotH;
    }
    return MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;
  };

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
    `<rect width="100%" height="100%" fill="white"/>`,
    `<text x="${WIDTH / 2}" y="26" text-anchor="middle" font-size="17" font-weight="bold">` +
      `${scenario}</text>`,
  );

  // Gridlines and y ticks.
  const yTicks = options.logY
    ? ticks(Math.log(yLo), Math.log(yHi), 6).map(Math.exp)
    : ticks(yLo, yHi, 6);
  for (const tick of yTicks) {
    const y = sy(tick);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${y.toFixed(1)}" x2="${WIDTH - MARGIN.right}" ` +
        `y2="${y.toFixed(1)}" stroke="#e5e7eb"/>`,
      `<text x="${MARGIN.left - 8}" y="${(y + 4).toFixed(1)}" text-anchor="end" ` +
        `font-size="11" fill="#374151">${formatTick(tick)}</text>`,
    );
  }
  for (const tick of ticks(xLo, xHi, Math.min(7, new Set(xs).size))) {
    const x = sx(tick);
    parts.push(
      `<line x1="${x.toFixed(1)}" y1="${MARGIN.top}" x2="${x.toFixed(1)}" ` +
        `y2="${HEIGHT - MARGIN.bottom}" stroke="#f3f4f6"/>`,
      `<text x="${x.toFixed(1)}" y="${HEIGHT - MARGIN.bottom + 18}" text-anchor="middle" ` +
        `font-size="11" fill="#374151">${formatTick(tick)}</text>`,
    );
  }

  // Axis labels with units.
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 14}" text-anchor="middle" ` +
      `font-size="13">${AXIS_LABELS[sweepParam] ?? sweepParam}</text>`,
    `<text x="20" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
      `transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">mean completion (ms)</text>`,
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#9ca3af"/>`,
  );

  // One polyline per protocol, points sorted by x.
  protocols.forEach((protocol, i) => {
    const series = usable
      .filter((r) => r.protocol === protocol)
      .sort((a, b) => xValue(a) - xValue(b));
    const color = SERIES_COLORS[protocol] ?? FALLBACK_COLORS[i % FALLBACK_COLORS.length];
    const points = series
      .map((r) => `${sx(xValue(r)).toFixed(1)},${sy(r.meanMs as number).toFixed(1)}`)
      .join(' ');
    parts.push(
      `<polyline data-series="${protocol}" points="${points}" fill="none" ` +
        `stroke="${color}" stroke-width="2"/>`,
    );
    for (const r of series) {
      parts.push(
        `<circle cx="${sx(xValue(r)).toFixed(1)}" cy="${sy(r.meanMs as number).toFixed(1)}" ` +
          `r="3" fill="${color}"/>`,
      );
    }
    const legendY = MARGIN.top + 10 + i * 22;
    parts.push(
      `<rect x="${WIDTH - MARGIN.right + 16}" y="${legendY - 10}" width="14" height="14" ` +
        `fill="${color}"/>`,
      `<text x="${WIDTH - MARGIN.right + 36}" y="${legendY + 2}" font-size="13">` +
        `${protocol}</text>`,
    );
  });

  parts.push('</svg>');
  return parts.join('\n');
}
