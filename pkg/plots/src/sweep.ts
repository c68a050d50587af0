import { parseCsv, SWEEP_COLUMNS } from './csv.js';
import { sweepRowSchema, SweepRow } from './schema.js';
import {
  axes,
  circle,
  DEFAULT_FRAME,
  Frame,
  legendEntry,
  openSvg,
  polyline,
  SERIES_COLORS,
} from './svg.js';

export interface SweepOptions {
  title?: string;
  labels?: string[];
  frame?: Frame;
}

/** Detection rate versus cap value, one solid curve per input CSV, with a
 *  dashed overlay of the Binomial tail the first CSV carries. */
export function renderSweep(csvTexts: string[], options: SweepOptions = {}): string {
  if (csvTexts.length === 0) {
    throw new Error('renderSweep needs at least one csv');
  }
  const series: SweepRow[][] = csvTexts.map((text) =>
    [...parseCsv(text, sweepRowSchema, SWEEP_COLUMNS)].sort((a, b) => a.threshold - b.threshold),
  );
  const frame = options.frame ?? DEFAULT_FRAME;
  const thresholds = series.flatMap((rows) => rows.map((r) => r.threshold));
  const xDomain: [number, number] = [Math.min(...thresholds), Math.max(...thresholds)];
  const xTicks = series[0]
    .map((r) => r.threshold)
    .filter((t, i, all) => all.length <= 12 || i % Math.ceil(all.length / 12) === 0);
  const { parts, sx, sy } = axes(
    frame, xDomain, [0, 1], xTicks, [0, 0.25, 0.5, 0.75, 1],
    'forwarding cap', 'detection rate',
  );
  const out = openSvg(frame, options.title ?? 'Detection rate vs forwarding cap');
  out.push(...parts);
  out.push(
    polyline(series[0].map((r) => [sx(r.threshold), sy(r.theory_tail)]), '#777777', true),
  );
  series.forEach((rows, idx) => {
    const color = SERIES_COLORS[idx % SERIES_COLORS.length];
    out.push(polyline(rows.map((r) => [sx(r.threshold), sy(r.rate)]), color));
    for (const r of rows) {
      out.push(circle(sx(r.threshold), sy(r.rate), 2.4, color));
    }
  });
  const legendX = frame.margin.left + 10;
  series.forEach((rows, idx) => {
    const label = options.labels?.[idx] ?? `run ${idx + 1} (seed ${rows[0].base_seed})`;
    out.push(legendEntry(legendX, frame.margin.top + 12 + 16 * idx, SERIES_COLORS[idx % SERIES_COLORS.length], label));
  });
  out.push(
    legendEntry(legendX, frame.margin.top + 12 + 16 * series.length, '#777777', 'matching tail probability', true),
  );
  out.push('</svg>');
  return out.join('\n') + '\n';
}
