import { CONGESTION_COLUMNS, parseCsv } from './csv.js';
import { congestionRowSchema, parseSummary, SchemaError } from './schema.js';
import {
  axes,
  circle,
  DEFAULT_FRAME,
  Frame,
  legendEntry,
  openSvg,
  polyline,
  rect,
} from './svg.js';

export interface CongestionOptions {
  title?: string;
  frame?: Frame;
}

export function binomialPmf(n: number, t: number, p: number): number {
  if (t < 0 || t > n) return 0;
  // iterative product keeps n small-scale exact enough for drawing
  let logC = 0;
  for (let j = 1; j <= t; j++) {
    logC += Math.log(n - t + j) - Math.log(j);
  }
  return Math.exp(logC + t * Math.log(p) + (n - t) * Math.log(1 - p));
}

/** Histogram of per-trial identifier counts with the matching Binomial pmf
 *  overlaid from the summary. The plot never recomputes statistics beyond
 *  bucketing the rows; the summary is the source of truth for (n, r). */
export function renderCongestion(csvText: string, summaryText: string, options: CongestionOptions = {}): string {
  const rows = parseCsv(csvText, congestionRowSchema, CONGESTION_COLUMNS);
  const summary = parseSummary(summaryText);
  if (rows.length !== summary.trials) {
    throw new SchemaError(
      `summary promises ${summary.trials} trials but csv has ${rows.length}`,
    );
  }
  const counts = new Map<number, number>();
  for (const row of rows) {
    counts.set(row.x, (counts.get(row.x) ?? 0) + 1);
  }
  const maxX = Math.max(...counts.keys(), Math.ceil(summary.n_paths * summary.r * 4), 3);
  const empirical: Array<[number, number]> = [];
  for (let x = 0; x <= maxX; x++) {
    empirical.push([x, (counts.get(x) ?? 0) / rows.length]);
  }
  const theory: Array<[number, number]> = empirical.map(([x]) => [
    x,
    binomialPmf(summary.n_paths, x, summary.r),
  ]);
  const peak = Math.max(
    ...empirical.map(([, p]) => p),
    ...theory.map(([, p]) => p),
  );
  const frame = options.frame ?? DEFAULT_FRAME;
  const yTop = Math.min(1, peak * 1.15 + 1e-9);
  const yTicks = [0, yTop / 2, yTop].map((v) => Number(v.toFixed(3)));
  const xTicks = empirical.map(([x]) => x).filter((x, i, all) => all.length <= 14 || i % 2 === 0);
  const { parts, sx, sy } = axes(
    frame, [-0.5, maxX + 0.5], [0, yTop], xTicks, yTicks,
    'identifiers at the probe', 'probability',
  );
  const title =
    options.title ??
    `Probe congestion: ${summary.label}, n=${summary.n_paths}, r=${summary.r.toPrecision(3)}`;
  const out = openSvg(frame, title);
  out.push(...parts);
  const slot = sx(1) - sx(0);
  const barWidth = slot * 0.72;
  for (const [x, p] of empirical) {
    const left = sx(x) - barWidth / 2;
    out.push(rect(left, sy(p), barWidth, sy(0) - sy(p), '#1f6fb2'));
  }
  out.push(polyline(theory.map(([x, p]) => [sx(x), sy(p)]), '#c94f32', true));
  for (const [x, p] of theory) {
    out.push(circle(sx(x), sy(p), 2.6, '#c94f32'));
  }
  const legendX = frame.width - frame.margin.right - 210;
  out.push(legendEntry(legendX, frame.margin.top + 12, '#1f6fb2', `empirical (${summary.trials} trials)`));
  out.push(legendEntry(legendX, frame.margin.top + 28, '#c94f32', 'Binomial pmf', true));
  out.push('</svg>');
  return out.join('\n') + '\n';
}
