/** Hand-built SVG primitives. Everything is a pure function of its inputs
 *  with fixed-precision coordinates, so identical data yields identical
 *  bytes. */

export interface Frame {
  width: number;
  height: number;
  margin: { top: number; right: number; bottom: number; left: number };
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 420,
  margin: { top: 48, right: 24, bottom: 56, left: 64 },
};

export const SERIES_COLORS = ['#1f6fb2', '#c94f32', '#3d8f5f', '#8458a8'];

const fmt = (v: number): string => v.toFixed(2);

export function linearScale(
  domain: [number, number],
  range: [number, number],
): (v: number) => number {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function openSvg(frame: Frame, title: string): string[] {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${frame.width}" height="${frame.height}" viewBox="0 0 ${frame.width} ${frame.height}">`,
    `<rect width="${frame.width}" height="${frame.height}" fill="#ffffff"/>`,
    `<text x="${frame.width / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15" fill="#222222">${escapeText(title)}</text>`,
  ];
}

export function escapeText(s: string): string {
  return s.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

export function polyline(points: Array<[number, number]>, color: string, dashed = false): string {
  const attr = dashed ? ' stroke-dasharray="6 4"' : '';
  const coords = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(' ');
  return `<polyline fill="none" stroke="${color}" stroke-width="1.8"${attr} points="${coords}"/>`;
}

export function circle(x: number, y: number, r: number, color: string): string {
  return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${fmt(r)}" fill="${color}"/>`;
}

export function rect(x: number, y: number, w: number, h: number, color: string): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${color}" fill-opacity="0.65"/>`;
}

export function axes(
  frame: Frame,
  xDomain: [number, number],
  yDomain: [number, number],
  xTicks: number[],
  yTicks: number[],
  xLabel: string,
  yLabel: string,
): { parts: string[]; sx: (v: number) => number; sy: (v: number) => number } {
  const { margin, width, height } = frame;
  const sx = linearScale(xDomain, [margin.left, width - margin.right]);
  const sy = linearScale(yDomain, [height - margin.bottom, margin.top]);
  const x0 = margin.left;
  const x1 = width - margin.right;
  const y0 = height - margin.bottom;
  const y1 = margin.top;
  const parts: string[] = [];
  parts.push(`<line x1="${fmt(x0)}" y1="${fmt(y0)}" x2="${fmt(x1)}" y2="${fmt(y0)}" stroke="#444444" stroke-width="1"/>`);
  parts.push(`<line x1="${fmt(x0)}" y1="${fmt(y0)}" x2="${fmt(x0)}" y2="${fmt(y1)}" stroke="#444444" stroke-width="1"/>`);
  for (const t of xTicks) {
    const x = sx(t);
    parts.push(`<line x1="${fmt(x)}" y1="${fmt(y0)}" x2="${fmt(x)}" y2="${fmt(y0 + 5)}" stroke="#444444" stroke-width="1"/>`);
    parts.push(`<text x="${fmt(x)}" y="${fmt(y0 + 20)}" text-anchor="middle" font-family="sans-serif" font-size="11" fill="#333333">${t}</text>`);
  }
  for (const t of yTicks) {
    const y = sy(t);
    parts.push(`<line x1="${fmt(x0 - 5)}" y1="${fmt(y)}" x2="${fmt(x0)}" y2="${fmt(y)}" stroke="#444444" stroke-width="1"/>`);
    parts.push(`<text x="${fmt(x0 - 9)}" y="${fmt(y + 4)}" text-anchor="end" font-family="sans-serif" font-size="11" fill="#333333">${formatTick(t)}</text>`);
  }
  parts.push(`<text x="${fmt((x0 + x1) / 2)}" y="${fmt(y0 + 42)}" text-anchor="middle" font-family="sans-serif" font-size="12" fill="#222222">${escapeText(xLabel)}</text>`);
  parts.push(`<text x="18" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" font-family="sans-serif" font-size="12" fill="#222222" transform="rotate(-90 18 ${fmt((y0 + y1) / 2)})">${escapeText(yLabel)}</text>`);
  return { parts, sx, sy };
}

function formatTick(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

export function legendEntry(x: number, y: number, color: string, label: string, dashed = false): string {
  const attr = dashed ? ' stroke-dasharray="6 4"' : '';
  return (
    `<line x1="${fmt(x)}" y1="${fmt(y)}" x2="${fmt(x + 22)}" y2="${fmt(y)}" stroke="${color}" stroke-width="1.8"${attr}/>` +
    `<text x="${fmt(x + 28)}" y="${fmt(y + 4)}" font-family="sans-serif" font-size="11" fill="#333333">${escapeText(label)}</text>`
  );
}
