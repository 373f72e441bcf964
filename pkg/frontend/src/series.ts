// Row handling and strip geometry, kept free of DOM types so the math
// is testable headless.

import { Meta, Row } from "./types.js";

export interface ColumnMap {
  t: number;
  synth: number;
  hb: number;
  channel: Record<string, number>;
}

export function columnMap(meta: Meta): ColumnMap {
  const idx = (name: string) => {
    const i = meta.columns.indexOf(name);
    if (i < 0) throw new Error(`column ${name} missing from /api/meta`);
    return i;
  };
  const channel: Record<string, number> = {};
  for (const ch of meta.channels) channel[ch.id] = idx(ch.id);
  return { t: idx("t"), synth: idx("synth"), hb: idx("hb"), channel };
}

export type Point = [number, number]; // [t, value]

/**
 * Split one channel into polyline segments, breaking at synthesized
 * records. Zero-filled seconds carry no measurement, so no line is
 * drawn through them: gaps are shown as gaps.
 */
export function segments(rows: Row[], cols: ColumnMap, id: string): Point[][] {
  const col = cols.channel[id];
  if (col === undefined) throw new Error(`unknown channel ${id}`);
  const out: Point[][] = [];
  let current: Point[] = [];
  for (const row of rows) {
    if (row[cols.synth]) {
      if (current.length > 0) out.push(current);
      current = [];
    } else {
      current.push([row[cols.t], row[col]]);
    }
  }
  if (current.length > 0) out.push(current);
  return out;
}

/** Synthesized stretches as [t0, t1) intervals, for gap shading. */
export function synthIntervals(rows: Row[], cols: ColumnMap): Point[] {
  const out: Point[] = [];
  let start: number | null = null;
  let last = 0;
  for (const row of rows) {
    const t = row[cols.t];
    if (row[cols.synth]) {
      if (start === null) start = t;
    } else if (start !== null) {
      out.push([start, t]);
      start = null;
    }
    last = t;
  }
  if (start !== null) out.push([start, last + 1]);
  return out;
}

export function tToX(t: number, window: [number, number], width: number): number {
  const [w0, w1] = window;
  return ((t - w0) / (w1 - w0)) * width;
}

export function xToT(x: number, window: [number, number], width: number): number {
  const [w0, w1] = window;
  return w0 + (x / width) * (w1 - w0);
}

export function vToY(v: number, lo: number, hi: number, height: number): number {
  if (hi === lo) return height / 2;
  // y grows downward; pad 5% so extremes stay visible
  const pad = 0.05 * height;
  const frac = (v - lo) / (hi - lo);
  return height - pad - frac * (height - 2 * pad);
}
