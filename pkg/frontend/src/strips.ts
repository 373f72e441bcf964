// Canvas drawing for channel strips and the findings timeline.

import { segments, synthIntervals, tToX, vToY, ColumnMap } from "./series.js";
import { Annotation, ChannelInfo, Finding, Row } from "./types.js";

export const GROUP_COLORS: Record<string, string> = {
  emg: "#7fd4ff",
  decision: "#ffd166",
  position: "#9bff9b",
  torque: "#ff9b9b",
  temperature: "#d6a2ff",
};

export const FINDING_COLORS: Record<string, string> = {
  power_loss: "rgba(255, 80, 80, 0.45)",
  logger_or_sensor_fault: "rgba(255, 160, 40, 0.45)",
  emg_dropout: "rgba(255, 230, 80, 0.30)",
  actuation_active: "rgba(80, 200, 255, 0.35)",
  actuation_inactive: "rgba(150, 150, 170, 0.40)",
  under_load_at_failure: "rgba(220, 100, 255, 0.55)",
};

function clear(canvas: HTMLCanvasElement): CanvasRenderingContext2D {
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  return ctx;
}

function drawCursor(
  ctx: CanvasRenderingContext2D,
  cursor: number,
  window: [number, number],
  w: number,
  h: number,
): void {
  if (cursor < window[0] || cursor >= window[1]) return;
  const x = tToX(cursor, window, w);
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(x, 0);
  ctx.lineTo(x, h);
  ctx.stroke();
}

function drawSelection(
  ctx: CanvasRenderingContext2D,
  selection: [number, number] | null,
  window: [number, number],
  w: number,
  h: number,
): void {
  if (!selection) return;
  const x0 = Math.max(0, tToX(selection[0], window, w));
  const x1 = Math.min(w, tToX(selection[1], window, w));
  if (x1 <= x0) return;
  ctx.fillStyle = "rgba(120, 170, 255, 0.18)";
  ctx.fillRect(x0, 0, x1 - x0, h);
  ctx.strokeStyle = "rgba(120, 170, 255, 0.8)";
  ctx.strokeRect(x0 + 0.5, 0.5, x1 - x0 - 1, h - 1);
}

export function drawStrip(
  canvas: HTMLCanvasElement,
  rows: Row[],
  cols: ColumnMap,
  channel: ChannelInfo,
  window: [number, number],
  cursor: number,
  selection: [number, number] | null,
): void {
  const ctx = clear(canvas);
  const w = canvas.width;
  const h = canvas.height;

  ctx.fillStyle = "#101018";
  ctx.fillRect(0, 0, w, h);

  // zero-fill stretches as hatched gaps, never interpolated over
  ctx.fillStyle = "rgba(255, 70, 70, 0.10)";
  for (const [g0, g1] of synthIntervals(rows, cols)) {
    const x0 = Math.max(0, tToX(g0, window, w));
    const x1 = Math.min(w, tToX(g1, window, w));
    if (x1 > x0) ctx.fillRect(x0, 0, x1 - x0, h);
  }

  // midline
  ctx.strokeStyle = "#262636";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(0, vToY(0, channel.lo, channel.hi, h) + 0.5);
  ctx.lineTo(w, vToY(0, channel.lo, channel.hi, h) + 0.5);
  ctx.stroke();

  ctx.strokeStyle = GROUP_COLORS[channel.group] ?? "#cccccc";
  ctx.lineWidth = 1.25;
  for (const seg of segments(rows, cols, channel.id)) {
    ctx.beginPath();
    for (let i = 0; i < seg.length; i++) {
      const x = tToX(seg[i][0], window, w);
      const y = vToY(seg[i][1], channel.lo, channel.hi, h);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    }
    if (seg.length === 1) {
      // lone sample between gaps: draw a dot so it stays visible
      const x = tToX(seg[0][0], window, w);
      const y = vToY(seg[0][1], channel.lo, channel.hi, h);
      ctx.fillStyle = ctx.strokeStyle;
      ctx.fillRect(x - 1, y - 1, 2, 2);
    } else {
      ctx.stroke();
    }
  }

  drawSelection(ctx, selection, window, w, h);
  drawCursor(ctx, cursor, window, w, h);
}

export function drawTimeline(
  canvas: HTMLCanvasElement,
  bounds: [number, number],
  findings: Finding[],
  annotations: Annotation[],
  window: [number, number],
  cursor: number,
  selection: [number, number] | null,
): void {
  const ctx = clear(canvas);
  const w = canvas.width;
  const h = canvas.height;

  ctx.fillStyle = "#14141e";
  ctx.fillRect(0, 0, w, h);

  // visible-window shadow over the whole session extent
  const vx0 = tToX(window[0], bounds, w);
  const vx1 = tToX(window[1], bounds, w);
  ctx.fillStyle = "rgba(255, 255, 255, 0.06)";
  ctx.fillRect(vx0, 0, vx1 - vx0, h);

  const bandH = h * 0.55;
  for (const f of findings) {
    const x0 = tToX(f.t0, bounds, w);
    const x1 = Math.max(tToX(f.t1, bounds, w), x0 + 2);
    ctx.fillStyle = FINDING_COLORS[f.kind] ?? "rgba(200,200,200,0.4)";
    ctx.fillRect(x0, 2, x1 - x0, bandH);
  }

  ctx.fillStyle = "#7fe3b0";
  for (const a of annotations) {
    const x0 = tToX(a.t0, bounds, w);
    const x1 = Math.max(tToX(a.t1, bounds, w), x0 + 2);
    ctx.fillRect(x0, h - 8, x1 - x0, 6);
  }

  drawSelection(ctx, selection, bounds, w, h);
  drawCursor(ctx, cursor, bounds, w, h);
}
