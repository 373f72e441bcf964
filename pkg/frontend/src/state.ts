// View-state transitions. All pure: the DOM layer applies the result.

import { Meta, Playback, ViewState } from "./types.js";

export const RATES: Record<Playback, number> = { paused: 0, x1: 1, x10: 10 };

export function initView(meta: Meta): ViewState {
  return {
    t0: meta.t0,
    t1: meta.t1,
    cursor: meta.t0,
    window: [meta.t0, meta.t1],
    visible: new Set(meta.channels.map((c) => c.id)),
    playback: "paused",
    selection: null,
  };
}

export function clampCursor(state: ViewState, c: number): number {
  // last addressable record is t1 - 1; the log is empty when t0 === t1
  if (state.t1 <= state.t0) return state.t0;
  return Math.min(Math.max(c, state.t0), state.t1 - 1);
}

export function setCursor(state: ViewState, c: number): ViewState {
  return { ...state, cursor: clampCursor(state, c) };
}

export function setPlayback(state: ViewState, p: Playback): ViewState {
  return { ...state, playback: p };
}

/** Advance the cursor by rate x wall-clock dt; pause on hitting log end. */
export function playbackStep(state: ViewState, dtSeconds: number): ViewState {
  const rate = RATES[state.playback];
  if (rate === 0 || dtSeconds <= 0) return state;
  const end = Math.max(state.t0, state.t1 - 1);
  const moved = state.cursor + rate * dtSeconds;
  if (moved >= end) {
    return { ...state, cursor: end, playback: "paused" };
  }
  return { ...state, cursor: moved };
}

export function setWindow(state: ViewState, w0: number, w1: number): ViewState {
  // reject empty or inverted windows; clamp to the log
  const a = Math.max(state.t0, Math.min(w0, w1));
  const b = Math.min(state.t1, Math.max(w0, w1));
  if (!(a < b)) return state;
  return { ...state, window: [a, b] };
}

export function toggleChannel(state: ViewState, id: string): ViewState {
  const visible = new Set(state.visible);
  if (visible.has(id)) visible.delete(id);
  else visible.add(id);
  return { ...state, visible };
}

export function setSelection(
  state: ViewState,
  t0: number,
  t1: number,
): ViewState {
  const a = Math.round(Math.min(t0, t1));
  const b = Math.round(Math.max(t0, t1));
  if (a >= b) return { ...state, selection: null };
  return {
    ...state,
    selection: [Math.max(a, state.t0), Math.min(b, state.t1)],
  };
}

export function clearSelection(state: ViewState): ViewState {
  return { ...state, selection: null };
}
