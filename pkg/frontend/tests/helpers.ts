// Fixture builders shared by the test suites.

import { ChannelInfo, Meta, Row } from "../src/types.js";

export const CHANNELS: ChannelInfo[] = [
  { id: "emg_lb", group: "emg", unit: "counts", lo: 0, hi: 1023 },
  { id: "emg_lt", group: "emg", unit: "counts", lo: 0, hi: 1023 },
  { id: "emg_rb", group: "emg", unit: "counts", lo: 0, hi: 1023 },
  { id: "emg_rt", group: "emg", unit: "counts", lo: 0, hi: 1023 },
  { id: "dec_l", group: "decision", unit: "bool", lo: 0, hi: 1 },
  { id: "dec_r", group: "decision", unit: "bool", lo: 0, hi: 1 },
  { id: "pos_l", group: "position", unit: "deg", lo: 0, hi: 150 },
  { id: "pos_r", group: "position", unit: "deg", lo: 0, hi: 150 },
  { id: "torque_l", group: "torque", unit: "N·m", lo: -40, hi: 40 },
  { id: "torque_r", group: "torque", unit: "N·m", lo: -40, hi: 40 },
  { id: "temp_l", group: "temperature", unit: "°C", lo: -20, hi: 100 },
  { id: "temp_r", group: "temperature", unit: "°C", lo: -20, hi: 100 },
];

export const COLUMNS = [
  "seq",
  "t",
  ...CHANNELS.map((c) => c.id),
  "hb",
  "synth",
];

export function makeMeta(t0 = 0, t1 = 6): Meta {
  return {
    session: {
      session_id: "fixture",
      device_id: "bench",
      start_utc: "2026-01-01T00:00:00Z",
      rate_hz: 1,
      schema_version: 1,
    },
    t0,
    t1,
    records: t1 - t0,
    columns: COLUMNS,
    channels: CHANNELS,
  };
}

export function makeRow(
  t: number,
  opts: {
    hb?: number;
    synth?: number;
    values?: Record<string, number>;
  } = {},
): Row {
  const row: Row = [t, t, ...CHANNELS.map(() => 0), opts.hb ?? 1, opts.synth ?? 0];
  for (const [id, v] of Object.entries(opts.values ?? {})) {
    const i = CHANNELS.findIndex((c) => c.id === id);
    if (i < 0) throw new Error(`fixture: unknown channel ${id}`);
    row[2 + i] = v;
  }
  return row;
}
