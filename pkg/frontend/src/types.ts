// Shapes of the service's JSON responses, mirrored by hand.

export interface SessionInfo {
  session_id: string;
  device_id: string;
  start_utc: string;
  rate_hz: number;
  schema_version: number;
}

export interface ChannelInfo {
  id: string;
  group: string;
  unit: string;
  lo: number;
  hi: number;
}

export interface Meta {
  session: SessionInfo;
  t0: number;
  t1: number;
  records: number;
  columns: string[];
  channels: ChannelInfo[];
}

// One record as an array in CSV column order:
// [seq, t, ...12 channel values, hb, synth]
export type Row = number[];

export interface LogSlice {
  from: number;
  to: number;
  rows: Row[];
}

export interface Finding {
  kind: string;
  t0: number;
  t1: number;
  evidence: string[];
  confidence: "high" | "low";
  note: string;
}

export interface FindingsDoc {
  config: Record<string, number>;
  findings: Finding[];
  report: {
    what_happened: string[];
    why: string[];
    prevention: string[];
  };
}

export interface Annotation {
  id: number;
  t0: number;
  t1: number;
  text: string;
  channel: string | null;
}

export interface AnnotationIn {
  t0: number;
  t1: number;
  text: string;
  channel?: string | null;
}

export type Playback = "paused" | "x1" | "x10";

export interface ViewState {
  // log bounds, fixed after load
  t0: number;
  t1: number;
  // invariants: t0 <= cursor < t1; window non-empty and inside the log
  cursor: number;
  window: [number, number];
  visible: ReadonlySet<string>;
  playback: Playback;
  selection: [number, number] | null;
}
