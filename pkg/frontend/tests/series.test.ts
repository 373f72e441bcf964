import { describe, expect, it } from "vitest";

import {
  columnMap,
  segments,
  synthIntervals,
  tToX,
  vToY,
  xToT,
} from "../src/series.js";
import { COLUMNS, makeMeta, makeRow } from "./helpers.js";

const meta = makeMeta();
const cols = columnMap(meta);

describe("columnMap", () => {
  it("locates the bookkeeping and channel columns", () => {
    expect(cols.t).toBe(COLUMNS.indexOf("t"));
    expect(cols.synth).toBe(COLUMNS.indexOf("synth"));
    expect(cols.hb).toBe(COLUMNS.indexOf("hb"));
    expect(cols.channel["emg_lb"]).toBe(2);
    expect(cols.channel["temp_r"]).toBe(13);
  });

  it("rejects a header missing an expected column", () => {
    const broken = { ...meta, columns: meta.columns.filter((c) => c !== "hb") };
    expect(() => columnMap(broken)).toThrow(/hb/);
  });
});

describe("segments", () => {
  it("breaks the polyline at synthesized records instead of interpolating", () => {
    const rows = [
      makeRow(0, { values: { pos_l: 10 } }),
      makeRow(1, { values: { pos_l: 20 } }),
      makeRow(2, { synth: 1, hb: 0 }),
      makeRow(3, { synth: 1, hb: 0 }),
      makeRow(4, { values: { pos_l: 40 } }),
      makeRow(5, { values: { pos_l: 50 } }),
    ];
    expect(segments(rows, cols, "pos_l")).toEqual([
      [
        [0, 10],
        [1, 20],
      ],
      [
        [4, 40],
        [5, 50],
      ],
    ]);
  });

  it("returns a single segment when nothing is synthesized", () => {
    const rows = [0, 1, 2].map((t) => makeRow(t, { values: { temp_l: t } }));
    expect(segments(rows, cols, "temp_l")).toEqual([[[0, 0], [1, 1], [2, 2]]]);
  });

  it("returns nothing when every record is synthesized", () => {
    const rows = [0, 1].map((t) => makeRow(t, { synth: 1, hb: 0 }));
    expect(segments(rows, cols, "emg_rt")).toEqual([]);
  });

  it("rejects an unknown channel id", () => {
    expect(() => segments([], cols, "emg_xx")).toThrow(/emg_xx/);
  });
});

describe("synthIntervals", () => {
  it("reports half-open gap intervals", () => {
    const rows = [
      makeRow(0),
      makeRow(1, { synth: 1, hb: 0 }),
      makeRow(2, { synth: 1, hb: 0 }),
      makeRow(3),
      makeRow(4, { synth: 1, hb: 0 }),
    ];
    expect(synthIntervals(rows, cols)).toEqual([
      [1, 3],
      [4, 5],
    ]);
  });

  it("is empty for a fully live log", () => {
    expect(synthIntervals([makeRow(0), makeRow(1)], cols)).toEqual([]);
  });
});

describe("coordinate mapping", () => {
  const win: [number, number] = [100, 200];

  it("maps window edges to canvas edges", () => {
    expect(tToX(100, win, 800)).toBe(0);
    expect(tToX(200, win, 800)).toBe(800);
    expect(tToX(150, win, 800)).toBe(400);
  });

  it("x and t maps invert each other", () => {
    for (const t of [100, 123.4, 199]) {
      expect(xToT(tToX(t, win, 640), win, 640)).toBeCloseTo(t, 9);
    }
  });

  it("value mapping pads 5% and grows downward", () => {
    expect(vToY(0, 0, 100, 60)).toBeCloseTo(57); // lo near the bottom
    expect(vToY(100, 0, 100, 60)).toBeCloseTo(3); // hi near the top
    expect(vToY(50, 0, 100, 60)).toBeCloseTo(30);
  });

  it("centers a degenerate channel range", () => {
    expect(vToY(5, 5, 5, 60)).toBe(30);
  });
});
