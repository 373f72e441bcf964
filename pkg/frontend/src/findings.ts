// Finding interval helpers and annotation composition.

import { Finding } from "./types.js";

export function overlapping(
  findings: Finding[],
  t0: number,
  t1: number,
): Finding[] {
  return findings.filter((f) => f.t0 < t1 && t0 < f.t1);
}

export function powerLossAt(findings: Finding[], t: number): Finding | null {
  for (const f of findings) {
    if (f.kind === "power_loss" && f.t0 <= t && t < f.t1) return f;
  }
  return null;
}

export function validSelection(sel: [number, number] | null): sel is [number, number] {
  return sel !== null && sel[0] < sel[1];
}

/**
 * Final annotation text. Findings have no server-side ids, so the
 * stable reference is kind plus interval; overlapped findings are
 * appended as bracketed tags.
 */
export function composeAnnotationText(
  text: string,
  sel: [number, number],
  findings: Finding[],
): string {
  const hits = overlapping(findings, sel[0], sel[1]);
  const tags = hits.map((f) => `[re: ${f.kind} [${f.t0}, ${f.t1})]`);
  const body = text.trim();
  return tags.length > 0 ? `${body} ${tags.join(" ")}` : body;
}
