/** Pure state helpers: weight clamping, request sequencing, rank movement,
 *  timing-file parsing and sweep chart data. No DOM, no fetch. */

import type { Mode, RankEntry, SweepResponse } from "./api.js";

export type Weights = [number, number, number, number];

export const WEIGHT_MIN = 0;
export const WEIGHT_MAX = 5;

/** Snap a slider value to an integer step within 0..5. */
export function clampWeight(value: number): number {
  if (!Number.isFinite(value)) return WEIGHT_MIN;
  return Math.min(WEIGHT_MAX, Math.max(WEIGHT_MIN, Math.round(value)));
}

export function allZero(weights: Weights): boolean {
  return weights.every((w) => w === 0);
}

/**
 * Discards responses that arrive after a newer request was issued.
 * issue() returns a token; a response is applied only while its token is
 * still the latest one, so a slider drag settles on the final state.
 */
export class LatestRequestGate {
  private seq = 0;

  issue(): number {
    return ++this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}

/** Rank movement per VM relative to the previous ranking: positive = moved
 *  up (better), negative = moved down, 0 = unchanged or newly appeared. */
export function rankMovements(
  previous: Record<string, number> | null,
  entries: RankEntry[],
): Record<string, number> {
  const out: Record<string, number> = {};
  for (const e of entries) {
    const before = previous?.[e.vm];
    out[e.vm] = before === undefined ? 0 : before - e.rank;
  }
  return out;
}

export interface TimingRow {
  vm: string;
  mode: Mode;
  seconds: number;
}

/** Parse the timing file format: `vm_id, mode, seconds` rows, `#` comments,
 *  optional [timings] section header. Throws with the offending line. */
export function parseTimings(text: string): TimingRow[] {
  const rows: TimingRow[] = [];
  const lines = text.split(/\r?\n/);
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line || line.startsWith("#")) continue;
    if (/^\[[a-z_]+\]$/.test(line)) {
      if (line !== "[timings]") {
        throw new Error(`line ${i + 1}: unknown section ${line}`);
      }
      continue;
    }
    const parts = line.split(",").map((p) => p.trim());
    if (parts.length !== 3) {
      throw new Error(
        `line ${i + 1}: expected "vm_id, mode, seconds", got ${parts.length} fields`,
      );
    }
    const [vm, mode, secondsText] = parts;
    if (mode !== "sequential" && mode !== "parallel") {
      throw new Error(`line ${i + 1}: unknown mode "${mode}"`);
    }
    const seconds = Number(secondsText);
    if (!Number.isFinite(seconds) || seconds <= 0) {
      throw new Error(`line ${i + 1}: seconds must be positive, got "${secondsText}"`);
    }
    rows.push({ vm, mode, seconds });
  }
  if (rows.length === 0) throw new Error("file contains no timing rows");
  return rows;
}

export interface SweepSegment {
  rank: number;
  frequency: number;
}

export interface SweepBar {
  vm: string;
  segments: SweepSegment[];
  topKFrequency: number;
}

/** Stacked-bar data: one bar per VM, one segment per rank position 1..k,
 *  segment height = count/total. Bars sorted by top-k frequency, best
 *  first; VMs that never reach the top k keep an empty bar. */
export function sweepBars(resp: SweepResponse): SweepBar[] {
  const bars = resp.per_vm.map((e) => {
    const segments: SweepSegment[] = [];
    for (let rank = 1; rank <= resp.k; rank++) {
      const count = e.rank_counts[String(rank)] ?? 0;
      if (count > 0) {
        segments.push({ rank, frequency: count / resp.total_vectors });
      }
    }
    return { vm: e.vm, segments, topKFrequency: e.top_k_frequency };
  });
  bars.sort(
    (a, b) => b.topKFrequency - a.topKFrequency || a.vm.localeCompare(b.vm),
  );
  return bars;
}

/** Scale factor for contribution bars: largest |contribution| in the table
 *  maps to a full-width bar. Returns 1 when everything is zero. */
export function contributionScale(entries: RankEntry[]): number {
  let max = 0;
  for (const e of entries) {
    for (const v of Object.values(e.contributions)) {
      max = Math.max(max, Math.abs(v));
    }
  }
  return max > 0 ? max : 1;
}
