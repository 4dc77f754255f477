/** DOM rendering. Every value shown is read from the controller state,
 *  which in turn holds service responses verbatim. */

import { GROUPS, GROUP_LABELS, type GroupName } from "./api.js";
import type { ExplorerState } from "./controller.js";
import { contributionScale, sweepBars } from "./state.js";

const RANK_COLORS = ["#2f6fde", "#6fa1ee", "#b3cdf7"];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function movementBadge(delta: number): HTMLElement {
  if (delta > 0) return el("span", "move up", `↑${delta}`);
  if (delta < 0) return el("span", "move down", `↓${-delta}`);
  return el("span", "move none", "·");
}

export function renderRankingTable(root: HTMLElement, state: ExplorerState): void {
  root.replaceChildren();
  if (!state.ranking) {
    root.append(el("p", "placeholder",
      state.rankingDisabled
        ? "Ranking disabled: all four weights are zero."
        : "Move a slider to rank the fleet."));
    return;
  }
  const scale = contributionScale(state.ranking.entries);
  const table = el("table", "ranking");
  const head = el("tr");
  for (const title of ["Rank", "", "VM", "Score", "Group contributions"]) {
    head.append(el("th", undefined, title));
  }
  table.append(head);
  for (const entry of state.ranking.entries) {
    const row = el("tr");
    row.append(el("td", "rank", String(entry.rank)));
    const move = el("td", "movement");
    move.append(movementBadge(state.movements[entry.vm] ?? 0));
    row.append(move);
    row.append(el("td", "vm", entry.vm));
    row.append(el("td", "score", entry.score.toFixed(3)));
    const bars = el("td", "bars");
    for (const group of GROUPS) {
      bars.append(contributionBar(group, entry.contributions[group] ?? 0, scale));
    }
    row.append(bars);
    table.append(row);
  }
  root.append(table);
}

function contributionBar(group: GroupName, value: number, scale: number): HTMLElement {
  const wrap = el("div", "bar-track");
  wrap.title = `${GROUP_LABELS[group]}: ${value.toFixed(3)}`;
  const bar = el("div", `bar g-${group}${value < 0 ? " negative" : ""}`);
  bar.style.width = `${Math.min(100, (Math.abs(value) / scale) * 100)}%`;
  wrap.append(bar);
  return wrap;
}

export function renderValidation(root: HTMLElement, state: ExplorerState): void {
  root.replaceChildren();
  if (!state.report) {
    root.append(el("p", "placeholder",
      "Load a timing file to compare this ranking against measured runs."));
    return;
  }
  const report = state.report;
  const gauge = el("div", "gauge");
  const value = el("div", "gauge-value", report.coefficient.toFixed(3));
  const meter = el("div", "gauge-track");
  const fill = el("div", "gauge-fill");
  // map [-1, 1] onto the track
  fill.style.width = `${((report.coefficient + 1) / 2) * 100}%`;
  meter.append(fill);
  gauge.append(value, meter,
               el("div", "gauge-caption",
                  `${report.method} over ${Object.keys(report.per_vm_delta).length}` +
                  ` shared VMs · top-${report.k} overlap ${report.top_k_overlap}`));
  root.append(gauge);

  const list = el("table", "deltas");
  const head = el("tr");
  for (const title of ["VM", "Benchmark", "Empirical", "Δ"]) {
    head.append(el("th", undefined, title));
  }
  list.append(head);
  const benchRanks = Object.fromEntries(
    report.benchmark.entries.map((e) => [e.vm, e.rank]));
  const empRanks = Object.fromEntries(
    report.empirical.entries.map((e) => [e.vm, e.rank]));
  const shared = Object.keys(report.per_vm_delta)
    .sort((a, b) => (benchRanks[a] ?? 0) - (benchRanks[b] ?? 0));
  for (const vm of shared) {
    const delta = report.per_vm_delta[vm];
    const row = el("tr", Math.abs(delta) > 3 ? "diverging" : undefined);
    row.append(el("td", "vm", vm));
    row.append(el("td", undefined, String(benchRanks[vm] ?? "")));
    row.append(el("td", undefined, String(empRanks[vm] ?? "")));
    row.append(el("td", "delta", delta > 0 ? `+${delta}` : String(delta)));
    list.append(row);
  }
  root.append(list);

  if (report.divergence.length > 0) {
    const flags = el("div", "flags");
    flags.append(el("h3", undefined, "Divergence flags"));
    for (const f of report.divergence) {
      const groups = f.suspect_groups
        .map((g) => GROUP_LABELS[g as GroupName] ?? g).join(", ");
      flags.append(el("p", "flag",
        `${f.vm}: benchmark ${f.rank_a} vs empirical ${f.rank_b}` +
        (groups ? ` — revisit weight of ${groups}` : "")));
    }
    root.append(flags);
  }
}

export function renderSweepChart(root: HTMLElement, state: ExplorerState): void {
  root.replaceChildren();
  if (!state.sweep) {
    root.append(el("p", "placeholder", "Sweep not loaded yet."));
    return;
  }
  if (state.sweep.per_vm.length === 0) {
    root.append(el("p", "placeholder", "The dataset is empty; nothing to sweep."));
    return;
  }
  const chart = el("div", "sweep-chart");
  for (const bar of sweepBars(state.sweep)) {
    const column = el("div", "sweep-col");
    const stack = el("div", "sweep-stack");
    for (const seg of bar.segments) {
      const segment = el("div", "sweep-seg");
      segment.style.height = `${seg.frequency * 100}%`;
      segment.style.background =
        RANK_COLORS[(seg.rank - 1) % RANK_COLORS.length];
      segment.title =
        `${bar.vm} · rank ${seg.rank}: ${(seg.frequency * 100).toFixed(1)}%`;
      stack.append(segment);
    }
    column.append(stack);
    column.append(el("div", "sweep-label", bar.vm));
    column.append(el("div", "sweep-freq",
                     `${(bar.topKFrequency * 100).toFixed(0)}%`));
    chart.append(column);
  }
  root.append(chart);
  const legend = el("div", "sweep-legend");
  for (let rank = 1; rank <= Math.min(state.sweep.k, RANK_COLORS.length); rank++) {
    const item = el("span", "legend-item", `rank ${rank}`);
    item.style.setProperty("--swatch", RANK_COLORS[rank - 1]);
    legend.append(item);
  }
  legend.append(el("span", "legend-note",
    `${state.sweep.total_vectors} weight vectors · ${state.sweep.mode}`));
  root.append(legend);
}

export function renderError(root: HTMLElement, state: ExplorerState): void {
  root.textContent = state.error ?? "";
  root.classList.toggle("visible", state.error !== null);
}
