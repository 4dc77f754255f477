/** Bootstraps the explorer: binds sliders, mode toggle, timing upload and
 *  the sweep panel to the controller, and re-renders on every state push. */

import { ApiClient, GROUPS, GROUP_LABELS, type Mode } from "./api.js";
import { ExplorerController, type ExplorerState } from "./controller.js";
import { debounce } from "./debounce.js";
import {
  renderError,
  renderRankingTable,
  renderSweepChart,
  renderValidation,
} from "./view.js";

const DEBOUNCE_MS = 150;

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function readWeights(sliders: HTMLInputElement[]): number[] {
  return sliders.map((s) => Number(s.value));
}

function start(): void {
  const api = new ApiClient();
  const tableRoot = byId<HTMLElement>("ranking");
  const validationRoot = byId<HTMLElement>("validation");
  const sweepRoot = byId<HTMLElement>("sweep");
  const errorRoot = byId<HTMLElement>("error");
  const disabledNote = byId<HTMLElement>("disabled-note");

  const controller = new ExplorerController(api, (state: ExplorerState) => {
    renderRankingTable(tableRoot, state);
    renderValidation(validationRoot, state);
    renderSweepChart(sweepRoot, state);
    renderError(errorRoot, state);
    disabledNote.textContent = state.rankingDisabled
      ? controller.disabledReason
      : "";
  });

  const sliderBox = byId<HTMLElement>("sliders");
  const sliders: HTMLInputElement[] = [];
  GROUPS.forEach((group, i) => {
    const wrap = document.createElement("label");
    wrap.className = "slider";
    const title = document.createElement("span");
    title.textContent = GROUP_LABELS[group];
    const value = document.createElement("output");
    const input = document.createElement("input");
    input.type = "range";
    input.min = "0";
    input.max = "5";
    input.step = "1";
    input.value = String(controller.current.weights[i]);
    input.dataset.group = group;
    value.value = input.value;
    input.addEventListener("input", () => {
      value.value = input.value;
      onWeightsChanged();
    });
    wrap.append(title, input, value);
    sliderBox.append(wrap);
    sliders.push(input);
  });

  const onWeightsChanged = debounce(() => {
    void controller.setWeights(readWeights(sliders));
  }, DEBOUNCE_MS);

  for (const radio of document.querySelectorAll<HTMLInputElement>(
    "input[name=mode]",
  )) {
    radio.addEventListener("change", () => {
      if (radio.checked) {
        void controller.setMode(radio.value as Mode).then(() => {
          if (controller.current.sweep) void controller.refreshSweep();
        });
      }
    });
  }

  byId<HTMLInputElement>("timings-file").addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    void file.text().then((text) => controller.loadTimingsFile(file.name, text));
    input.value = "";
  });

  byId<HTMLButtonElement>("sweep-button").addEventListener("click", () => {
    void controller.refreshSweep();
  });

  void controller.setWeights(readWeights(sliders));
}

document.addEventListener("DOMContentLoaded", start);
