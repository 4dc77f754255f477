/** Orchestrates the explorer: holds the current state, talks to the
 *  service, and pushes immutable snapshots to the render callback. All
 *  numbers in the state come from service responses. */

import type {
  Mode,
  RankingService,
  RankResponse,
  SweepResponse,
  ValidateResponse,
} from "./api.js";
import {
  LatestRequestGate,
  type TimingRow,
  type Weights,
  allZero,
  clampWeight,
  parseTimings,
  rankMovements,
} from "./state.js";

export interface ExplorerState {
  weights: Weights;
  mode: Mode;
  rankingDisabled: boolean;
  ranking: RankResponse | null;
  movements: Record<string, number>;
  report: ValidateResponse | null;
  sweep: SweepResponse | null;
  loadedTimings: TimingRow[] | null;
  timingsFileName: string | null;
  error: string | null;
}

const DISABLED_REASON =
  "All four weights are zero; set at least one weight above 0 to rank.";

export class ExplorerController {
  private state: ExplorerState = {
    weights: [5, 3, 5, 0],
    mode: "sequential",
    rankingDisabled: false,
    ranking: null,
    movements: {},
    report: null,
    sweep: null,
    loadedTimings: null,
    timingsFileName: null,
    error: null,
  };

  private readonly rankGate = new LatestRequestGate();
  private readonly validateGate = new LatestRequestGate();
  private readonly sweepGate = new LatestRequestGate();

  constructor(
    private readonly api: RankingService,
    private readonly render: (state: ExplorerState) => void,
  ) {}

  get current(): ExplorerState {
    return this.state;
  }

  get disabledReason(): string {
    return DISABLED_REASON;
  }

  private push(patch: Partial<ExplorerState>): void {
    this.state = { ...this.state, ...patch };
    this.render(this.state);
  }

  /** Slider/mode change: clamp, then re-rank unless all weights are zero.
   *  Out-of-order responses are discarded; on error the previous ranking
   *  is retained and the message surfaces inline. */
  async setWeights(raw: number[], mode?: Mode): Promise<void> {
    const weights = raw.map(clampWeight) as Weights;
    const nextMode = mode ?? this.state.mode;
    const modeChanged = nextMode !== this.state.mode;
    if (allZero(weights)) {
      this.push({
        weights,
        mode: nextMode,
        rankingDisabled: true,
        error: DISABLED_REASON,
      });
      return;
    }
    this.push({ weights, mode: nextMode, rankingDisabled: false, error: null });
    const token = this.rankGate.issue();
    try {
      const ranking = await this.api.rank(weights, nextMode);
      if (!this.rankGate.isCurrent(token)) return;
      const previous = this.state.ranking;
      const previousRanks =
        previous && !modeChanged
          ? Object.fromEntries(previous.entries.map((e) => [e.vm, e.rank]))
          : null;
      this.push({
        ranking,
        movements: rankMovements(previousRanks, ranking.entries),
        error: null,
      });
      if (this.state.loadedTimings) await this.revalidate();
    } catch (err) {
      if (!this.rankGate.isCurrent(token)) return;
      this.push({ error: errorText(err) });
    }
  }

  setMode(mode: Mode): Promise<void> {
    return this.setWeights([...this.state.weights], mode);
  }

  /** Timing file loaded: parse locally, then let the service do the math. */
  async loadTimingsFile(name: string, text: string): Promise<void> {
    let rows: TimingRow[];
    try {
      rows = parseTimings(text);
    } catch (err) {
      this.push({ error: `${name}: ${errorText(err)}` });
      return;
    }
    this.push({ loadedTimings: rows, timingsFileName: name, error: null });
    await this.revalidate();
  }

  private async revalidate(): Promise<void> {
    const { loadedTimings, weights, mode } = this.state;
    if (!loadedTimings || allZero(weights)) return;
    const relevant = loadedTimings
      .filter((r) => r.mode === mode)
      .map((r) => ({ vm: r.vm, seconds: r.seconds }));
    if (relevant.length === 0) {
      this.push({
        report: null,
        error: `the loaded timing file has no ${mode} records`,
      });
      return;
    }
    const token = this.validateGate.issue();
    try {
      const report = await this.api.validate(weights, mode, relevant);
      if (!this.validateGate.isCurrent(token)) return;
      this.push({ report, error: null });
    } catch (err) {
      if (!this.validateGate.isCurrent(token)) return;
      this.push({ report: null, error: errorText(err) });
    }
  }

  async refreshSweep(k = 3): Promise<void> {
    const token = this.sweepGate.issue();
    try {
      const sweep = await this.api.sweep(k, this.state.mode);
      if (!this.sweepGate.isCurrent(token)) return;
      this.push({ sweep });
    } catch (err) {
      if (!this.sweepGate.isCurrent(token)) return;
      this.push({ error: errorText(err) });
    }
  }
}

function errorText(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}
