/** Typed client for the vmrank JSON API. The UI computes nothing itself:
 *  every displayed number originates from one of these responses. */

export type Mode = "sequential" | "parallel";

export const GROUPS = [
  "memory_process",
  "local_communication",
  "computation",
  "storage",
] as const;

export type GroupName = (typeof GROUPS)[number];

export const GROUP_LABELS: Record<GroupName, string> = {
  memory_process: "Memory & process",
  local_communication: "Local communication",
  computation: "Computation",
  storage: "Storage",
};

export interface VmDescriptor {
  id: string;
  vcpus: number;
  memory_gib: number;
  processor: string;
  clock_ghz: number;
}

export interface RankEntry {
  vm: string;
  score: number;
  rank: number;
  contributions: Record<string, number>;
}

export interface RankResponse {
  kind: string;
  mode: Mode;
  weights: number[];
  entries: RankEntry[];
}

export interface SweepVm {
  vm: string;
  rank_counts: Record<string, number>;
  top_k_count: number;
  top_k_frequency: number;
}

export interface SweepResponse {
  total_vectors: number;
  k: number;
  mode: Mode;
  per_vm: SweepVm[];
}

export interface TableEntry {
  vm: string;
  score: number | null;
  rank: number;
}

export interface DivergenceFlag {
  vm: string;
  rank_a: number;
  rank_b: number;
  delta: number;
  suspect_groups: string[];
}

export interface ValidateResponse {
  method: string;
  coefficient: number;
  per_vm_delta: Record<string, number>;
  top_k_overlap: number;
  k: number;
  benchmark: { kind: string; entries: TableEntry[] };
  empirical: { kind: string; entries: TableEntry[] };
  divergence: DivergenceFlag[];
}

export interface TimingPayload {
  vm: string;
  seconds: number;
}

async function parseError(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: unknown };
    const detail = body.detail;
    if (typeof detail === "string") return detail;
    if (detail && typeof detail === "object") {
      const d = detail as { field?: string; message?: string };
      if (d.message) return d.field ? `${d.field}: ${d.message}` : d.message;
      return JSON.stringify(detail);
    }
  } catch {
    /* non-JSON error body */
  }
  return `HTTP ${res.status}`;
}

/** What the controller needs from the service; ApiClient is the real one. */
export interface RankingService {
  getVms(): Promise<VmDescriptor[]>;
  rank(weights: number[], mode: Mode): Promise<RankResponse>;
  sweep(k: number, mode: Mode): Promise<SweepResponse>;
  validate(
    weights: number[],
    mode: Mode,
    timings: TimingPayload[],
  ): Promise<ValidateResponse>;
}

export class ApiClient implements RankingService {
  constructor(private readonly base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init);
    if (!res.ok) throw new Error(await parseError(res));
    return (await res.json()) as T;
  }

  getVms(): Promise<VmDescriptor[]> {
    return this.request<VmDescriptor[]>("/api/vms");
  }

  rank(weights: number[], mode: Mode): Promise<RankResponse> {
    return this.request<RankResponse>("/api/rank", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ weights, mode }),
    });
  }

  sweep(k: number, mode: Mode): Promise<SweepResponse> {
    return this.request<SweepResponse>(`/api/sweep?k=${k}&mode=${mode}`);
  }

  validate(
    weights: number[],
    mode: Mode,
    timings: TimingPayload[],
  ): Promise<ValidateResponse> {
    return this.request<ValidateResponse>("/api/validate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ weights, mode, timings }),
    });
  }
}
