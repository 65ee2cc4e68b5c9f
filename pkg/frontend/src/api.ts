/** Typed client for the resoscope JSON API.
 *
 * Snapshot requests carry a sequence token so late responses from an
 * abandoned marker position never overwrite newer state.
 */

export interface Meta {
  schema: string;
  name: string;
  nodes: number;
  events: number;
  max_time: number;
  labels: string[];
}

export interface Segment {
  label: string;
  count: number;
}

export interface LayoutBar {
  id: number;
  birth_index: number;
  death_index: number;
  birth: number;
  death: number;
  track: number;
  baseline: number;
  heights: number[];
  offsets: number[];
  segments: Segment[][];
  seam_breaks: number[];
}

export interface LayoutSpec {
  schema: string;
  method: string;
  resolution: number;
  ordering: string;
  snapshots: number;
  scale: number;
  filters: { min_nodes: number; min_duration: number };
  tracks: number;
  track_heights: number[];
  anchors: number[];
  bars: LayoutBar[];
}

export interface SnapshotNode {
  id: number;
  name: string;
  label: string;
  component: number;
}

export interface SnapshotPayload {
  schema: string;
  method: string;
  resolution: number;
  index: number;
  anchor: number;
  nodes: SnapshotNode[];
  edges: [number, number][];
}

export interface FlowSet {
  schema: string;
  mode: string;
  key: string;
  merges: { source: number; target: number; at_index: number }[];
  splits: { source: number; target: number; at_index: number }[];
  label_flows: {
    label: string;
    from_index: number;
    source: number;
    target: number;
    count: number;
  }[];
}

export interface SuggestionPeak {
  resolution: number;
  pair: [number, number];
  prominence: number;
  raw: number;
  normalized: number;
  classification: string;
}

export interface Suggestions {
  schema: string;
  method: string;
  metric: string;
  resolutions: number[];
  peaks: SuggestionPeak[];
}

export interface FeatureTable {
  schema: string;
  method: string;
  resolutions: number[];
  burstiness: (number | null)[];
  edge_lifetime: (number | null)[];
  stability: (number | null)[];
  fidelity: (number | null)[];
  total_persistence: (number | null)[];
  balance_resolution?: number;
}

export interface JobStatus {
  job: string;
  state: string;
  progress: number;
  error?: string;
}

type Pending = { status: string; job: string };

function isPending(x: unknown): x is Pending {
  return typeof x === "object" && x !== null && "job" in x && "status" in x;
}

export class ApiClient {
  base: string;
  method: string;
  snapshotFetches = 0;
  private snapshotToken = 0;

  constructor(base: string, method = "sliding") {
    this.base = base.replace(/\/$/, "");
    this.method = method;
  }

  private async get<T>(path: string, params: Record<string, unknown>): Promise<T> {
    const url = new URL(this.base + path);
    for (const [k, v] of Object.entries(params)) {
      if (v !== undefined && v !== null) url.searchParams.set(k, String(v));
    }
    const resp = await fetch(url.toString());
    if (!resp.ok) {
      const body = await resp.text();
      throw new Error(`${path} -> ${resp.status}: ${body}`);
    }
    return (await resp.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.get<Meta>("/api/meta", {});
  }

  async suggest(maxR?: number, pollMs = 150): Promise<Suggestions> {
    for (;;) {
      const out = await this.get<Suggestions | Pending>("/api/suggest", {
        method: this.method,
        max_r: maxR,
      });
      if (!isPending(out)) return out;
      for (;;) {
        const st = await this.get<JobStatus>("/api/status", { job: out.job });
        if (st.state === "failed") throw new Error(st.error ?? "suggestion job failed");
        if (st.state === "done") break;
        await new Promise((res) => setTimeout(res, pollMs));
      }
    }
  }

  layout(r: number, ordering: string, minNodes: number, minDuration: number): Promise<LayoutSpec> {
    return this.get<LayoutSpec>("/api/layout", {
      r,
      method: this.method,
      ordering,
      min_nodes: minNodes,
      min_duration: minDuration,
    });
  }

  /** Sequenced: resolves to null when a newer snapshot request exists. */
  async snapshot(r: number, t: number): Promise<SnapshotPayload | null> {
    const token = ++this.snapshotToken;
    this.snapshotFetches += 1;
    const payload = await this.get<SnapshotPayload>("/api/snapshot", {
      r,
      t,
      method: this.method,
    });
    return token === this.snapshotToken ? payload : null;
  }

  flows(r: number, mode: "component" | "label", key: string): Promise<FlowSet> {
    return this.get<FlowSet>("/api/flows", { r, method: this.method, mode, key });
  }

  features(rs: number[]): Promise<FeatureTable> {
    return this.get<FeatureTable>("/api/features", {
      rs: rs.join(","),
      method: this.method,
    });
  }
}
