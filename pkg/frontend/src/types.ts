// Response document shapes of the motif service. Field names mirror the
// JSON exactly; everything the UI displays comes out of these objects.

export interface SummaryDoc {
  count: number;
  min: number;
  max: number;
  mean: number;
  p50: number;
  p95: number;
  p99: number;
}

export interface DistDoc {
  summary: SummaryDoc;
  truncated: boolean;
  samples?: number[];
}

/** Compact motif row as served by /motifs/roots and /motifs/{code}/children. */
export interface MotifSummary {
  code: string;
  sketch: string;
  num_edges: number;
  num_vertices: number;
  transaction_support: number;
  containing_traces: number;
  max_within_count: number;
  occurrence_count: number;
  exec_time: DistDoc;
  complete_fork_join: boolean;
  truncated: boolean;
}

export interface MotifDetail {
  code: string;
  sketch: string;
  vertices: { index: number; label: string }[];
  edges: [number, number][];
  support: {
    containing_traces: string[];
    transaction_support: number;
    max_within_count: number;
  };
  exec_time_dist: DistDoc;
  edge_lat_dists: DistDoc[];
  complete_fork_join: boolean;
  embedding_counts: [string, number][];
  truncated: boolean;
  children: string[];
}

export interface RootsDoc {
  roots: MotifSummary[];
}

export interface ChildrenDoc {
  code: string;
  children: MotifSummary[];
}

export interface OccurrencesDoc {
  code: string;
  occurrences: { trace_id: string; count: number; vertex_maps: number[][] }[];
}

export interface TracePointDoc {
  id: number;
  label: string;
  ts_us: number;
  kind: string;
  concurrent_branch?: boolean;
}

export interface TraceDoc {
  trace_id: string;
  points: TracePointDoc[];
  edges: { src: number; dst: number }[];
}

export interface TraceDetail {
  trace: TraceDoc;
  highlight?: {
    code: string;
    points: number[];
    edges: [number, number][];
    vertex_maps: number[][];
  };
}

export interface DiffChangedEntry {
  code: string;
  statistic: number;
  p_value: number;
  direction: "slower" | "faster";
  baseline: DistDoc;
  candidate: DistDoc;
}

export interface DiffDoc {
  format: string;
  alpha: number;
  added: string[];
  removed: string[];
  latency_changed: DiffChangedEntry[];
  unchanged: number;
  sketches: Record<string, string>;
}

export interface ViolatedRule {
  antecedent: string;
  consequent: string;
  kind: "implies" | "excludes";
  confidence: number;
}

export interface AnomalyTraceDoc {
  trace_id: string;
  score: number;
  violated: ViolatedRule[];
  motifs_present: string[];
}

export interface AnomaliesDoc {
  format: string;
  model: { vocabulary: string[]; rules: unknown[] };
  traces: AnomalyTraceDoc[];
}

export interface HealthDoc {
  status: string;
  motifs: number;
  traces: number;
  baseline: boolean;
  anomalies: boolean;
}
