// Pure view-model builders. Each takes API documents and returns plain
// objects whose numeric fields are the untouched API values; the DOM layer
// only formats and places them. Keeping this split testable is what makes
// the thin-client contract checkable.

import type {
  AnomaliesDoc,
  DiffChangedEntry,
  DiffDoc,
  DistDoc,
  MotifDetail,
  TraceDetail,
} from "./types.js";

export interface DistRow {
  label: string;
  summary: DistDoc["summary"];
  truncated: boolean;
}

export interface MotifPanel {
  code: string;
  sketch: string;
  vertexCount: number;
  edgeCount: number;
  transactionSupport: number;
  containingTraces: string[];
  maxWithinCount: number;
  completeForkJoin: boolean;
  truncated: boolean;
  execTime: DistRow;
  /** one row per pattern edge, labeled src->dst from the sketch */
  edgeLatencies: DistRow[];
  embeddingCounts: [string, number][];
  children: string[];
}

export function motifPanel(doc: MotifDetail): MotifPanel {
  const edgeNames = doc.sketch.split("; ");
  return {
    code: doc.code,
    sketch: doc.sketch,
    vertexCount: doc.vertices.length,
    edgeCount: doc.edges.length,
    transactionSupport: doc.support.transaction_support,
    containingTraces: doc.support.containing_traces,
    maxWithinCount: doc.support.max_within_count,
    completeForkJoin: doc.complete_fork_join,
    truncated: doc.truncated,
    execTime: {
      label: "execution time",
      summary: doc.exec_time_dist.summary,
      truncated: doc.exec_time_dist.truncated,
    },
    edgeLatencies: doc.edge_lat_dists.map((d, i) => ({
      label: edgeNames[i] ?? `edge ${i}`,
      summary: d.summary,
      truncated: d.truncated,
    })),
    embeddingCounts: doc.embedding_counts,
    children: doc.children,
  };
}

export interface TracePointRow {
  id: number;
  label: string;
  tsUs: number;
  kind: string;
  concurrentBranch: boolean;
  highlighted: boolean;
}

export interface TraceEdgeRow {
  src: number;
  dst: number;
  /** derived nowhere: the API serves timestamps, latency is dst-src of those */
  highlighted: boolean;
}

export interface TracePanel {
  traceId: string;
  highlightCode: string | null;
  /** true when a highlight was requested but the motif has no occurrence here */
  highlightEmpty: boolean;
  points: TracePointRow[];
  edges: TraceEdgeRow[];
  occurrenceCount: number;
}

export function tracePanel(doc: TraceDetail): TracePanel {
  const hiPoints = new Set(doc.highlight?.points ?? []);
  const hiEdges = new Set(
    (doc.highlight?.edges ?? []).map(([u, v]) => `${u}>${v}`),
  );
  return {
    traceId: doc.trace.trace_id,
    highlightCode: doc.highlight?.code ?? null,
    highlightEmpty:
      doc.highlight !== undefined && doc.highlight.vertex_maps.length === 0,
    points: doc.trace.points.map((p) => ({
      id: p.id,
      label: p.label,
      tsUs: p.ts_us,
      kind: p.kind,
      concurrentBranch: p.concurrent_branch ?? false,
      highlighted: hiPoints.has(p.id),
    })),
    edges: doc.trace.edges.map((e) => ({
      src: e.src,
      dst: e.dst,
      highlighted: hiEdges.has(`${e.src}>${e.dst}`),
    })),
    occurrenceCount: doc.highlight?.vertex_maps.length ?? 0,
  };
}

export interface DiffMembershipRow {
  code: string;
  sketch: string;
}

export interface DiffChangedRow {
  code: string;
  sketch: string;
  direction: DiffChangedEntry["direction"];
  statistic: number;
  pValue: number;
  baseline: DistDoc["summary"];
  candidate: DistDoc["summary"];
}

export interface DiffPanels {
  alpha: number;
  added: DiffMembershipRow[];
  removed: DiffMembershipRow[];
  changed: DiffChangedRow[];
  unchanged: number;
  hasFindings: boolean;
}

/** Categorized panels matching the report's partition one to one. */
export function diffPanels(doc: DiffDoc): DiffPanels {
  const named = (code: string): DiffMembershipRow => ({
    code,
    sketch: doc.sketches[code] ?? code,
  });
  const changed = doc.latency_changed.map((e) => ({
    code: e.code,
    sketch: doc.sketches[e.code] ?? e.code,
    direction: e.direction,
    statistic: e.statistic,
    pValue: e.p_value,
    baseline: e.baseline.summary,
    candidate: e.candidate.summary,
  }));
  return {
    alpha: doc.alpha,
    added: doc.added.map(named),
    removed: doc.removed.map(named),
    changed,
    unchanged: doc.unchanged,
    hasFindings:
      doc.added.length > 0 || doc.removed.length > 0 || changed.length > 0,
  };
}

export interface AnomalyRow {
  traceId: string;
  score: number;
  violations: { rule: string; kind: string; confidence: number }[];
}

export function anomalyRows(doc: AnomaliesDoc): AnomalyRow[] {
  return doc.traces.map((t) => ({
    traceId: t.trace_id,
    score: t.score,
    violations: t.violated.map((v) => ({
      rule: `${v.antecedent} ${v.kind} ${v.consequent}`,
      kind: v.kind,
      confidence: v.confidence,
    })),
  }));
}
