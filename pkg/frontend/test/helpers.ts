import type {
  DistDoc,
  MotifDetail,
  MotifSummary,
  SummaryDoc,
} from "../src/types.js";

let counter = 0;

export function dist(values: Partial<SummaryDoc> = {}): DistDoc {
  counter += 1;
  const base: SummaryDoc = {
    count: 10 + counter,
    min: 100 + counter,
    max: 9000 + counter,
    mean: 2345.5 + counter,
    p50: 2000 + counter,
    p95: 8000 + counter,
    p99: 8800 + counter,
  };
  return { summary: { ...base, ...values }, truncated: false };
}

export function summary(
  code: string,
  over: Partial<MotifSummary> = {},
): MotifSummary {
  return {
    code,
    sketch: `S(${code})`,
    num_edges: 2,
    num_vertices: 3,
    transaction_support: 0.75,
    containing_traces: 30,
    max_within_count: 1,
    occurrence_count: 42,
    exec_time: dist(),
    complete_fork_join: false,
    truncated: false,
    ...over,
  };
}

export function detail(
  code: string,
  over: Partial<MotifDetail> = {},
): MotifDetail {
  return {
    code,
    sketch: "A->B; B->C",
    vertices: [
      { index: 0, label: "A" },
      { index: 1, label: "B" },
      { index: 2, label: "C" },
    ],
    edges: [
      [0, 1],
      [1, 2],
    ],
    support: {
      containing_traces: ["T1", "T2"],
      transaction_support: 2 / 3,
      max_within_count: 1,
    },
    exec_time_dist: { ...dist(), samples: [20, 30] },
    edge_lat_dists: [dist(), dist()],
    complete_fork_join: false,
    embedding_counts: [
      ["T1", 1],
      ["T2", 1],
    ],
    truncated: false,
    children: [],
    ...over,
  };
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
