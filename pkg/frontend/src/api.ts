import type {
  AnomaliesDoc,
  ChildrenDoc,
  DiffDoc,
  HealthDoc,
  MotifDetail,
  OccurrencesDoc,
  RootsDoc,
  TraceDetail,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function requestJson<T>(
  fetchFn: FetchLike,
  url: string,
  init?: RequestInit,
): Promise<T> {
  const res = await fetchFn(url, init);
  if (!res.ok) {
    let detail = res.statusText;
    try {
      const body = (await res.json()) as { detail?: string };
      if (typeof body.detail === "string") detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(res.status, detail);
  }
  return (await res.json()) as T;
}

/**
 * Thin typed client for the motif service. `fetchFn` is injectable so tests
 * run against canned responses without a network.
 */
export function createClient(baseUrl: string, fetchFn?: FetchLike) {
  const base = baseUrl.replace(/\/+$/, "");
  const f: FetchLike = fetchFn ?? ((url, init) => fetch(url, init));

  return {
    health: () => requestJson<HealthDoc>(f, `${base}/health`),

    roots: () => requestJson<RootsDoc>(f, `${base}/motifs/roots`),

    motif: (code: string) =>
      requestJson<MotifDetail>(f, `${base}/motifs/${encodeURIComponent(code)}`),

    children: (code: string) =>
      requestJson<ChildrenDoc>(
        f,
        `${base}/motifs/${encodeURIComponent(code)}/children`,
      ),

    occurrences: (code: string) =>
      requestJson<OccurrencesDoc>(
        f,
        `${base}/motifs/${encodeURIComponent(code)}/occurrences`,
      ),

    trace: (traceId: string, highlight?: string) => {
      let url = `${base}/traces/${encodeURIComponent(traceId)}`;
      if (highlight !== undefined) {
        url += `?highlight=${encodeURIComponent(highlight)}`;
      }
      return requestJson<TraceDetail>(f, url);
    },

    diff: (alpha: number) =>
      requestJson<DiffDoc>(f, `${base}/diff`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ alpha }),
      }),

    anomalies: () => requestJson<AnomaliesDoc>(f, `${base}/anomalies`),
  };
}

export type Client = ReturnType<typeof createClient>;
