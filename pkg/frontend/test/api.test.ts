import { describe, expect, it, vi } from "vitest";

import { ApiError, createClient } from "../src/api.js";
import { jsonResponse } from "./helpers.js";

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

function stub(status: number, body: unknown) {
  return vi.fn<FetchLike>(async () => jsonResponse(status, body));
}

describe("createClient", () => {
  it("strips trailing slashes from the base url", async () => {
    const f = stub(200, { status: "ok" });
    await createClient("http://h:1//", f).health();
    expect(f.mock.calls[0][0]).toBe("http://h:1/health");
  });

  it("builds the motif routes", async () => {
    const f = stub(200, {});
    const client = createClient("http://h", f);
    await client.roots();
    await client.motif("0.1.0.42-1.2.0.7");
    await client.children("abc");
    await client.occurrences("abc");
    expect(f.mock.calls.map((c) => c[0])).toEqual([
      "http://h/motifs/roots",
      "http://h/motifs/0.1.0.42-1.2.0.7",
      "http://h/motifs/abc/children",
      "http://h/motifs/abc/occurrences",
    ]);
  });

  it("percent-encodes path segments", async () => {
    const f = stub(200, {});
    await createClient("http://h", f).trace("t/1 x");
    expect(f.mock.calls[0][0]).toBe("http://h/traces/t%2F1%20x");
  });

  it("passes highlight as a query parameter", async () => {
    const f = stub(200, {});
    const client = createClient("http://h", f);
    await client.trace("t1");
    await client.trace("t1", "0.1.0.5");
    expect(f.mock.calls[0][0]).toBe("http://h/traces/t1");
    expect(f.mock.calls[1][0]).toBe("http://h/traces/t1?highlight=0.1.0.5");
  });

  it("POSTs diff with a JSON alpha body", async () => {
    const f = stub(200, { format: "tracemotif.diff/1" });
    await createClient("http://h", f).diff(0.01);
    const [url, init] = f.mock.calls[0];
    expect(url).toBe("http://h/diff");
    expect(init?.method).toBe("POST");
    expect(init?.headers).toEqual({ "content-type": "application/json" });
    expect(JSON.parse(init?.body as string)).toEqual({ alpha: 0.01 });
  });

  it("returns the parsed document on success", async () => {
    const doc = { roots: [] };
    const client = createClient("http://h", stub(200, doc));
    await expect(client.roots()).resolves.toEqual(doc);
  });

  it("surfaces the server's detail message on errors", async () => {
    const client = createClient("http://h", stub(404, { detail: "unknown pattern code" }));
    const err = await client.motif("nope").catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).detail).toBe("unknown pattern code");
    expect((err as ApiError).message).toContain("unknown pattern code");
  });

  it("falls back to the status text for non-JSON error bodies", async () => {
    const f = vi.fn<FetchLike>(
      async () =>
        new Response("boom", { status: 500, statusText: "Internal Server Error" }),
    );
    const err = await createClient("http://h", f)
      .anomalies()
      .catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(500);
    expect((err as ApiError).detail).toBe("Internal Server Error");
  });
});
