import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  body: unknown;
}

/** Fetch stub that answers from a handler and records every call. */
function fakeFetch(handler: (url: string, init?: RequestInit) => { status: number; body: unknown }) {
  const calls: Recorded[] = [];
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    });
    const { status, body } = handler(url, init);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { impl, calls };
}

const GRAPH_PAGE = { nodes: [], edges: [], total_nodes: 0, total_edges: 0 };

describe("ApiClient", () => {
  it("builds URLs from the base and returns parsed JSON", async () => {
    const { impl, calls } = fakeFetch(() => ({ status: 200, body: GRAPH_PAGE }));
    const client = new ApiClient("http://example.test/", impl);
    const page = await client.graph(10, 5);
    expect(page).toEqual(GRAPH_PAGE);
    expect(calls[0].url).toBe("http://example.test/api/graph?limit=10&offset=5");
  });

  it("shares one in-flight request between concurrent GETs to the same endpoint", async () => {
    let release: (() => void) | null = null;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const calls: string[] = [];
    const impl = async (url: string): Promise<Response> => {
      calls.push(url);
      await gate;
      return new Response(JSON.stringify(GRAPH_PAGE), { status: 200 });
    };
    const client = new ApiClient("http://x", impl);
    const first = client.graph();
    const second = client.graph();
    release!();
    const [a, b] = await Promise.all([first, second]);
    expect(calls.length).toBe(1);
    expect(a).toEqual(b);
  });

  it("does not de-duplicate once the first request settled", async () => {
    const { impl, calls } = fakeFetch(() => ({ status: 200, body: GRAPH_PAGE }));
    const client = new ApiClient("http://x", impl);
    await client.graph();
    await client.graph();
    expect(calls.length).toBe(2);
  });

  it("keeps GETs to different endpoints separate", async () => {
    const { impl, calls } = fakeFetch((url) =>
      url.includes("/api/trace/")
        ? { status: 200, body: { trace_id: "t1", entries: [] } }
        : { status: 200, body: GRAPH_PAGE },
    );
    const client = new ApiClient("http://x", impl);
    await Promise.all([client.graph(), client.trace("t1")]);
    expect(calls.length).toBe(2);
  });

  it("never de-duplicates POSTs", async () => {
    const { impl, calls } = fakeFetch(() => ({
      status: 200,
      body: { session_id: "s", answer: "a", task_type: "FREE_FORM", trace_id: "t" },
    }));
    const client = new ApiClient("http://x", impl);
    await Promise.all([client.chat("one"), client.chat("two")]);
    expect(calls.length).toBe(2);
  });

  it("sends the session id only when present", async () => {
    const { impl, calls } = fakeFetch(() => ({
      status: 200,
      body: { session_id: "s", answer: "a", task_type: "FREE_FORM", trace_id: "t" },
    }));
    const client = new ApiClient("http://x", impl);
    await client.chat("hello");
    await client.chat("again", "s");
    expect(calls[0].body).toEqual({ message: "hello" });
    expect(calls[1].body).toEqual({ message: "again", session_id: "s" });
  });

  it("shapes mutation requests the way the server expects", async () => {
    const { impl, calls } = fakeFetch(() => ({
      status: 200,
      body: { id: "n1", created: true, summary: {}, trace_id: "t" },
    }));
    const client = new ApiClient("http://x", impl);
    await client.createNode("Graph Theory", "Concept");
    await client.createEdge("n1", "RELATED_TO", "n2");
    await client.deleteNode("n1");
    await client.deleteEdge("e9");
    expect(calls[0]).toMatchObject({
      method: "POST",
      url: "http://x/api/graph/nodes",
      body: { name: "Graph Theory", label: "Concept" },
    });
    expect(calls[1]).toMatchObject({
      method: "POST",
      url: "http://x/api/graph/edges",
      body: { source: "n1", relation: "RELATED_TO", target: "n2" },
    });
    expect(calls[2]).toMatchObject({ method: "DELETE", url: "http://x/api/graph/nodes/n1" });
    expect(calls[3]).toMatchObject({ method: "DELETE", url: "http://x/api/graph/edges/e9" });
  });

  it("turns error envelopes into ApiError with code and status", async () => {
    const { impl } = fakeFetch(() => ({
      status: 409,
      body: { code: "forbidden_self_loop", message: "self loops are not allowed" },
    }));
    const client = new ApiClient("http://x", impl);
    const error = await client.createEdge("n1", "RELATED_TO", "n1").catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(409);
    expect(error.code).toBe("forbidden_self_loop");
    expect(error.message).toContain("self loops");
  });

  it("falls back to a generic code when the error body is not an envelope", async () => {
    const impl = async (): Promise<Response> => new Response("boom", { status: 502 });
    const client = new ApiClient("http://x", impl);
    const error = await client.graph().catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.code).toBe("http_502");
  });

  it("wraps transport failures as network_error with status 0", async () => {
    const impl = async (): Promise<Response> => {
      throw new TypeError("fetch failed");
    };
    const client = new ApiClient("http://x", impl);
    const error = await client.graph().catch((e) => e);
    expect(error).toBeInstanceOf(ApiError);
    expect(error.status).toBe(0);
    expect(error.code).toBe("network_error");
  });

  it("clears the in-flight slot after a failure so retries hit the server", async () => {
    let attempts = 0;
    const impl = async (): Promise<Response> => {
      attempts += 1;
      if (attempts === 1) {
        throw new TypeError("fetch failed");
      }
      return new Response(JSON.stringify(GRAPH_PAGE), { status: 200 });
    };
    const client = new ApiClient("http://x", impl);
    await expect(client.graph()).rejects.toBeInstanceOf(ApiError);
    await expect(client.graph()).resolves.toEqual(GRAPH_PAGE);
    expect(attempts).toBe(2);
  });
});
