/** Typed client for the graphtalk HTTP API with in-flight GET de-duplication. */

import {
  ApiErrorBody,
  ChatResponse,
  DeleteResponse,
  GraphPage,
  NeighborsResponse,
  TraceOut,
  UpsertResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Error raised for any non-2xx response or transport failure. */
export class ApiError extends Error {
  status: number;
  code: string;
  details: Record<string, unknown> | undefined;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.details = body.details;
  }
}

export class ApiClient {
  private base: string;
  private fetchImpl: FetchLike;
  // One in-flight promise per GET endpoint; concurrent callers share it.
  private inflight: Map<string, Promise<unknown>> = new Map();

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    const impl = fetchImpl ?? (globalThis.fetch as FetchLike | undefined);
    if (!impl) {
      throw new Error("no fetch implementation available");
    }
    // Bind so callers can hand us a bare window.fetch.
    this.fetchImpl = (url, init) => impl.call(globalThis, url, init);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const url = this.base + path;
    let response: Response;
    try {
      response = await this.fetchImpl(url, {
        method,
        headers: body === undefined ? undefined : { "Content-Type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (exc) {
      const reason = exc instanceof Error ? exc.message : String(exc);
      throw new ApiError(0, { code: "network_error", message: `cannot reach server: ${reason}` });
    }
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    if (!response.ok) {
      const shaped =
        payload && typeof payload === "object" && "code" in (payload as Record<string, unknown>)
          ? (payload as ApiErrorBody)
          : { code: `http_${response.status}`, message: `request failed with status ${response.status}` };
      throw new ApiError(response.status, shaped);
    }
    return payload as T;
  }

  /** GETs to the same path share one in-flight request. */
  private getDeduped<T>(path: string): Promise<T> {
    const existing = this.inflight.get(path);
    if (existing) {
      return existing as Promise<T>;
    }
    const pending = this.request<T>("GET", path).finally(() => {
      this.inflight.delete(path);
    });
    this.inflight.set(path, pending);
    return pending;
  }

  chat(message: string, sessionId?: string): Promise<ChatResponse> {
    const body: Record<string, unknown> = { message };
    if (sessionId) {
      body.session_id = sessionId;
    }
    return this.request<ChatResponse>("POST", "/api/chat", body);
  }

  graph(limit = 500, offset = 0): Promise<GraphPage> {
    return this.getDeduped<GraphPage>(`/api/graph?limit=${limit}&offset=${offset}`);
  }

  createNode(name: string, label = "Concept", properties?: Record<string, unknown>): Promise<UpsertResponse> {
    const body: Record<string, unknown> = { name, label };
    if (properties) {
      body.properties = properties;
    }
    return this.request<UpsertResponse>("POST", "/api/graph/nodes", body);
  }

  createEdge(
    source: string,
    relation: string,
    target: string,
    properties?: Record<string, unknown>,
  ): Promise<UpsertResponse> {
    const body: Record<string, unknown> = { source, relation, target };
    if (properties) {
      body.properties = properties;
    }
    return this.request<UpsertResponse>("POST", "/api/graph/edges", body);
  }

  deleteNode(nodeId: string): Promise<DeleteResponse> {
    return this.request<DeleteResponse>("DELETE", `/api/graph/nodes/${encodeURIComponent(nodeId)}`);
  }

  deleteEdge(edgeId: string): Promise<DeleteResponse> {
    return this.request<DeleteResponse>("DELETE", `/api/graph/edges/${encodeURIComponent(edgeId)}`);
  }

  neighbors(nodeId: string, direction = "both", relation?: string): Promise<NeighborsResponse> {
    let path = `/api/graph/neighbors/${encodeURIComponent(nodeId)}?direction=${direction}`;
    if (relation) {
      path += `&relation=${encodeURIComponent(relation)}`;
    }
    return this.getDeduped<NeighborsResponse>(path);
  }

  trace(traceId: string): Promise<TraceOut> {
    return this.getDeduped<TraceOut>(`/api/trace/${encodeURIComponent(traceId)}`);
  }
}
