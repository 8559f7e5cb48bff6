/** In-memory stand-in for the HTTP API, used by DOM tests. It exposes the
 * same method surface as ApiClient and a fetch adapter for full-app tests.
 * The smoke test runs against the real server and keeps this fake honest. */

import { ApiError, FetchLike } from "../src/api.js";
import {
  ChatResponse,
  DeleteResponse,
  EdgeOut,
  GraphPage,
  NeighborsResponse,
  NodeOut,
  TraceEntryOut,
  TraceOut,
  UpsertResponse,
} from "../src/types.js";

function norm(name: string): string {
  return name.toLowerCase().replace(/\s+/g, " ").trim();
}

export interface ChatScriptResult {
  answer: string;
  task_type: string;
  extraEntries?: TraceEntryOut[];
}

export type ChatScript = (message: string) => ChatScriptResult;

const DEFAULT_SCRIPT: ChatScript = () => ({
  answer: "Based on the graph evidence, here is the answer to your request.",
  task_type: "FREE_FORM",
});

export class FakeService {
  nodes: NodeOut[] = [];
  edges: EdgeOut[] = [];
  traces = new Map<string, TraceOut>();
  chatScript: ChatScript = DEFAULT_SCRIPT;
  sessions: string[] = [];
  lastChatSession: string | undefined;
  private nextNode = 1;
  private nextEdge = 1;
  private nextTrace = 1;
  private graphHold: Promise<void> | null = null;

  seed(nodes: Array<[string, string]>, edges: Array<[string, string, string, string]>): void {
    for (const [id, name] of nodes) {
      this.nodes.push({ id, name, label: "Concept", properties: {} });
      this.nextNode += 1;
    }
    for (const [id, source, relation, target] of edges) {
      this.edges.push({ id, source, relation, target, properties: {} });
      this.nextEdge += 1;
    }
  }

  /** Returns a release function; the next graph() call waits on it. */
  holdNextGraph(): () => void {
    let release: () => void = () => undefined;
    this.graphHold = new Promise((resolve) => {
      release = () => {
        this.graphHold = null;
        resolve();
      };
    });
    return release;
  }

  async graph(_limit = 500, _offset = 0): Promise<GraphPage> {
    if (this.graphHold) {
      await this.graphHold;
    }
    return {
      nodes: [...this.nodes],
      edges: [...this.edges],
      total_nodes: this.nodes.length,
      total_edges: this.edges.length,
    };
  }

  async createNode(name: string, label = "Concept"): Promise<UpsertResponse> {
    if (!norm(name)) {
      throw new ApiError(400, { code: "empty_name", message: "node name must not be empty" });
    }
    const existing = this.nodes.find((n) => n.label === label && norm(n.name) === norm(name));
    if (existing) {
      return { id: existing.id, created: false, summary: this.summary(), trace_id: this.audit() };
    }
    const node: NodeOut = { id: `n${this.nextNode++}`, name: name.trim(), label, properties: {} };
    this.nodes.push(node);
    return {
      id: node.id,
      created: true,
      summary: this.summary({ nodes_created: 1 }),
      trace_id: this.audit(),
    };
  }

  async createEdge(source: string, relation: string, target: string): Promise<UpsertResponse> {
    const src = this.nodes.find((n) => n.id === source);
    const dst = this.nodes.find((n) => n.id === target);
    if (!src) {
      throw new ApiError(404, { code: "unknown_node", message: `unknown source node '${source}'` });
    }
    if (!dst) {
      throw new ApiError(404, { code: "unknown_node", message: `unknown target node '${target}'` });
    }
    if (source === target && relation !== "SAME_AS") {
      throw new ApiError(409, {
        code: "forbidden_self_loop",
        message: `self loop on ${source} is not allowed for ${relation}`,
      });
    }
    const existing = this.edges.find(
      (e) => e.source === source && e.relation === relation && e.target === target,
    );
    if (existing) {
      return { id: existing.id, created: false, summary: this.summary(), trace_id: this.audit() };
    }
    const edge: EdgeOut = { id: `e${this.nextEdge++}`, source, relation, target, properties: {} };
    this.edges.push(edge);
    return {
      id: edge.id,
      created: true,
      summary: this.summary({ edges_created: 1 }),
      trace_id: this.audit(),
    };
  }

  async deleteNode(nodeId: string): Promise<DeleteResponse> {
    const at = this.nodes.findIndex((n) => n.id === nodeId);
    if (at < 0) {
      throw new ApiError(404, { code: "unknown_node", message: `no node with id '${nodeId}'` });
    }
    this.nodes.splice(at, 1);
    const before = this.edges.length;
    this.edges = this.edges.filter((e) => e.source !== nodeId && e.target !== nodeId);
    return {
      id: nodeId,
      summary: this.summary({ nodes_deleted: 1, edges_deleted: before - this.edges.length }),
      trace_id: this.audit(),
    };
  }

  async deleteEdge(edgeId: string): Promise<DeleteResponse> {
    const at = this.edges.findIndex((e) => e.id === edgeId);
    if (at < 0) {
      throw new ApiError(404, { code: "unknown_edge", message: `no edge with id '${edgeId}'` });
    }
    this.edges.splice(at, 1);
    return { id: edgeId, summary: this.summary({ edges_deleted: 1 }), trace_id: this.audit() };
  }

  async neighbors(nodeId: string, _direction = "both"): Promise<NeighborsResponse> {
    const node = this.nodes.find((n) => n.id === nodeId);
    if (!node) {
      throw new ApiError(404, { code: "unknown_node", message: `no node with id '${nodeId}'` });
    }
    const items = [];
    for (const edge of this.edges) {
      if (edge.source === nodeId || edge.target === nodeId) {
        const otherId = edge.source === nodeId ? edge.target : edge.source;
        const other = this.nodes.find((n) => n.id === otherId);
        if (other) {
          items.push({ edge, node: other });
        }
      }
    }
    return { node, neighbors: items };
  }

  async chat(message: string, sessionId?: string): Promise<ChatResponse> {
    if (!message.trim()) {
      throw new ApiError(400, { code: "empty_query", message: "message must not be empty" });
    }
    this.lastChatSession = sessionId;
    const session = sessionId ?? `sess-${this.sessions.length + 1}`;
    if (!this.sessions.includes(session)) {
      this.sessions.push(session);
    }
    const scripted = this.chatScript(message);
    const traceId = `t${String(this.nextTrace).padStart(6, "0")}-fake0000`;
    this.nextTrace += 1;
    const entries: TraceEntryOut[] = [
      // Mirror the real pipeline: classify carries the kind with no payload.
      {
        stage: "classify",
        prompt: message,
        output: scripted.task_type,
        artifact: { kind: scripted.task_type, confidence_note: scripted.task_type },
        duration_ms: 1,
      },
      {
        stage: "extract",
        prompt: message,
        output: "NONE",
        artifact: { mentions: [], triples: [] },
        duration_ms: 1,
      },
      {
        stage: "plan",
        prompt: "",
        output: scripted.task_type.toLowerCase(),
        artifact: { steps: [] },
        duration_ms: 0,
      },
      ...(scripted.extraEntries ?? []),
    ];
    const trace: TraceOut = {
      trace_id: traceId,
      query: message,
      task_type: scripted.task_type,
      answer: scripted.answer,
      created_at: "2026-08-19T00:00:00Z",
      entries,
      warnings: [],
      failed_step: null,
    };
    this.traces.set(traceId, trace);
    return { session_id: session, answer: scripted.answer, task_type: scripted.task_type, trace_id: traceId };
  }

  async trace(traceId: string): Promise<TraceOut> {
    const stored = this.traces.get(traceId);
    if (!stored) {
      throw new ApiError(404, { code: "unknown_trace", message: `no trace with id '${traceId}'` });
    }
    return stored;
  }

  private summary(overrides: Partial<Record<string, number>> = {}) {
    return {
      nodes_created: 0,
      edges_created: 0,
      nodes_deleted: 0,
      edges_deleted: 0,
      ...overrides,
    };
  }

  private audit(): string {
    const traceId = `t${String(this.nextTrace).padStart(6, "0")}-audit000`;
    this.nextTrace += 1;
    return traceId;
  }
}

/** Route fetch calls to a FakeService, shaping errors like the real server. */
export function fakeFetchFor(service: FakeService): { impl: FetchLike; log: string[] } {
  const log: string[] = [];
  const impl: FetchLike = async (url, init) => {
    const method = init?.method ?? "GET";
    const parsed = new URL(url);
    const path = parsed.pathname;
    log.push(`${method} ${path}`);
    const body = init?.body ? JSON.parse(init.body as string) : {};
    try {
      let payload: unknown;
      if (method === "POST" && path === "/api/chat") {
        payload = await service.chat(body.message, body.session_id);
      } else if (method === "GET" && path === "/api/graph") {
        payload = await service.graph(
          Number(parsed.searchParams.get("limit") ?? 500),
          Number(parsed.searchParams.get("offset") ?? 0),
        );
      } else if (method === "POST" && path === "/api/graph/nodes") {
        payload = await service.createNode(body.name, body.label);
      } else if (method === "POST" && path === "/api/graph/edges") {
        payload = await service.createEdge(body.source, body.relation, body.target);
      } else if (method === "DELETE" && path.startsWith("/api/graph/nodes/")) {
        payload = await service.deleteNode(decodeURIComponent(path.split("/").pop() as string));
      } else if (method === "DELETE" && path.startsWith("/api/graph/edges/")) {
        payload = await service.deleteEdge(decodeURIComponent(path.split("/").pop() as string));
      } else if (method === "GET" && path.startsWith("/api/graph/neighbors/")) {
        payload = await service.neighbors(decodeURIComponent(path.split("/").pop() as string));
      } else if (method === "GET" && path.startsWith("/api/trace/")) {
        payload = await service.trace(decodeURIComponent(path.split("/").pop() as string));
      } else {
        return new Response(JSON.stringify({ code: "http_404", message: "Not Found" }), {
          status: 404,
        });
      }
      return new Response(JSON.stringify(payload), { status: 200 });
    } catch (exc) {
      if (exc instanceof ApiError) {
        return new Response(JSON.stringify({ code: exc.code, message: exc.message }), {
          status: exc.status,
        });
      }
      throw exc;
    }
  };
  return { impl, log };
}

/** Four concepts in a chain plus one isolated node. */
export function seedSmallGraph(service: FakeService): void {
  service.seed(
    [
      ["n1", "Algebra"],
      ["n2", "Calculus"],
      ["n3", "Analysis"],
      ["n4", "Topology"],
    ],
    [
      ["e1", "n1", "PREREQUISITE_OF", "n2"],
      ["e2", "n2", "PREREQUISITE_OF", "n3"],
    ],
  );
}
