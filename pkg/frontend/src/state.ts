/** Client-side view state: session, graph snapshot, selection, staleness. */

import { EdgeOut, GraphPage, NodeOut } from "./types.js";

/** Minimal storage contract so tests can inject a fake. */
export interface KeyValueStorage {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

const SESSION_KEY = "graphtalk.session";
const SEED_KEY = "graphtalk.seed";
const DEFAULT_SEED = 42;
const MAX_SELECTION = 3;

class MemoryStorage implements KeyValueStorage {
  private data = new Map<string, string>();
  getItem(key: string): string | null {
    return this.data.has(key) ? (this.data.get(key) as string) : null;
  }
  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }
}

export class AppState {
  private storage: KeyValueStorage;
  nodes: NodeOut[] = [];
  edges: EdgeOut[] = [];
  totalNodes = 0;
  totalEdges = 0;
  /** Ordered node ids picked on the canvas; order fills shortcut templates. */
  selection: string[] = [];

  // Sequence counters decide staleness: the snapshot is stale when a mutation
  // response landed after the snapshot's fetch was sent.
  private seq = 0;
  private lastFetchSentAt = 0;
  private lastMutationAt = 0;

  constructor(storage?: KeyValueStorage) {
    this.storage = storage ?? new MemoryStorage();
  }

  get sessionId(): string | null {
    return this.storage.getItem(SESSION_KEY);
  }

  set sessionId(value: string | null) {
    if (value) {
      this.storage.setItem(SESSION_KEY, value);
    }
  }

  get layoutSeed(): number {
    const raw = this.storage.getItem(SEED_KEY);
    if (raw !== null) {
      const parsed = Number(raw);
      if (Number.isFinite(parsed)) {
        return parsed;
      }
    }
    return DEFAULT_SEED;
  }

  set layoutSeed(value: number) {
    this.storage.setItem(SEED_KEY, String(value));
  }

  /** Call when a graph fetch is sent; returns a token for markFetched. */
  beginFetch(): number {
    this.seq += 1;
    return this.seq;
  }

  /** Install a fetched snapshot; `sentAt` is the beginFetch token. */
  applySnapshot(page: GraphPage, sentAt: number): void {
    this.nodes = page.nodes;
    this.edges = page.edges;
    this.totalNodes = page.total_nodes;
    this.totalEdges = page.total_edges;
    if (sentAt > this.lastFetchSentAt) {
      this.lastFetchSentAt = sentAt;
    }
    // Drop selected ids that no longer exist.
    const ids = new Set(page.nodes.map((n) => n.id));
    this.selection = this.selection.filter((id) => ids.has(id));
  }

  /** Call when a mutation response arrives. */
  markMutated(): void {
    this.seq += 1;
    this.lastMutationAt = this.seq;
  }

  get stale(): boolean {
    return this.lastMutationAt > this.lastFetchSentAt;
  }

  /** Merge neighbor-expansion results into the snapshot without a full refetch. */
  mergeExpansion(nodes: NodeOut[], edges: EdgeOut[]): void {
    const nodeIds = new Set(this.nodes.map((n) => n.id));
    for (const node of nodes) {
      if (!nodeIds.has(node.id)) {
        this.nodes.push(node);
        nodeIds.add(node.id);
      }
    }
    const edgeIds = new Set(this.edges.map((e) => e.id));
    for (const edge of edges) {
      if (!edgeIds.has(edge.id)) {
        this.edges.push(edge);
        edgeIds.add(edge.id);
      }
    }
  }

  toggleSelected(nodeId: string): void {
    const at = this.selection.indexOf(nodeId);
    if (at >= 0) {
      this.selection.splice(at, 1);
      return;
    }
    this.selection.push(nodeId);
    if (this.selection.length > MAX_SELECTION) {
      this.selection.shift();
    }
  }

  nodeById(id: string): NodeOut | undefined {
    return this.nodes.find((n) => n.id === id);
  }

  nodeByName(name: string): NodeOut | undefined {
    const wanted = normalizeName(name);
    return this.nodes.find((n) => normalizeName(n.name) === wanted);
  }
}

/** Mirror of the server's name normalization: lowercase, collapsed whitespace. */
export function normalizeName(name: string): string {
  return name.toLowerCase().replace(/\s+/g, " ").trim();
}
