/** Wire types for the graphtalk HTTP API. */

export interface NodeOut {
  id: string;
  name: string;
  label: string;
  properties: Record<string, unknown>;
}

export interface EdgeOut {
  id: string;
  source: string;
  relation: string;
  target: string;
  properties: Record<string, unknown>;
}

export interface GraphPage {
  nodes: NodeOut[];
  edges: EdgeOut[];
  total_nodes: number;
  total_edges: number;
}

export interface MutationCounts {
  nodes_created: number;
  edges_created: number;
  nodes_deleted: number;
  edges_deleted: number;
}

export interface UpsertResponse {
  id: string;
  created: boolean;
  summary: MutationCounts;
  trace_id: string;
}

export interface DeleteResponse {
  id: string;
  summary: MutationCounts;
  trace_id: string;
}

export interface NeighborItem {
  edge: EdgeOut;
  node: NodeOut;
}

export interface NeighborsResponse {
  node: NodeOut;
  neighbors: NeighborItem[];
}

export interface ChatResponse {
  session_id: string;
  answer: string;
  task_type: string;
  trace_id: string;
}

export interface TraceEntryOut {
  stage: string;
  prompt: string;
  output: string;
  artifact: TaskArtifact | Record<string, unknown> | null;
  duration_ms: number;
}

export interface TraceOut {
  trace_id: string;
  query: string;
  task_type: string;
  answer: string;
  created_at: string;
  entries: TraceEntryOut[];
  warnings: string[];
  failed_step: { step_id: string; code: string; message: string } | null;
}

/** Kernel artifacts the UI knows how to visualize. */
export interface TaskArtifact {
  kind: string;
  payload: Record<string, unknown>;
  provenance: string[];
  warnings: string[];
}

export interface PathPayload {
  start: string;
  goal: string;
  relation: string | null;
  found: boolean;
  path: string[];
}

export interface ClusterPayload {
  clusters: { label: string; members: string[]; size: number }[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details?: Record<string, unknown>;
}
