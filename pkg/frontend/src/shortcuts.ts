/** Task shortcut buttons: template a chat message from selected nodes, then
 * visualize the kernel artifact from the resulting trace. */

import { ApiClient } from "./api.js";
import { ChatPanel } from "./chat.js";
import { GraphExplorer } from "./explorer.js";
import { AppState } from "./state.js";
import { ClusterPayload, PathPayload, TaskArtifact, TraceOut } from "./types.js";

export interface TaskShortcut {
  kind: string;
  label: string;
  needs: number;
  template: (names: string[]) => string;
}

export const TASKS: TaskShortcut[] = [
  {
    kind: "RELATION_JUDGMENT",
    label: "Relation judgment",
    needs: 2,
    template: ([a, b]) => `Is ${a} a prerequisite of ${b}?`,
  },
  {
    kind: "PREREQUISITE_PREDICTION",
    label: "Prerequisites",
    needs: 1,
    template: ([a]) => `What should I learn before ${a}?`,
  },
  {
    kind: "PATH_SEARCHING",
    label: "Path search",
    needs: 2,
    template: ([a, b]) => `Show a path from ${a} to ${b}.`,
  },
  {
    kind: "SUBGRAPH_COMPLETION",
    label: "Missing links",
    needs: 2,
    template: ([a, b]) => `What connections are missing between ${a} and ${b}?`,
  },
  {
    kind: "IDEA_HAMSTER",
    label: "Ideas",
    needs: 1,
    template: ([a]) => `Give me ideas around ${a}.`,
  },
  {
    kind: "CONCEPT_CLUSTERING",
    label: "Clusters",
    needs: 0,
    template: () => "Group all the concepts into clusters.",
  },
];

export class TaskShortcuts {
  private state: AppState;
  private chat: ChatPanel;
  private explorer: GraphExplorer;
  private client: ApiClient;
  private buttons: Map<string, { button: HTMLButtonElement; hint: HTMLElement }> = new Map();
  private track: <T>(op: Promise<T>) => Promise<T>;

  constructor(
    root: HTMLElement,
    client: ApiClient,
    state: AppState,
    chat: ChatPanel,
    explorer: GraphExplorer,
    track?: <T>(op: Promise<T>) => Promise<T>,
  ) {
    this.state = state;
    this.chat = chat;
    this.explorer = explorer;
    this.client = client;
    this.track = track ?? ((op) => op);
    const doc = root.ownerDocument;
    root.classList.add("task-shortcuts");

    for (const task of TASKS) {
      const wrap = doc.createElement("span");
      wrap.className = "shortcut";
      const button = doc.createElement("button");
      button.type = "button";
      button.className = "shortcut-button";
      button.setAttribute("data-task", task.kind);
      button.textContent = task.label;
      button.addEventListener("click", () => {
        void this.track(this.dispatch(task));
      });
      const hint = doc.createElement("span");
      hint.className = "shortcut-hint";
      wrap.append(button, hint);
      root.appendChild(wrap);
      this.buttons.set(task.kind, { button, hint });
    }
    this.update();
  }

  /** Refresh enabled state and hints from the current selection. */
  update(): void {
    const selected = this.state.selection.length;
    for (const task of TASKS) {
      const entry = this.buttons.get(task.kind);
      if (!entry) {
        continue;
      }
      const ready = selected >= task.needs;
      entry.button.disabled = !ready;
      entry.hint.textContent = ready
        ? ""
        : `select ${task.needs} node${task.needs === 1 ? "" : "s"}`;
    }
  }

  private async dispatch(task: TaskShortcut): Promise<void> {
    const names: string[] = [];
    for (const id of this.state.selection.slice(0, task.needs)) {
      const node = this.state.nodeById(id);
      if (node) {
        names.push(node.name);
      }
    }
    if (names.length < task.needs) {
      return;
    }
    const response = await this.chat.send(task.template(names));
    if (!response) {
      return;
    }
    let trace: TraceOut;
    try {
      trace = await this.client.trace(response.trace_id);
    } catch {
      // The answer already rendered; a missing trace only skips the highlight.
      return;
    }
    this.applyArtifacts(trace);
  }

  /** Pull path and cluster artifacts out of a trace and show them on the canvas.
   * Stages other than the kernel step can carry artifacts with the same kind
   * but no payload (the plan record does), so the payload shape is checked. */
  applyArtifacts(trace: TraceOut): void {
    for (const entry of trace.entries) {
      const artifact = entry.artifact as TaskArtifact | null;
      if (!artifact || typeof artifact !== "object" || !("kind" in artifact)) {
        continue;
      }
      if (artifact.kind === "PATH_SEARCHING") {
        const payload = artifact.payload as unknown as PathPayload | undefined;
        if (payload && payload.found && Array.isArray(payload.path)) {
          this.explorer.highlightPath(payload.path);
        }
      } else if (artifact.kind === "CONCEPT_CLUSTERING") {
        const payload = artifact.payload as unknown as ClusterPayload | undefined;
        if (payload && Array.isArray(payload.clusters)) {
          this.explorer.tintClusters(payload.clusters);
        }
      }
    }
  }
}
