/** Graph explorer: force-directed canvas, search, CRUD forms, staleness badge. */

import { ApiClient, ApiError } from "./api.js";
import { layoutGraph } from "./layout.js";
import { Decorations, emptyDecorations, edgeBetween, renderGraph } from "./render.js";
import { AppState, normalizeName } from "./state.js";
import { ToastHost } from "./toast.js";
import { EdgeOut } from "./types.js";

const CANVAS_WIDTH = 760;
const CANVAS_HEIGHT = 520;

export class GraphExplorer {
  private client: ApiClient;
  private state: AppState;
  private toasts: ToastHost;
  private track: <T>(op: Promise<T>) => Promise<T>;

  private svg: SVGSVGElement;
  private staleBadge: HTMLElement;
  private countsLabel: HTMLElement;
  private searchInput: HTMLInputElement;
  private nodeNameInput: HTMLInputElement;
  private nodeLabelInput: HTMLInputElement;
  private edgeSourceInput: HTMLInputElement;
  private edgeRelationInput: HTMLInputElement;
  private edgeTargetInput: HTMLInputElement;
  private deleteNodeButton: HTMLButtonElement;
  private deleteEdgeButton: HTMLButtonElement;
  private nameList: HTMLDataListElement;

  private decorations: Decorations = emptyDecorations();
  private selectedEdge: EdgeOut | null = null;
  onSelectionChange: (() => void) | null = null;

  constructor(
    root: HTMLElement,
    client: ApiClient,
    state: AppState,
    toasts: ToastHost,
    track?: <T>(op: Promise<T>) => Promise<T>,
  ) {
    this.client = client;
    this.state = state;
    this.toasts = toasts;
    this.track = track ?? ((op) => op);
    const doc = root.ownerDocument;
    root.classList.add("graph-explorer");

    const toolbar = doc.createElement("div");
    toolbar.className = "explorer-toolbar";
    this.searchInput = doc.createElement("input");
    this.searchInput.type = "search";
    this.searchInput.placeholder = "Search by name";
    this.searchInput.className = "search-input";
    this.searchInput.addEventListener("input", () => {
      this.applySearch(this.searchInput.value);
    });
    toolbar.appendChild(this.searchInput);

    const refresh = doc.createElement("button");
    refresh.type = "button";
    refresh.className = "refresh-button";
    refresh.textContent = "Refresh";
    refresh.addEventListener("click", () => {
      void this.track(this.refresh());
    });
    toolbar.appendChild(refresh);

    const clear = doc.createElement("button");
    clear.type = "button";
    clear.className = "clear-highlights";
    clear.textContent = "Clear highlights";
    clear.addEventListener("click", () => {
      this.clearHighlights();
    });
    toolbar.appendChild(clear);

    this.staleBadge = doc.createElement("span");
    this.staleBadge.className = "stale-badge hidden";
    this.staleBadge.textContent = "stale";
    this.staleBadge.title = "The view is older than the latest edit; refresh to update.";
    toolbar.appendChild(this.staleBadge);

    this.countsLabel = doc.createElement("span");
    this.countsLabel.className = "graph-counts";
    toolbar.appendChild(this.countsLabel);
    root.appendChild(toolbar);

    this.svg = doc.createElementNS("http://www.w3.org/2000/svg", "svg") as SVGSVGElement;
    this.svg.setAttribute("class", "graph-canvas");
    this.svg.setAttribute("viewBox", `0 0 ${CANVAS_WIDTH} ${CANVAS_HEIGHT}`);
    this.svg.setAttribute("width", "100%");
    root.appendChild(this.svg);

    this.nameList = doc.createElement("datalist");
    this.nameList.id = "node-names";
    root.appendChild(this.nameList);

    const forms = doc.createElement("div");
    forms.className = "explorer-forms";

    const nodeForm = doc.createElement("form");
    nodeForm.className = "node-form";
    this.nodeNameInput = doc.createElement("input");
    this.nodeNameInput.placeholder = "Node name";
    this.nodeNameInput.name = "name";
    this.nodeLabelInput = doc.createElement("input");
    this.nodeLabelInput.placeholder = "Label";
    this.nodeLabelInput.name = "label";
    this.nodeLabelInput.value = "Concept";
    const nodeSubmit = doc.createElement("button");
    nodeSubmit.type = "submit";
    nodeSubmit.textContent = "Add node";
    nodeForm.append(this.nodeNameInput, this.nodeLabelInput, nodeSubmit);
    nodeForm.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.track(this.submitNode());
    });
    forms.appendChild(nodeForm);

    const edgeForm = doc.createElement("form");
    edgeForm.className = "edge-form";
    this.edgeSourceInput = doc.createElement("input");
    this.edgeSourceInput.placeholder = "Source name";
    this.edgeSourceInput.name = "source";
    this.edgeSourceInput.setAttribute("list", "node-names");
    this.edgeRelationInput = doc.createElement("input");
    this.edgeRelationInput.placeholder = "RELATION";
    this.edgeRelationInput.name = "relation";
    this.edgeTargetInput = doc.createElement("input");
    this.edgeTargetInput.placeholder = "Target name";
    this.edgeTargetInput.name = "target";
    this.edgeTargetInput.setAttribute("list", "node-names");
    const edgeSubmit = doc.createElement("button");
    edgeSubmit.type = "submit";
    edgeSubmit.textContent = "Add edge";
    edgeForm.append(this.edgeSourceInput, this.edgeRelationInput, this.edgeTargetInput, edgeSubmit);
    edgeForm.addEventListener("submit", (event) => {
      event.preventDefault();
      void this.track(this.submitEdge());
    });
    forms.appendChild(edgeForm);

    this.deleteNodeButton = doc.createElement("button");
    this.deleteNodeButton.type = "button";
    this.deleteNodeButton.className = "delete-node";
    this.deleteNodeButton.textContent = "Delete selected node";
    this.deleteNodeButton.addEventListener("click", () => {
      void this.track(this.deleteSelectedNode());
    });
    forms.appendChild(this.deleteNodeButton);

    this.deleteEdgeButton = doc.createElement("button");
    this.deleteEdgeButton.type = "button";
    this.deleteEdgeButton.className = "delete-edge";
    this.deleteEdgeButton.textContent = "Delete selected edge";
    this.deleteEdgeButton.addEventListener("click", () => {
      void this.track(this.deleteSelectedEdge());
    });
    forms.appendChild(this.deleteEdgeButton);

    root.appendChild(forms);
  }

  /** Fetch the snapshot and redraw. */
  async refresh(): Promise<void> {
    const sentAt = this.state.beginFetch();
    try {
      const page = await this.client.graph();
      this.state.applySnapshot(page, sentAt);
      this.selectedEdge = null;
      this.render();
      this.onSelectionChange?.();
    } catch (exc) {
      this.report(exc);
    }
  }

  /** Redraw from current state without fetching. */
  render(): void {
    const positions = layoutGraph(
      this.state.nodes.map((n) => n.id),
      this.state.edges,
      { width: CANVAS_WIDTH, height: CANVAS_HEIGHT, seed: this.state.layoutSeed },
    );
    this.decorations.selection = this.state.selection;
    renderGraph(this.svg, this.state.nodes, this.state.edges, positions, this.decorations, {
      onNodeClick: (node) => {
        this.state.toggleSelected(node.id);
        this.render();
        this.onSelectionChange?.();
        void this.track(this.expand(node.id));
      },
      onEdgeClick: (edge) => {
        this.selectedEdge = edge;
        this.markSelectedEdge();
      },
    });
    this.markSelectedEdge();
    this.staleBadge.classList.toggle("hidden", !this.state.stale);
    this.countsLabel.textContent = `${this.state.totalNodes} nodes · ${this.state.totalEdges} edges`;
    this.nameList.innerHTML = "";
    const doc = this.svg.ownerDocument;
    for (const node of this.state.nodes) {
      const option = doc.createElement("option");
      option.value = node.name;
      this.nameList.appendChild(option);
    }
  }

  private markSelectedEdge(): void {
    for (const group of Array.from(this.svg.querySelectorAll("g.edge"))) {
      group.classList.toggle(
        "selected-edge",
        this.selectedEdge !== null && group.getAttribute("data-edge-id") === this.selectedEdge.id,
      );
    }
  }

  /** Pull one node's neighborhood and merge unseen nodes and edges into the view. */
  async expand(nodeId: string): Promise<void> {
    try {
      const result = await this.client.neighbors(nodeId, "both");
      this.state.mergeExpansion(
        result.neighbors.map((item) => item.node),
        result.neighbors.map((item) => item.edge),
      );
      this.render();
    } catch (exc) {
      this.report(exc);
    }
  }

  private async submitNode(): Promise<void> {
    const name = this.nodeNameInput.value.trim();
    if (!name) {
      this.toasts.show("node name must not be empty");
      return;
    }
    const label = this.nodeLabelInput.value.trim() || "Concept";
    try {
      await this.client.createNode(name, label);
      this.state.markMutated();
      this.nodeNameInput.value = "";
      await this.refresh();
    } catch (exc) {
      this.report(exc);
    }
  }

  private async submitEdge(): Promise<void> {
    const sourceName = this.edgeSourceInput.value.trim();
    const relation = this.edgeRelationInput.value.trim();
    const targetName = this.edgeTargetInput.value.trim();
    if (!sourceName || !relation || !targetName) {
      this.toasts.show("edge needs source, relation, and target");
      return;
    }
    // The endpoint takes node ids; resolve names against the snapshot and
    // fall back to the raw text so the server reports unknown names.
    const source = this.state.nodeByName(sourceName)?.id ?? sourceName;
    const target = this.state.nodeByName(targetName)?.id ?? targetName;
    try {
      await this.client.createEdge(source, relation.toUpperCase(), target);
      this.state.markMutated();
      this.edgeSourceInput.value = "";
      this.edgeRelationInput.value = "";
      this.edgeTargetInput.value = "";
      await this.refresh();
    } catch (exc) {
      this.report(exc);
    }
  }

  private async deleteSelectedNode(): Promise<void> {
    const nodeId = this.state.selection[this.state.selection.length - 1];
    if (!nodeId) {
      this.toasts.show("select a node first");
      return;
    }
    try {
      await this.client.deleteNode(nodeId);
      this.state.markMutated();
      await this.refresh();
    } catch (exc) {
      this.report(exc);
    }
  }

  private async deleteSelectedEdge(): Promise<void> {
    if (!this.selectedEdge) {
      this.toasts.show("click an edge first");
      return;
    }
    const edgeId = this.selectedEdge.id;
    try {
      await this.client.deleteEdge(edgeId);
      this.state.markMutated();
      this.selectedEdge = null;
      await this.refresh();
    } catch (exc) {
      this.report(exc);
    }
  }

  private applySearch(query: string): void {
    const wanted = normalizeName(query);
    this.decorations.searchHits = new Set(
      wanted
        ? this.state.nodes
            .filter((n) => normalizeName(n.name).includes(wanted))
            .map((n) => n.id)
        : [],
    );
    this.render();
  }

  /** Highlight a path given node names in order; edges between hops light up. */
  highlightPath(names: string[]): void {
    const ids: string[] = [];
    for (const name of names) {
      const node = this.state.nodeByName(name);
      if (node) {
        ids.push(node.id);
      }
    }
    const edgeIds = new Set<string>();
    for (let i = 0; i + 1 < ids.length; i++) {
      const edge = edgeBetween(this.state.edges, ids[i], ids[i + 1]);
      if (edge) {
        edgeIds.add(edge.id);
      }
    }
    this.decorations.pathNodes = ids;
    this.decorations.pathEdges = edgeIds;
    this.decorations.clusterOf = new Map();
    this.render();
  }

  /** Tint nodes by cluster membership; clusters are lists of node ids. */
  tintClusters(clusters: { members: string[] }[]): void {
    const tint = new Map<string, number>();
    clusters.forEach((cluster, i) => {
      for (const member of cluster.members) {
        tint.set(member, i);
      }
    });
    this.decorations.clusterOf = tint;
    this.decorations.pathNodes = [];
    this.decorations.pathEdges = new Set();
    this.render();
  }

  clearHighlights(): void {
    this.decorations.pathNodes = [];
    this.decorations.pathEdges = new Set();
    this.decorations.clusterOf = new Map();
    this.decorations.searchHits = new Set();
    this.searchInput.value = "";
    this.render();
  }

  private report(exc: unknown): void {
    if (exc instanceof ApiError) {
      this.toasts.show(`${exc.code}: ${exc.message}`);
    } else {
      this.toasts.show(`unexpected error: ${String(exc)}`);
    }
  }
}
