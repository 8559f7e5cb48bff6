/** SVG rendering of the graph snapshot. No framework: build elements, replace content. */

import { Point } from "./layout.js";
import { EdgeOut, NodeOut } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

/** Fill palette for cluster tinting; index wraps for extra clusters. */
export const CLUSTER_COLORS = [
  "#7eb6ff",
  "#ffc880",
  "#9ee6a0",
  "#f2a0c0",
  "#c7a8f0",
  "#ffe08a",
  "#8fd8d2",
  "#d9b38c",
];

export interface Decorations {
  /** Ordered selected node ids. */
  selection: string[];
  /** Node ids on the highlighted path, in path order. */
  pathNodes: string[];
  /** Edge ids on the highlighted path. */
  pathEdges: Set<string>;
  /** Node id to cluster index for tinting. */
  clusterOf: Map<string, number>;
  /** Node ids matching the current name search. */
  searchHits: Set<string>;
}

export function emptyDecorations(): Decorations {
  return {
    selection: [],
    pathNodes: [],
    pathEdges: new Set(),
    clusterOf: new Map(),
    searchHits: new Set(),
  };
}

/** Find the snapshot edge joining two node ids in either direction. */
export function edgeBetween(edges: EdgeOut[], a: string, b: string): EdgeOut | undefined {
  return edges.find(
    (e) => (e.source === a && e.target === b) || (e.source === b && e.target === a),
  );
}

export interface RenderCallbacks {
  onNodeClick?: (node: NodeOut) => void;
  onEdgeClick?: (edge: EdgeOut) => void;
}

export function renderGraph(
  svg: SVGSVGElement,
  nodes: NodeOut[],
  edges: EdgeOut[],
  positions: Map<string, Point>,
  decorations: Decorations,
  callbacks: RenderCallbacks = {},
): void {
  const doc = svg.ownerDocument;
  while (svg.firstChild) {
    svg.removeChild(svg.firstChild);
  }

  const defs = doc.createElementNS(SVG_NS, "defs");
  const marker = doc.createElementNS(SVG_NS, "marker");
  marker.setAttribute("id", "arrow");
  marker.setAttribute("viewBox", "0 0 10 10");
  marker.setAttribute("refX", "20");
  marker.setAttribute("refY", "5");
  marker.setAttribute("markerWidth", "7");
  marker.setAttribute("markerHeight", "7");
  marker.setAttribute("orient", "auto-start-reverse");
  const tip = doc.createElementNS(SVG_NS, "path");
  tip.setAttribute("d", "M 0 0 L 10 5 L 0 10 z");
  tip.setAttribute("class", "arrow-tip");
  marker.appendChild(tip);
  defs.appendChild(marker);
  svg.appendChild(defs);

  const edgeLayer = doc.createElementNS(SVG_NS, "g");
  edgeLayer.setAttribute("class", "edges");
  for (const edge of edges) {
    const from = positions.get(edge.source);
    const to = positions.get(edge.target);
    if (!from || !to) {
      continue;
    }
    const group = doc.createElementNS(SVG_NS, "g");
    const onPath = decorations.pathEdges.has(edge.id);
    group.setAttribute("class", onPath ? "edge path-edge" : "edge");
    group.setAttribute("data-edge-id", edge.id);
    group.setAttribute("data-relation", edge.relation);

    const line = doc.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    line.setAttribute("marker-end", "url(#arrow)");
    group.appendChild(line);

    const caption = doc.createElementNS(SVG_NS, "text");
    caption.setAttribute("x", String((from.x + to.x) / 2));
    caption.setAttribute("y", String((from.y + to.y) / 2 - 4));
    caption.setAttribute("class", "edge-caption");
    caption.textContent = edge.relation;
    group.appendChild(caption);

    if (callbacks.onEdgeClick) {
      group.addEventListener("click", () => callbacks.onEdgeClick?.(edge));
    }
    edgeLayer.appendChild(group);
  }
  svg.appendChild(edgeLayer);

  const nodeLayer = doc.createElementNS(SVG_NS, "g");
  nodeLayer.setAttribute("class", "nodes");
  const pathSet = new Set(decorations.pathNodes);
  for (const node of nodes) {
    const at = positions.get(node.id);
    if (!at) {
      continue;
    }
    const group = doc.createElementNS(SVG_NS, "g");
    const classes = ["node"];
    if (decorations.selection.includes(node.id)) {
      classes.push("selected");
    }
    if (pathSet.has(node.id)) {
      classes.push("path-node");
      group.setAttribute("data-path-order", String(decorations.pathNodes.indexOf(node.id)));
    }
    if (decorations.searchHits.has(node.id)) {
      classes.push("search-hit");
    }
    group.setAttribute("class", classes.join(" "));
    group.setAttribute("data-node-id", node.id);
    group.setAttribute("data-name", node.name);

    const circle = doc.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(at.x));
    circle.setAttribute("cy", String(at.y));
    circle.setAttribute("r", "14");
    const cluster = decorations.clusterOf.get(node.id);
    if (cluster !== undefined) {
      group.setAttribute("data-cluster", String(cluster));
      circle.setAttribute("fill", CLUSTER_COLORS[cluster % CLUSTER_COLORS.length]);
    }
    group.appendChild(circle);

    const order = decorations.selection.indexOf(node.id);
    if (order >= 0) {
      const badge = doc.createElementNS(SVG_NS, "text");
      badge.setAttribute("x", String(at.x));
      badge.setAttribute("y", String(at.y + 4));
      badge.setAttribute("class", "selection-order");
      badge.textContent = String(order + 1);
      group.appendChild(badge);
    }

    const nameText = doc.createElementNS(SVG_NS, "text");
    nameText.setAttribute("x", String(at.x));
    nameText.setAttribute("y", String(at.y + 28));
    nameText.setAttribute("class", "node-name");
    nameText.textContent = node.name;
    group.appendChild(nameText);

    if (callbacks.onNodeClick) {
      group.addEventListener("click", () => callbacks.onNodeClick?.(node));
    }
    nodeLayer.appendChild(group);
  }
  svg.appendChild(nodeLayer);
}
