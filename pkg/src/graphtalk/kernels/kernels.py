"""Six task kernels: pure, deterministic functions of (graph, args).

Every kernel reads under the store's reader lock, never mutates, and breaks
ties by (normalized name, id) so repeat calls are byte-identical. Payloads
are plain JSON-serializable dicts; the benchmark validates against these
shapes and the response stage renders them as evidence text.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..store.graph import NodeRecord, PropertyGraph

DEFAULT_PREREQUISITE_RELATION = "PREREQUISITE_OF"
IDEA_TRIPLE_CAP = 200
CLUSTER_ITERATION_CAP = 100


@dataclass
class KernelResult:
    kind: str
    payload: dict
    provenance: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "payload": self.payload,
            "provenance": list(self.provenance),
            "warnings": list(self.warnings),
        }


def _sort_key(graph: PropertyGraph, node_id: str) -> Tuple[str, str]:
    node = graph.nodes[node_id]
    return (node.normalized_name, node.id)


def _forward_neighbors(graph: PropertyGraph, node_id: str, relation: Optional[str]) -> List[Tuple[str, str]]:
    """(neighbor id, edge id) out of a node, in deterministic expansion order."""
    out = []
    for edge_id in graph._out.get(node_id, ()):
        edge = graph.edges[edge_id]
        if relation is None or edge.relation == relation:
            out.append((edge.target, edge_id))
    out.sort(key=lambda pair: (_sort_key(graph, pair[0]), pair[1]))
    return out


def _reverse_neighbors(graph: PropertyGraph, node_id: str, relation: Optional[str]) -> List[Tuple[str, str]]:
    out = []
    for edge_id in graph._in.get(node_id, ()):
        edge = graph.edges[edge_id]
        if relation is None or edge.relation == relation:
            out.append((edge.source, edge_id))
    out.sort(key=lambda pair: (_sort_key(graph, pair[0]), pair[1]))
    return out


def _bfs_path(
    graph: PropertyGraph, start: str, goal: str, relation: Optional[str], reverse: bool = False
) -> Optional[List[Tuple[str, str]]]:
    """Shortest directed path as [(node id, edge id used to reach it)]; first entry has edge id ''."""
    if start == goal:
        return [(start, "")]
    expand = _reverse_neighbors if reverse else _forward_neighbors
    parents: Dict[str, Tuple[str, str]] = {}
    visited = {start}
    frontier = deque([start])
    while frontier:
        current = frontier.popleft()
        for neighbor, edge_id in expand(graph, current, relation):
            if neighbor in visited:
                continue
            visited.add(neighbor)
            parents[neighbor] = (current, edge_id)
            if neighbor == goal:
                path = [(goal, edge_id)]
                back = current
                while back != start:
                    parent, via = parents[back]
                    path.append((back, via))
                    back = parent
                path.append((start, ""))
                path.reverse()
                return path
            frontier.append(neighbor)
    return None


def relation_judgment(
    graph: PropertyGraph, node_a: str, node_b: str, max_hops: int = 1
) -> KernelResult:
    """Is there a directed path a->..->b or b->..->a within max_hops? Shortest witness wins.

    When forward and reverse witnesses tie on length, the forward one is
    reported.
    """
    if max_hops < 1:
        raise ValueError("max_hops must be at least 1")
    with graph.lock.read_locked():
        a = graph.get_node(node_a)
        b = graph.get_node(node_b)
        forward = _bfs_path(graph, node_a, node_b, relation=None)
        backward = _bfs_path(graph, node_b, node_a, relation=None)

        def usable(path):
            return path is not None and 1 <= len(path) - 1 <= max_hops

        chosen = None
        direction = None
        if usable(forward) and (not usable(backward) or len(forward) <= len(backward)):
            chosen, direction = forward, "forward"
        elif usable(backward):
            chosen, direction = backward, "reverse"

        provenance = [a.id, b.id]
        witness = None
        if chosen is not None:
            witness = []
            for index in range(1, len(chosen)):
                prev_id = chosen[index - 1][0]
                this_id, edge_id = chosen[index]
                edge = graph.edges[edge_id]
                witness.append(
                    {
                        "from": graph.nodes[prev_id].name,
                        "to": graph.nodes[this_id].name,
                        "relation": edge.relation,
                        "direction": direction,
                    }
                )
                provenance.append(edge_id)
            if direction == "reverse":
                # report hops oriented from node_a towards node_b
                witness = [
                    {"from": h["to"], "to": h["from"], "relation": h["relation"], "direction": "reverse"}
                    for h in reversed(witness)
                ]
        payload = {
            "node_a": a.name,
            "node_b": b.name,
            "connected": chosen is not None,
            "witness": witness,
        }
        return KernelResult(kind="RELATION_JUDGMENT", payload=payload, provenance=provenance)


def prerequisite_prediction(
    graph: PropertyGraph, target_node: str, relation: str = DEFAULT_PREREQUISITE_RELATION
) -> KernelResult:
    """Transitive ancestors along `relation` into the target, nearest first."""
    with graph.lock.read_locked():
        target = graph.get_node(target_node)
        distance: Dict[str, int] = {target_node: 0}
        frontier = deque([target_node])
        edge_ids: List[str] = []
        while frontier:
            current = frontier.popleft()
            for source, edge_id in _reverse_neighbors(graph, current, relation):
                edge_ids.append(edge_id)
                if source not in distance:
                    distance[source] = distance[current] + 1
                    frontier.append(source)

        ancestors = [node_id for node_id in distance if node_id != target_node]
        ancestors.sort(key=lambda nid: (distance[nid], _sort_key(graph, nid)))

        warnings: List[str] = []
        if _has_cycle(graph, set(distance), relation):
            warnings.append("cycle detected among prerequisites; distances use first-visit order")

        payload = {
            "target": target.name,
            "relation": relation,
            "prerequisites": [
                {"id": nid, "name": graph.nodes[nid].name, "distance": distance[nid]} for nid in ancestors
            ],
        }
        provenance = [target.id] + ancestors + sorted(set(edge_ids))
        return KernelResult(
            kind="PREREQUISITE_PREDICTION", payload=payload, provenance=provenance, warnings=warnings
        )


def _has_cycle(graph: PropertyGraph, nodes: Set[str], relation: Optional[str]) -> bool:
    """Back-edge DFS over the relation-subgraph induced by `nodes`."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node_id: WHITE for node_id in nodes}
    for root in sorted(nodes):
        if color[root] != WHITE:
            continue
        stack: List[Tuple[str, int]] = [(root, 0)]
        color[root] = GRAY
        children: Dict[str, List[str]] = {}
        while stack:
            node_id, cursor = stack[-1]
            if node_id not in children:
                children[node_id] = [
                    target
                    for target, _ in _forward_neighbors(graph, node_id, relation)
                    if target in nodes
                ]
            if cursor < len(children[node_id]):
                stack[-1] = (node_id, cursor + 1)
                child = children[node_id][cursor]
                if color[child] == GRAY:
                    return True
                if color[child] == WHITE:
                    color[child] = GRAY
                    stack.append((child, 0))
            else:
                color[node_id] = BLACK
                stack.pop()
    return False


def path_search(
    graph: PropertyGraph, start: str, goal: str, relation: Optional[str] = None
) -> KernelResult:
    """Shortest directed path from start to goal; [] when unreachable, [start] reflexively."""
    with graph.lock.read_locked():
        start_node = graph.get_node(start)
        goal_node = graph.get_node(goal)
        found = _bfs_path(graph, start, goal, relation)
        provenance = [start_node.id, goal_node.id]
        if found is None:
            payload = {
                "start": start_node.name,
                "goal": goal_node.name,
                "relation": relation,
                "found": False,
                "path": [],
            }
            return KernelResult(kind="PATH_SEARCHING", payload=payload, provenance=provenance)
        names = [graph.nodes[node_id].name for node_id, _ in found]
        for node_id, edge_id in found:
            if node_id not in provenance:
                provenance.append(node_id)
            if edge_id:
                provenance.append(edge_id)
        payload = {
            "start": start_node.name,
            "goal": goal_node.name,
            "relation": relation,
            "found": True,
            "path": names,
        }
        return KernelResult(kind="PATH_SEARCHING", payload=payload, provenance=provenance)


def _undirected_adjacency(
    graph: PropertyGraph, relations: Optional[Set[str]]
) -> Dict[str, Set[str]]:
    adjacency: Dict[str, Set[str]] = {node_id: set() for node_id in graph.nodes}
    for edge in graph.edges.values():
        if relations is not None and edge.relation not in relations:
            continue
        if edge.source == edge.target:
            continue
        adjacency[edge.source].add(edge.target)
        adjacency[edge.target].add(edge.source)
    return adjacency


def concept_clustering(
    graph: PropertyGraph, relation_set: Optional[Sequence[str]] = None
) -> KernelResult:
    """Synchronous label propagation over the undirected projection.

    Initial label = own node id; each round every node takes the most common
    label over itself and its neighbors (ties to the smallest label).
    Counting the node's own label keeps tiny symmetric components from
    oscillating under the synchronous schedule. Runs to a fixed point or
    100 rounds. Deterministic by construction.
    """
    relations = set(relation_set) if relation_set else None
    with graph.lock.read_locked():
        adjacency = _undirected_adjacency(graph, relations)
        labels: Dict[str, str] = {node_id: node_id for node_id in graph.nodes}
        for _ in range(CLUSTER_ITERATION_CAP):
            updated: Dict[str, str] = {}
            changed = False
            for node_id in graph.nodes:
                neighbors = adjacency[node_id]
                if not neighbors:
                    updated[node_id] = labels[node_id]
                    continue
                counts: Dict[str, int] = {labels[node_id]: 1}
                for neighbor in neighbors:
                    counts[labels[neighbor]] = counts.get(labels[neighbor], 0) + 1
                best = min(counts.items(), key=lambda item: (-item[1], item[0]))[0]
                updated[node_id] = best
                if best != labels[node_id]:
                    changed = True
            labels = updated
            if not changed:
                break

        groups: Dict[str, List[str]] = {}
        for node_id, label in labels.items():
            groups.setdefault(label, []).append(node_id)
        clusters = [sorted(members) for members in groups.values()]
        clusters.sort(key=lambda members: (-len(members), members[0]))

        degree = {node_id: len(adjacency[node_id]) for node_id in graph.nodes}

        def cluster_label(members: List[str]) -> str:
            top = min(members, key=lambda nid: (-degree[nid], _sort_key(graph, nid)))
            return graph.nodes[top].name

        payload = {
            "clusters": [
                {"label": cluster_label(members), "members": members, "size": len(members)}
                for members in clusters
            ]
        }
        return KernelResult(
            kind="CONCEPT_CLUSTERING", payload=payload, provenance=sorted(graph.nodes)
        )


def subgraph_completion(
    graph: PropertyGraph, seed_nodes: Sequence[str], k: int = 3
) -> KernelResult:
    """Rank non-adjacent seed pairs by shared neighborhood; suggest the top k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    with graph.lock.read_locked():
        seeds = []
        for node_id in seed_nodes:
            node = graph.get_node(node_id)
            if node.id not in seeds:
                seeds.append(node.id)
        adjacency = _undirected_adjacency(graph, None)

        seed_set = set(seeds)
        induced = [
            edge
            for edge in graph.edges.values()
            if edge.source in seed_set and edge.target in seed_set
        ]
        induced.sort(key=lambda e: e.id)

        ordered = sorted(seeds, key=lambda nid: _sort_key(graph, nid))
        suggestions = []
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                a, b = ordered[i], ordered[j]
                if b in adjacency[a]:
                    continue
                common = adjacency[a] & adjacency[b]
                union = adjacency[a] | adjacency[b]
                jaccard = len(common) / len(union) if union else 0.0
                name_pair = tuple(sorted([graph.nodes[a].normalized_name, graph.nodes[b].normalized_name]))
                suggestions.append(
                    {
                        "pair": [graph.nodes[a].name, graph.nodes[b].name],
                        "ids": [a, b],
                        "common_neighbors": len(common),
                        "jaccard": jaccard,
                        "_key": name_pair,
                    }
                )
        suggestions.sort(key=lambda s: (-s["common_neighbors"], -s["jaccard"], s["_key"]))
        for suggestion in suggestions:
            del suggestion["_key"]
        suggestions = suggestions[:k]

        payload = {
            "seeds": [graph.nodes[nid].name for nid in ordered],
            "induced_edges": [
                {"source": graph.nodes[e.source].name, "relation": e.relation, "target": graph.nodes[e.target].name}
                for e in induced
            ],
            "suggestions": suggestions,
        }
        provenance = ordered + [e.id for e in induced]
        return KernelResult(kind="SUBGRAPH_COMPLETION", payload=payload, provenance=provenance)


def idea_context(graph: PropertyGraph, seed_nodes: Sequence[str], radius: int = 1) -> KernelResult:
    """Serialize the radius-ball around the seeds as sorted relation triples.

    Triples sort by (ring distance, text) and the list is capped at 200, so
    nearby structure survives the cap on dense graphs.
    """
    if radius not in (1, 2):
        raise ValueError("radius must be 1 or 2")
    with graph.lock.read_locked():
        seeds = []
        for node_id in seed_nodes:
            node = graph.get_node(node_id)
            if node.id not in seeds:
                seeds.append(node.id)

        distance: Dict[str, int] = {node_id: 0 for node_id in seeds}
        frontier = deque(seeds)
        while frontier:
            current = frontier.popleft()
            if distance[current] >= radius:
                continue
            neighbors = set()
            for edge_id in graph._out.get(current, ()):
                neighbors.add(graph.edges[edge_id].target)
            for edge_id in graph._in.get(current, ()):
                neighbors.add(graph.edges[edge_id].source)
            for neighbor in sorted(neighbors, key=lambda nid: _sort_key(graph, nid)):
                if neighbor not in distance:
                    distance[neighbor] = distance[current] + 1
                    frontier.append(neighbor)

        ball = set(distance)
        triples = []
        for edge in graph.edges.values():
            if edge.source in ball and edge.target in ball:
                text = (
                    f"{graph.nodes[edge.source].name} -{edge.relation}-> {graph.nodes[edge.target].name}"
                )
                ring = max(distance[edge.source], distance[edge.target])
                triples.append((ring, text, edge.id))
        triples.sort(key=lambda t: (t[0], t[1]))
        triples = triples[:IDEA_TRIPLE_CAP]

        seed_names = [graph.nodes[nid].name for nid in seeds]
        lines = ["Seeds: " + ", ".join(seed_names)]
        lines.extend(text for _, text, _ in triples)
        payload = {
            "seed_names": seed_names,
            "radius": radius,
            "triple_count": len(triples),
            "text": "\n".join(lines),
        }
        provenance = sorted(ball) + [edge_id for _, _, edge_id in triples]
        return KernelResult(kind="IDEA_HAMSTER", payload=payload, provenance=provenance)
