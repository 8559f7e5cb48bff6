"""Embedded, transactional property-graph store.

Nodes and edges carry a type label and scalar key-value properties. Inserts
follow set-union semantics: a node is identified by its (label, normalized
name) pair and an edge by its (source, relation, target) triple, so
re-inserting either returns the existing element instead of duplicating it.
The whole graph lives in memory; persistence is line-delimited JSON (see
``graphtalk.store.fileio``).
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from ..errors import (
    EmptyNameError,
    ForbiddenSelfLoopError,
    InvalidPropertyValueError,
    UnknownEdgeError,
    UnknownNodeError,
)
from .locks import ReadWriteLock

Scalar = Union[str, int, float, bool]
PropertyMap = Dict[str, Scalar]

SELF_LOOP_RELATION = "SAME_AS"

_WHITESPACE = re.compile(r"\s+")


def normalize_name(name: str) -> str:
    """Lowercase, trim, and collapse internal whitespace."""
    return _WHITESPACE.sub(" ", name.strip()).lower()


def validate_properties(properties: Optional[PropertyMap]) -> PropertyMap:
    """Return a validated copy of a property map (scalar values only)."""
    if properties is None:
        return {}
    cleaned: PropertyMap = {}
    for key, value in properties.items():
        if not isinstance(key, str) or not key:
            raise InvalidPropertyValueError(f"property key must be a non-empty string, got {key!r}")
        if isinstance(value, bool):
            pass
        elif isinstance(value, (int, str)):
            pass
        elif isinstance(value, float):
            if value != value or value in (float("inf"), float("-inf")):
                raise InvalidPropertyValueError(f"property {key!r} must be finite, got {value!r}")
        else:
            raise InvalidPropertyValueError(
                f"property {key!r} must be a scalar (str, int, float, bool), got {type(value).__name__}"
            )
        cleaned[key] = value
    return cleaned


@dataclass
class NodeRecord:
    id: str
    name: str
    label: str
    properties: PropertyMap = field(default_factory=dict)

    @property
    def normalized_name(self) -> str:
        return normalize_name(self.name)

    def to_dict(self) -> dict:
        return {"id": self.id, "name": self.name, "label": self.label, "properties": dict(self.properties)}


@dataclass
class EdgeRecord:
    id: str
    source: str
    target: str
    relation: str
    properties: PropertyMap = field(default_factory=dict)

    def triple(self) -> Tuple[str, str, str]:
        return (self.source, self.relation, self.target)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "target": self.target,
            "relation": self.relation,
            "properties": dict(self.properties),
        }


@dataclass
class MutationSummary:
    nodes_created: int = 0
    edges_created: int = 0
    nodes_deleted: int = 0
    edges_deleted: int = 0

    def merge(self, other: "MutationSummary") -> "MutationSummary":
        self.nodes_created += other.nodes_created
        self.edges_created += other.edges_created
        self.nodes_deleted += other.nodes_deleted
        self.edges_deleted += other.edges_deleted
        return self

    @property
    def is_noop(self) -> bool:
        return not (self.nodes_created or self.edges_created or self.nodes_deleted or self.edges_deleted)

    def to_dict(self) -> dict:
        return {
            "nodes_created": self.nodes_created,
            "edges_created": self.edges_created,
            "nodes_deleted": self.nodes_deleted,
            "edges_deleted": self.edges_deleted,
        }


@dataclass
class UpsertOutcome:
    """Element id plus whether this call actually created it."""

    id: str
    created: bool


class PropertyGraph:
    """In-memory directed property graph with union-semantics upserts.

    Maintained indexes (out/in adjacency, name index, triple index) are kept
    consistent with the node/edge collections on every mutation; ``audit()``
    recomputes them from scratch and reports any divergence.

    Thread model: single writer, multiple readers. Public mutators take the
    write lock; read helpers take the read lock. Callers composing multiple
    operations atomically should hold ``graph.lock.write_locked()`` around
    the sequence (the lock is reentrant for the owning writer).
    """

    def __init__(self) -> None:
        self.nodes: Dict[str, NodeRecord] = {}
        self.edges: Dict[str, EdgeRecord] = {}
        self._out: Dict[str, Set[str]] = {}
        self._in: Dict[str, Set[str]] = {}
        # normalized name -> label -> node id
        self._name_index: Dict[str, Dict[str, str]] = {}
        self._triples: Dict[Tuple[str, str, str], str] = {}
        self._node_seq = 0
        self._edge_seq = 0
        # bumped on every successful mutation; used for cache invalidation
        self.version = 0
        self.lock = ReadWriteLock()

    # --- id generation ---

    def _next_node_id(self) -> str:
        while True:
            self._node_seq += 1
            candidate = f"n{self._node_seq}"
            if candidate not in self.nodes:
                return candidate

    def _next_edge_id(self) -> str:
        while True:
            self._edge_seq += 1
            candidate = f"e{self._edge_seq}"
            if candidate not in self.edges:
                return candidate

    # --- counts ---

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    # --- mutation ---

    def upsert_node(
        self,
        name: str,
        label: str,
        properties: Optional[PropertyMap] = None,
        node_id: Optional[str] = None,
    ) -> UpsertOutcome:
        """Insert a node, or return the existing one with the same (label, normalized name).

        ``node_id`` is only honored on actual creation (used by the file loader
        to preserve ids); it must not collide with an existing id.
        """
        props = validate_properties(properties)
        trimmed = name.strip()
        if not trimmed:
            raise EmptyNameError("node name is empty after trimming")
        norm = normalize_name(trimmed)
        with self.lock.write_locked():
            by_label = self._name_index.get(norm)
            if by_label is not None and label in by_label:
                return UpsertOutcome(id=by_label[label], created=False)
            if node_id is None:
                node_id = self._next_node_id()
            elif node_id in self.nodes:
                raise InvalidPropertyValueError(f"node id {node_id!r} already exists")
            record = NodeRecord(id=node_id, name=trimmed, label=label, properties=props)
            self.nodes[node_id] = record
            self._out[node_id] = set()
            self._in[node_id] = set()
            self._name_index.setdefault(norm, {})[label] = node_id
            self.version += 1
            return UpsertOutcome(id=node_id, created=True)

    def insert_node(self, name: str, label: str, properties: Optional[PropertyMap] = None) -> str:
        return self.upsert_node(name, label, properties).id

    def upsert_edge(
        self,
        source_id: str,
        relation: str,
        target_id: str,
        properties: Optional[PropertyMap] = None,
        edge_id: Optional[str] = None,
    ) -> UpsertOutcome:
        """Insert an edge, or return the existing one with the same (source, relation, target)."""
        props = validate_properties(properties)
        with self.lock.write_locked():
            if source_id not in self.nodes:
                raise UnknownNodeError(f"unknown source node {source_id!r}")
            if target_id not in self.nodes:
                raise UnknownNodeError(f"unknown target node {target_id!r}")
            if source_id == target_id and relation != SELF_LOOP_RELATION:
                raise ForbiddenSelfLoopError(
                    f"self-loops are only permitted for {SELF_LOOP_RELATION}, not {relation!r}"
                )
            triple = (source_id, relation, target_id)
            existing = self._triples.get(triple)
            if existing is not None:
                return UpsertOutcome(id=existing, created=False)
            if edge_id is None:
                edge_id = self._next_edge_id()
            elif edge_id in self.edges:
                raise InvalidPropertyValueError(f"edge id {edge_id!r} already exists")
            record = EdgeRecord(id=edge_id, source=source_id, target=target_id, relation=relation, properties=props)
            self.edges[edge_id] = record
            self._out[source_id].add(edge_id)
            self._in[target_id].add(edge_id)
            self._triples[triple] = edge_id
            self.version += 1
            return UpsertOutcome(id=edge_id, created=True)

    def insert_edge(
        self, source_id: str, relation: str, target_id: str, properties: Optional[PropertyMap] = None
    ) -> str:
        return self.upsert_edge(source_id, relation, target_id, properties).id

    def delete_node(self, node_id: str) -> int:
        """Delete a node and all incident edges atomically; returns the edge count removed."""
        with self.lock.write_locked():
            record = self.nodes.get(node_id)
            if record is None:
                raise UnknownNodeError(f"unknown node {node_id!r}")
            incident = self._out[node_id] | self._in[node_id]
            for edge_id in incident:
                self._drop_edge(edge_id)
            del self.nodes[node_id]
            del self._out[node_id]
            del self._in[node_id]
            norm = record.normalized_name
            by_label = self._name_index.get(norm, {})
            by_label.pop(record.label, None)
            if not by_label:
                self._name_index.pop(norm, None)
            self.version += 1
            return len(incident)

    def delete_edge(self, edge_id: str) -> None:
        with self.lock.write_locked():
            if edge_id not in self.edges:
                raise UnknownEdgeError(f"unknown edge {edge_id!r}")
            self._drop_edge(edge_id)
            self.version += 1

    def _drop_edge(self, edge_id: str) -> None:
        record = self.edges.pop(edge_id)
        self._out[record.source].discard(edge_id)
        self._in[record.target].discard(edge_id)
        self._triples.pop(record.triple(), None)

    # --- lookup ---

    def get_node(self, node_id: str) -> NodeRecord:
        with self.lock.read_locked():
            record = self.nodes.get(node_id)
            if record is None:
                raise UnknownNodeError(f"unknown node {node_id!r}")
            return record

    def get_edge(self, edge_id: str) -> EdgeRecord:
        with self.lock.read_locked():
            record = self.edges.get(edge_id)
            if record is None:
                raise UnknownEdgeError(f"unknown edge {edge_id!r}")
            return record

    def has_node(self, node_id: str) -> bool:
        with self.lock.read_locked():
            return node_id in self.nodes

    def find_nodes_by_name(self, name: str) -> List[NodeRecord]:
        """All nodes whose normalized name matches, ordered by (label, id)."""
        norm = normalize_name(name)
        with self.lock.read_locked():
            by_label = self._name_index.get(norm, {})
            found = [self.nodes[node_id] for node_id in by_label.values()]
            found.sort(key=lambda n: (n.label, n.id))
            return found

    def find_node(self, name: str, label: Optional[str] = None) -> Optional[NodeRecord]:
        """First node matching the normalized name (and label, when given)."""
        matches = self.find_nodes_by_name(name)
        if label is not None:
            matches = [n for n in matches if n.label == label]
        return matches[0] if matches else None

    def neighbors(
        self,
        node_id: str,
        direction: str = "out",
        relation_filter: Optional[str] = None,
    ) -> List[Tuple[EdgeRecord, NodeRecord]]:
        """Incident (edge, neighbor) pairs, ordered by (relation, neighbor normalized name).

        ``direction`` is one of ``out``, ``in``, ``both``. In ``both`` mode each
        edge appears once even when it is a self-loop.
        """
        if direction not in ("out", "in", "both"):
            raise ValueError(f"direction must be out, in, or both; got {direction!r}")
        with self.lock.read_locked():
            if node_id not in self.nodes:
                raise UnknownNodeError(f"unknown node {node_id!r}")
            edge_ids: Set[str] = set()
            if direction in ("out", "both"):
                edge_ids |= self._out[node_id]
            if direction in ("in", "both"):
                edge_ids |= self._in[node_id]
            pairs: List[Tuple[EdgeRecord, NodeRecord]] = []
            for edge_id in edge_ids:
                edge = self.edges[edge_id]
                if relation_filter is not None and edge.relation != relation_filter:
                    continue
                other_id = edge.target if edge.source == node_id else edge.source
                pairs.append((edge, self.nodes[other_id]))
            pairs.sort(key=lambda pair: (pair[0].relation, pair[1].normalized_name, pair[1].id, pair[0].id))
            return pairs

    def out_edges(self, node_id: str) -> List[EdgeRecord]:
        with self.lock.read_locked():
            return sorted((self.edges[e] for e in self._out.get(node_id, ())), key=lambda e: e.id)

    def in_edges(self, node_id: str) -> List[EdgeRecord]:
        with self.lock.read_locked():
            return sorted((self.edges[e] for e in self._in.get(node_id, ())), key=lambda e: e.id)

    def edge_between(self, source_id: str, relation: str, target_id: str) -> Optional[EdgeRecord]:
        with self.lock.read_locked():
            edge_id = self._triples.get((source_id, relation, target_id))
            return self.edges[edge_id] if edge_id is not None else None

    def nodes_sorted(self) -> List[NodeRecord]:
        """All nodes in the canonical (normalized name, label, id) order used for pagination."""
        with self.lock.read_locked():
            return sorted(self.nodes.values(), key=lambda n: (n.normalized_name, n.label, n.id))

    # --- integrity ---

    def audit(self) -> List[str]:
        """Recompute the derived indexes from scratch; returns discrepancy messages (empty = consistent)."""
        problems: List[str] = []
        with self.lock.read_locked():
            out: Dict[str, Set[str]] = {node_id: set() for node_id in self.nodes}
            inn: Dict[str, Set[str]] = {node_id: set() for node_id in self.nodes}
            triples: Dict[Tuple[str, str, str], str] = {}
            for edge_id, edge in self.edges.items():
                if edge.source not in self.nodes:
                    problems.append(f"edge {edge_id} has dangling source {edge.source}")
                    continue
                if edge.target not in self.nodes:
                    problems.append(f"edge {edge_id} has dangling target {edge.target}")
                    continue
                out[edge.source].add(edge_id)
                inn[edge.target].add(edge_id)
                if edge.triple() in triples:
                    problems.append(f"duplicate triple {edge.triple()}")
                triples[edge.triple()] = edge_id
            names: Dict[str, Dict[str, str]] = {}
            for node_id, node in self.nodes.items():
                names.setdefault(node.normalized_name, {})
                if node.label in names[node.normalized_name]:
                    problems.append(f"duplicate normalized name {node.normalized_name!r} for label {node.label!r}")
                names[node.normalized_name][node.label] = node_id
            if out != self._out:
                problems.append("out-adjacency index diverges from recomputation")
            if inn != self._in:
                problems.append("in-adjacency index diverges from recomputation")
            if triples != self._triples:
                problems.append("triple index diverges from recomputation")
            if names != self._name_index:
                problems.append("name index diverges from recomputation")
        return problems

    # --- equality and hashing ---

    def canonical_form(self) -> dict:
        """Order-independent structure for equality checks and hashing."""
        with self.lock.read_locked():
            return {
                "nodes": [self.nodes[i].to_dict() for i in sorted(self.nodes)],
                "edges": [self.edges[i].to_dict() for i in sorted(self.edges)],
            }

    def content_hash(self) -> str:
        blob = json.dumps(self.canonical_form(), sort_keys=True, ensure_ascii=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def structurally_equal(self, other: "PropertyGraph") -> bool:
        return self.canonical_form() == other.canonical_form()
