"""Line-delimited JSON persistence for the property graph.

Each line is a single object tagged with "kind": "node" or "edge". Nodes are
written before edges so a file can be loaded in one pass. Loading is strict:
unknown fields, missing fields, dangling endpoints, and syntactically bad
lines all raise MalformedRecordError with the 1-based line number.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Union

from ..errors import GraphTalkError, IoFailureError, MalformedRecordError
from .graph import PropertyGraph, validate_properties

_NODE_FIELDS = {"kind", "id", "name", "label", "properties"}
_NODE_REQUIRED = {"id", "name", "label"}
_EDGE_FIELDS = {"kind", "id", "source", "target", "relation", "properties"}
_EDGE_REQUIRED = {"id", "source", "target", "relation"}


def save_graph(graph: PropertyGraph, path: Union[str, os.PathLike]) -> None:
    """Write the graph as JSONL, nodes before edges, atomically (temp file + rename)."""
    path = os.fspath(path)
    with graph.lock.read_locked():
        lines = []
        for node in graph.nodes.values():
            payload = {"kind": "node", **node.to_dict()}
            lines.append(json.dumps(payload, ensure_ascii=False, sort_keys=True))
        for edge in graph.edges.values():
            payload = {"kind": "edge", **edge.to_dict()}
            lines.append(json.dumps(payload, ensure_ascii=False, sort_keys=True))
    text = "\n".join(lines)
    if text:
        text += "\n"
    directory = os.path.dirname(path) or "."
    try:
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".graph-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            try:
                os.unlink(tmp_path)
            except OSError:
                pass
            raise
    except OSError as exc:
        raise IoFailureError(f"cannot write graph file {path!r}: {exc}") from exc


def _require_str(record: dict, field: str, line_number: int) -> str:
    value = record.get(field)
    if not isinstance(value, str) or not value:
        raise MalformedRecordError(line_number, f"field {field!r} must be a non-empty string")
    return value


def load_graph(path: Union[str, os.PathLike]) -> PropertyGraph:
    """Load a JSONL graph file. Blank lines are skipped; everything else is validated."""
    path = os.fspath(path)
    graph = PropertyGraph()
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw_lines = handle.readlines()
    except OSError as exc:
        raise IoFailureError(f"cannot read graph file {path!r}: {exc}") from exc

    max_node_seq = 0
    max_edge_seq = 0
    for line_number, raw in enumerate(raw_lines, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(line_number, f"invalid JSON: {exc.msg}")
        if not isinstance(record, dict):
            raise MalformedRecordError(line_number, "record must be a JSON object")
        kind = record.get("kind")
        if kind == "node":
            unknown = set(record) - _NODE_FIELDS
            if unknown:
                raise MalformedRecordError(line_number, f"unknown node fields: {sorted(unknown)}")
            missing = _NODE_REQUIRED - set(record)
            if missing:
                raise MalformedRecordError(line_number, f"missing node fields: {sorted(missing)}")
            node_id = _require_str(record, "id", line_number)
            name = _require_str(record, "name", line_number)
            label = _require_str(record, "label", line_number)
            props = record.get("properties", {})
            if not isinstance(props, dict):
                raise MalformedRecordError(line_number, "properties must be an object")
            if node_id in graph.nodes:
                raise MalformedRecordError(line_number, f"duplicate node id {node_id!r}")
            try:
                validate_properties(props)
                outcome = graph.upsert_node(name, label, props, node_id=node_id)
            except GraphTalkError as exc:
                raise MalformedRecordError(line_number, str(exc))
            if not outcome.created:
                raise MalformedRecordError(
                    line_number, f"duplicate node for label {label!r} and name {name!r}"
                )
            if node_id.startswith("n") and node_id[1:].isdigit():
                max_node_seq = max(max_node_seq, int(node_id[1:]))
        elif kind == "edge":
            unknown = set(record) - _EDGE_FIELDS
            if unknown:
                raise MalformedRecordError(line_number, f"unknown edge fields: {sorted(unknown)}")
            missing = _EDGE_REQUIRED - set(record)
            if missing:
                raise MalformedRecordError(line_number, f"missing edge fields: {sorted(missing)}")
            edge_id = _require_str(record, "id", line_number)
            source = _require_str(record, "source", line_number)
            target = _require_str(record, "target", line_number)
            relation = _require_str(record, "relation", line_number)
            props = record.get("properties", {})
            if not isinstance(props, dict):
                raise MalformedRecordError(line_number, "properties must be an object")
            if edge_id in graph.edges:
                raise MalformedRecordError(line_number, f"duplicate edge id {edge_id!r}")
            if source not in graph.nodes:
                raise MalformedRecordError(line_number, f"edge references unknown source {source!r}")
            if target not in graph.nodes:
                raise MalformedRecordError(line_number, f"edge references unknown target {target!r}")
            try:
                validate_properties(props)
                outcome = graph.upsert_edge(source, relation, target, props, edge_id=edge_id)
            except GraphTalkError as exc:
                raise MalformedRecordError(line_number, str(exc))
            if not outcome.created:
                raise MalformedRecordError(line_number, f"duplicate edge triple on line {line_number}")
            if edge_id.startswith("e") and edge_id[1:].isdigit():
                max_edge_seq = max(max_edge_seq, int(edge_id[1:]))
        else:
            raise MalformedRecordError(line_number, f"kind must be 'node' or 'edge', got {kind!r}")

    # resume id generation past anything the file used
    graph._node_seq = max(graph._node_seq, max_node_seq)
    graph._edge_seq = max(graph._edge_seq, max_edge_seq)
    graph.version = 0
    return graph
