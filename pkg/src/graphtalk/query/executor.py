"""Query execution against the property-graph store.

Read queries run an exhaustive backtracking pattern match, then project,
deduplicate, sort, and truncate. Row order is a pure function of graph
content: rows sort lexicographically over their rendered values. Write
queries (CREATE, MERGE, MATCH...DELETE) run under the store's writer lock
and report a MutationSummary; node and edge creation inherit the store's
set-union semantics, so replays are idempotent.

Unknown labels and relations are not errors: they simply match nothing,
which feeds the agent's refinement loop instead of aborting it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from ..errors import ExecutionError
from ..store.graph import (
    EdgeRecord,
    MutationSummary,
    NodeRecord,
    PropertyGraph,
    Scalar,
)
from .ast import (
    Comparison,
    CreateClause,
    DeleteClause,
    EdgeAtom,
    IN,
    MatchClause,
    MergeClause,
    NodeAtom,
    OUT,
    Pattern,
    Projection,
    PropertyRef,
    QueryAst,
    ReturnClause,
)
from .render import render_scalar


@dataclass(frozen=True)
class NodeRef:
    """A node-valued result cell (identity plus display fields)."""

    id: str
    name: str
    label: str


Value = Union[Scalar, NodeRef, None]


def render_value(value: Value) -> str:
    if value is None:
        return "null"
    if isinstance(value, NodeRef):
        return f"({value.label} {value.name})"
    return render_scalar(value)


def _dedup_key(value: Value):
    if value is None:
        return ("null",)
    if isinstance(value, NodeRef):
        return ("node", value.id)
    # bool is an int subclass; tag it so true != 1
    if isinstance(value, bool):
        return ("bool", value)
    return (type(value).__name__, value)


@dataclass
class ResultTable:
    columns: List[str]
    rows: List[Tuple[Value, ...]]

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def render(self) -> str:
        lines = [" | ".join(self.columns)]
        for row in self.rows:
            lines.append(" | ".join(render_value(v) for v in row))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        def plain(value: Value):
            if isinstance(value, NodeRef):
                return {"id": value.id, "name": value.name, "label": value.label}
            return value

        return {"columns": list(self.columns), "rows": [[plain(v) for v in row] for row in self.rows]}


Binding = Dict[str, Union[NodeRecord, EdgeRecord]]


def _scalar_equal(a: Scalar, b: Scalar) -> bool:
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    return a == b


def _node_property(node: NodeRecord, key: str) -> Optional[Scalar]:
    if key == "name":
        return node.name
    if key == "label":
        return node.label
    if key == "id":
        return node.id
    return node.properties.get(key)


def _edge_property(edge: EdgeRecord, key: str) -> Optional[Scalar]:
    if key == "relation":
        return edge.relation
    if key == "id":
        return edge.id
    return edge.properties.get(key)


def _element_property(element: Union[NodeRecord, EdgeRecord], key: str) -> Optional[Scalar]:
    if isinstance(element, NodeRecord):
        return _node_property(element, key)
    return _edge_property(element, key)


def _node_matches(node: NodeRecord, atom: NodeAtom) -> bool:
    if atom.label is not None and node.label != atom.label:
        return False
    for key, wanted in atom.properties:
        actual = _node_property(node, key)
        if actual is None or not _scalar_equal(actual, wanted):
            return False
    return True


def _bind(binding: Binding, variable: Optional[str], element: Union[NodeRecord, EdgeRecord]) -> Optional[Binding]:
    """Extend a binding, or return None when the variable is already bound to something else."""
    if variable is None:
        return binding
    existing = binding.get(variable)
    if existing is None:
        extended = dict(binding)
        extended[variable] = element
        return extended
    same = isinstance(existing, type(element)) and existing.id == element.id
    return binding if same else None


def _match_pattern(graph: PropertyGraph, pattern: Pattern, seed: Binding) -> Iterator[Binding]:
    """All ways to embed a linear pattern into the graph, extending a seed binding."""
    first = pattern.nodes[0]

    start_candidates: List[NodeRecord]
    if first.variable is not None and first.variable in seed:
        bound = seed[first.variable]
        if not isinstance(bound, NodeRecord):
            return
        start_candidates = [bound] if bound.id in graph.nodes else []
    else:
        start_candidates = [graph.nodes[i] for i in sorted(graph.nodes)]

    def extend(position: int, node: NodeRecord, binding: Binding) -> Iterator[Binding]:
        if position == len(pattern.edges):
            yield binding
            return
        edge_atom = pattern.edges[position]
        next_atom = pattern.nodes[position + 1]
        if edge_atom.direction == OUT:
            edge_ids = graph._out.get(node.id, ())
        else:
            edge_ids = graph._in.get(node.id, ())
        for edge_id in sorted(edge_ids):
            edge = graph.edges[edge_id]
            if edge_atom.relation is not None and edge.relation != edge_atom.relation:
                continue
            with_edge = _bind(binding, edge_atom.variable, edge)
            if with_edge is None:
                continue
            neighbor_id = edge.target if edge_atom.direction == OUT else edge.source
            neighbor = graph.nodes[neighbor_id]
            if not _node_matches(neighbor, next_atom):
                continue
            with_node = _bind(with_edge, next_atom.variable, neighbor)
            if with_node is None:
                continue
            yield from extend(position + 1, neighbor, with_node)

    for start in start_candidates:
        if not _node_matches(start, first):
            continue
        binding = _bind(seed, first.variable, start)
        if binding is None:
            continue
        yield from extend(0, start, binding)


def _passes_where(binding: Binding, comparisons: Sequence[Comparison]) -> bool:
    for comparison in comparisons:
        element = binding.get(comparison.ref.variable)
        if element is None:
            return False
        actual = _element_property(element, comparison.ref.key)
        if actual is None:
            return False  # missing values satisfy no comparison
        equal = _scalar_equal(actual, comparison.value)
        if comparison.op == "=" and not equal:
            return False
        if comparison.op == "<>" and equal:
            return False
    return True


def _evaluate_matches(graph: PropertyGraph, clauses: Sequence[MatchClause]) -> List[Binding]:
    bindings: List[Binding] = [{}]
    for clause in clauses:
        next_bindings: List[Binding] = []
        for seed in bindings:
            for candidate in _match_pattern(graph, clause.pattern, seed):
                if clause.where is None or _passes_where(candidate, clause.where.comparisons):
                    next_bindings.append(candidate)
        bindings = next_bindings
        if not bindings:
            break
    return bindings


def _project(binding: Binding, projections: Sequence[Projection]) -> Tuple[Value, ...]:
    row: List[Value] = []
    for projection in projections:
        expr = projection.expression
        if isinstance(expr, PropertyRef):
            element = binding[expr.variable]
            row.append(_element_property(element, expr.key))
        else:
            element = binding[expr]
            if isinstance(element, NodeRecord):
                row.append(NodeRef(id=element.id, name=element.name, label=element.label))
            else:
                # edge-valued projection: the relation name is its scalar face
                row.append(element.relation)
    return tuple(row)


def _execute_read(graph: PropertyGraph, ast: QueryAst) -> ResultTable:
    return_clause = ast.clauses[-1]
    assert isinstance(return_clause, ReturnClause)
    with graph.lock.read_locked():
        bindings = _evaluate_matches(graph, ast.match_clauses())
        seen = set()
        rows: List[Tuple[Value, ...]] = []
        for binding in bindings:
            row = _project(binding, return_clause.projections)
            key = tuple(_dedup_key(v) for v in row)
            if key in seen:
                continue
            seen.add(key)
            rows.append(row)
    rows.sort(key=lambda row: tuple(render_value(v) for v in row))
    if return_clause.limit is not None:
        rows = rows[: return_clause.limit]
    columns = [p.column_name() for p in return_clause.projections]
    return ResultTable(columns=columns, rows=rows)


def _atom_creation_fields(atom: NodeAtom) -> Tuple[str, str, Dict[str, Scalar]]:
    props = dict(atom.properties)
    name = props.pop("name", None)
    if not isinstance(name, str) or not name.strip():
        raise ExecutionError("node creation requires a string 'name' property")
    if atom.label is None:
        raise ExecutionError("node creation requires a label")
    return name, atom.label, props


def _execute_create(graph: PropertyGraph, pattern: Pattern, summary: MutationSummary) -> None:
    node_ids: List[str] = []
    for atom in pattern.nodes:
        name, label, props = _atom_creation_fields(atom)
        outcome = graph.upsert_node(name, label, props)
        if outcome.created:
            summary.nodes_created += 1
        node_ids.append(outcome.id)
    for index, edge_atom in enumerate(pattern.edges):
        if edge_atom.relation is None:
            raise ExecutionError("edge creation requires a relation name")
        if edge_atom.direction == OUT:
            source, target = node_ids[index], node_ids[index + 1]
        else:
            source, target = node_ids[index + 1], node_ids[index]
        outcome = graph.upsert_edge(source, edge_atom.relation, target)
        if outcome.created:
            summary.edges_created += 1


def _execute_delete(
    graph: PropertyGraph,
    ast: QueryAst,
    delete_clauses: Sequence[DeleteClause],
    summary: MutationSummary,
) -> None:
    bindings = _evaluate_matches(graph, ast.match_clauses())
    node_targets: Dict[str, bool] = {}  # id -> detach
    edge_targets: List[str] = []
    for binding in bindings:
        for clause in delete_clauses:
            element = binding[clause.variable]
            if isinstance(element, NodeRecord):
                node_targets[element.id] = node_targets.get(element.id, False) or clause.detach
            else:
                if element.id not in edge_targets:
                    edge_targets.append(element.id)

    # validate before mutating so failures leave the graph untouched
    doomed_edges = set(edge_targets)
    for node_id, detach in node_targets.items():
        if detach:
            doomed_edges |= graph._out.get(node_id, set()) | graph._in.get(node_id, set())
    for node_id, detach in sorted(node_targets.items()):
        if detach:
            continue
        incident = graph._out.get(node_id, set()) | graph._in.get(node_id, set())
        if incident - doomed_edges:
            name = graph.nodes[node_id].name
            raise ExecutionError(
                f"cannot delete node {name!r}: it still has relationships (use DETACH DELETE)"
            )

    for edge_id in sorted(edge_targets):
        if edge_id in graph.edges:
            graph.delete_edge(edge_id)
            summary.edges_deleted += 1
    for node_id in sorted(node_targets):
        if node_id in graph.nodes:
            summary.edges_deleted += graph.delete_node(node_id)
            summary.nodes_deleted += 1


def _execute_write(graph: PropertyGraph, ast: QueryAst) -> MutationSummary:
    summary = MutationSummary()
    with graph.lock.write_locked():
        delete_clauses = [c for c in ast.clauses if isinstance(c, DeleteClause)]
        if delete_clauses:
            _execute_delete(graph, ast, delete_clauses, summary)
            return summary
        for clause in ast.clauses:
            if isinstance(clause, (CreateClause, MergeClause)):
                _execute_create(graph, clause.pattern, summary)
    return summary


def execute(graph: PropertyGraph, ast: QueryAst) -> Union[ResultTable, MutationSummary]:
    """Run a parsed query. Read queries yield a ResultTable, writes a MutationSummary."""
    if ast.is_read():
        return _execute_read(graph, ast)
    return _execute_write(graph, ast)
