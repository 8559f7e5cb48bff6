"""Independent oracles and random generators shared by the test suite.

The read-query oracle re-derives results from first principles: it
enumerates every assignment of pattern node atoms to graph nodes (and edge
atoms to connecting edges), filters by the declared constraints, and only
then projects. It never calls the executor's matching code, so agreement
between the two is meaningful evidence.
"""

import itertools
import random
from typing import Dict, List, Optional, Tuple

from graphtalk.query import render_value
from graphtalk.query.ast import (
    Comparison,
    CreateClause,
    DeleteClause,
    MatchClause,
    MergeClause,
    EdgeAtom,
    NodeAtom,
    Pattern,
    Projection,
    PropertyRef,
    QueryAst,
    ReturnClause,
    WherePredicate,
)
from graphtalk.query.executor import NodeRef
from graphtalk.store import PropertyGraph

RELATIONS = ["PREREQUISITE_OF", "RELATED_TO", "SUBTOPIC_OF"]
LABELS = ["Concept", "Topic"]


# --- random graph ---


def random_graph(rng: random.Random, min_nodes: int = 5, max_nodes: int = 50) -> PropertyGraph:
    n = rng.randint(min_nodes, max_nodes)
    g = PropertyGraph()
    ids = []
    for i in range(n):
        props = {}
        if rng.random() < 0.6:
            props["level"] = rng.randint(1, 3)
        if rng.random() < 0.25:
            props["core"] = rng.random() < 0.5
        ids.append(g.upsert_node(f"c{i}", rng.choice(LABELS), props).id)
    target_edges = rng.randint(n // 2, 2 * n)
    for _ in range(target_edges):
        if n < 2:
            break
        a, b = rng.sample(ids, 2)
        g.upsert_edge(a, rng.choice(RELATIONS), b)
    return g


# --- random read queries ---


def _random_node_atom(rng: random.Random, graph: PropertyGraph, variable: Optional[str]) -> NodeAtom:
    label = rng.choice(LABELS + [None, None])
    props: List[Tuple[str, object]] = []
    roll = rng.random()
    if roll < 0.35:
        if rng.random() < 0.75 and graph.nodes:
            name = rng.choice(sorted(n.name for n in graph.nodes.values()))
        else:
            name = "no such node"
        props.append(("name", name))
    elif roll < 0.5:
        props.append(("level", rng.randint(1, 4)))
    return NodeAtom(variable=variable, label=label, properties=tuple(props))


def _random_edge_atom(rng: random.Random, index: int) -> EdgeAtom:
    relation = rng.choice(RELATIONS + [None, "NO_SUCH_REL"])
    variable = f"r{index}" if rng.random() < 0.3 else None
    direction = rng.choice(["out", "in"])
    return EdgeAtom(variable=variable, relation=relation, direction=direction)


def random_read_query(rng: random.Random, graph: PropertyGraph) -> QueryAst:
    """A random MATCH(+WHERE)...RETURN query whose variables are all bound."""
    atom_count = rng.choice([1, 2, 2, 2, 3])
    variables = ["a", "b", "c"][:atom_count]
    # sometimes leave a middle node anonymous
    named = [v if (i == 0 or rng.random() > 0.2) else None for i, v in enumerate(variables)]
    nodes = tuple(_random_node_atom(rng, graph, named[i]) for i in range(atom_count))
    edges = tuple(_random_edge_atom(rng, i) for i in range(atom_count - 1))
    pattern = Pattern(nodes=nodes, edges=edges)

    bound_nodes = [v for v in named if v]
    bound_edges = [e.variable for e in edges if e.variable]
    where = None
    if rng.random() < 0.4:
        comparisons = []
        for _ in range(rng.randint(1, 2)):
            if bound_edges and rng.random() < 0.3:
                var = rng.choice(bound_edges)
                key = "relation"
                value = rng.choice(RELATIONS)
            else:
                var = rng.choice(bound_nodes)
                key = rng.choice(["name", "label", "level"])
                if key == "name":
                    value = rng.choice(sorted(n.name for n in graph.nodes.values()) or ["x"])
                elif key == "label":
                    value = rng.choice(LABELS)
                else:
                    value = rng.randint(1, 4)
            comparisons.append(Comparison(ref=PropertyRef(var, key), op=rng.choice(["=", "<>"]), value=value))
        where = WherePredicate(comparisons=tuple(comparisons))

    clauses: List[object] = [MatchClause(pattern=pattern, where=where)]
    if rng.random() < 0.12 and bound_nodes:
        # second MATCH sharing one variable (a join)
        shared = rng.choice(bound_nodes)
        extra = Pattern(
            nodes=(
                NodeAtom(variable=shared),
                _random_node_atom(rng, graph, "j"),
            ),
            edges=(_random_edge_atom(rng, 7),),
        )
        clauses.append(MatchClause(pattern=extra, where=None))
        bound_nodes.append("j")

    candidates = bound_nodes + bound_edges
    projections = []
    for _ in range(rng.randint(1, 3)):
        var = rng.choice(candidates)
        if var in bound_edges:
            expr = PropertyRef(var, "relation") if rng.random() < 0.5 else var
        elif rng.random() < 0.7:
            expr = PropertyRef(var, rng.choice(["name", "label", "level", "id"]))
        else:
            expr = var
        projections.append(Projection(expression=expr))
    limit = rng.choice([None, None, None, 1, 3, 10])
    clauses.append(ReturnClause(projections=tuple(projections), limit=limit))
    return QueryAst(clauses=tuple(clauses))


# --- the oracle ---


def _oracle_node_property(node, key):
    if key == "name":
        return node.name
    if key == "label":
        return node.label
    if key == "id":
        return node.id
    return node.properties.get(key)


def _oracle_edge_property(edge, key):
    if key == "relation":
        return edge.relation
    if key == "id":
        return edge.id
    return edge.properties.get(key)


def _oracle_equal(a, b) -> bool:
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    return a == b


def _oracle_atom_ok(node, atom: NodeAtom) -> bool:
    if atom.label is not None and node.label != atom.label:
        return False
    for key, wanted in atom.properties:
        actual = _oracle_node_property(node, key)
        if actual is None or not _oracle_equal(actual, wanted):
            return False
    return True


def _enumerate_pattern(graph: PropertyGraph, pattern: Pattern, pair_index) -> List[Dict[str, object]]:
    """Every embedding of the pattern, by brute force over node tuples."""
    node_ids = sorted(graph.nodes)
    results: List[Dict[str, object]] = []
    k = len(pattern.nodes)
    for assignment in itertools.product(node_ids, repeat=k):
        nodes = [graph.nodes[i] for i in assignment]
        if not all(_oracle_atom_ok(node, atom) for node, atom in zip(nodes, pattern.nodes)):
            continue
        # per-hop candidate edges
        hop_choices: List[List[object]] = []
        feasible = True
        for i, edge_atom in enumerate(pattern.edges):
            if edge_atom.direction == "out":
                key = (assignment[i], assignment[i + 1])
            else:
                key = (assignment[i + 1], assignment[i])
            candidates = [e for e in pair_index.get(key, []) if edge_atom.relation in (None, e.relation)]
            if not candidates:
                feasible = False
                break
            hop_choices.append(candidates)
        if not feasible:
            continue
        for edge_pick in itertools.product(*hop_choices):
            env: Dict[str, object] = {}
            conflict = False
            for node, atom in zip(nodes, pattern.nodes):
                if atom.variable is None:
                    continue
                prior = env.get(atom.variable)
                if prior is not None and (type(prior) is not type(node) or prior.id != node.id):
                    conflict = True
                    break
                env[atom.variable] = node
            if conflict:
                continue
            for edge, atom in zip(edge_pick, pattern.edges):
                if atom.variable is None:
                    continue
                prior = env.get(atom.variable)
                if prior is not None and (type(prior) is not type(edge) or prior.id != edge.id):
                    conflict = True
                    break
                env[atom.variable] = edge
            if not conflict:
                results.append(env)
    return results


def _join(left: List[Dict[str, object]], right: List[Dict[str, object]]) -> List[Dict[str, object]]:
    out = []
    for a in left:
        for b in right:
            merged = dict(a)
            ok = True
            for var, element in b.items():
                prior = merged.get(var)
                if prior is not None and (type(prior) is not type(element) or prior.id != element.id):
                    ok = False
                    break
                merged[var] = element
            if ok:
                out.append(merged)
    return out


def _oracle_where_ok(env: Dict[str, object], where: Optional[WherePredicate]) -> bool:
    if where is None:
        return True
    from graphtalk.store.graph import NodeRecord

    for comparison in where.comparisons:
        element = env.get(comparison.ref.variable)
        if element is None:
            return False
        if isinstance(element, NodeRecord):
            actual = _oracle_node_property(element, comparison.ref.key)
        else:
            actual = _oracle_edge_property(element, comparison.ref.key)
        if actual is None:
            return False
        equal = _oracle_equal(actual, comparison.value)
        if comparison.op == "=" and not equal:
            return False
        if comparison.op == "<>" and equal:
            return False
    return True


def _oracle_dedup_key(value):
    if value is None:
        return ("null",)
    if isinstance(value, NodeRef):
        return ("node", value.id)
    if isinstance(value, bool):
        return ("bool", value)
    return (type(value).__name__, value)


def oracle_execute_read(graph: PropertyGraph, ast: QueryAst):
    """(columns, rows) for a read query, derived by exhaustive enumeration."""
    from graphtalk.store.graph import NodeRecord

    pair_index: Dict[Tuple[str, str], list] = {}
    for edge in graph.edges.values():
        pair_index.setdefault((edge.source, edge.target), []).append(edge)

    matches = [c for c in ast.clauses if isinstance(c, MatchClause)]
    envs: List[Dict[str, object]] = [{}]
    for clause in matches:
        embeddings = _enumerate_pattern(graph, clause.pattern, pair_index)
        envs = _join(envs, embeddings)
    for clause in matches:
        envs = [e for e in envs if _oracle_where_ok(e, clause.where)]

    return_clause = ast.clauses[-1]
    assert isinstance(return_clause, ReturnClause)
    rows = []
    seen = set()
    for env in envs:
        row = []
        for projection in return_clause.projections:
            expr = projection.expression
            if isinstance(expr, PropertyRef):
                element = env[expr.variable]
                if isinstance(element, NodeRecord):
                    row.append(_oracle_node_property(element, expr.key))
                else:
                    row.append(_oracle_edge_property(element, expr.key))
            else:
                element = env[expr]
                if isinstance(element, NodeRecord):
                    row.append(NodeRef(id=element.id, name=element.name, label=element.label))
                else:
                    row.append(element.relation)
        row = tuple(row)
        key = tuple(_oracle_dedup_key(v) for v in row)
        if key in seen:
            continue
        seen.add(key)
        rows.append(row)
    rows.sort(key=lambda row: tuple(render_value(v) for v in row))
    if return_clause.limit is not None:
        rows = rows[: return_clause.limit]
    columns = [p.column_name() for p in return_clause.projections]
    return columns, rows


# --- random ASTs for round-trip checks ---


_IDENTS = ["a", "b", "c", "n", "m", "x1", "y_2", "Node", "CamelCase"]
_KEYS = ["name", "level", "label", "weight", "core"]


def _random_scalar(rng: random.Random):
    roll = rng.random()
    if roll < 0.45:
        alphabet = "abcXYZ '_-019é"
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 8)))
    if roll < 0.65:
        return rng.randint(-999, 999)
    if roll < 0.85:
        return round(rng.uniform(-50, 50), 3) + 0.5  # ensure a fractional part
    return rng.random() < 0.5


def _random_props(rng: random.Random) -> Tuple[Tuple[str, object], ...]:
    count = rng.choice([0, 0, 1, 1, 2])
    keys = rng.sample(_KEYS, count)
    return tuple((k, _random_scalar(rng)) for k in keys)


def _random_ast_node(rng: random.Random, variable: Optional[str]) -> NodeAtom:
    label = rng.choice(["Concept", "Topic", None])
    return NodeAtom(variable=variable, label=label, properties=_random_props(rng))


def random_ast(rng: random.Random) -> QueryAst:
    """A structurally valid random AST covering all clause kinds."""
    kind = rng.choice(["read", "read", "read", "create", "merge", "delete"])
    if kind == "merge":
        clauses = []
        for _ in range(rng.randint(1, 2)):
            props = _random_props(rng) or (("name", "Z"),)
            node = NodeAtom(variable=rng.choice(_IDENTS + [None]), label="Concept", properties=props)
            clauses.append(MergeClause(pattern=Pattern(nodes=(node,))))
        return QueryAst(clauses=tuple(clauses))
    if kind == "create":
        clauses = []
        for _ in range(rng.randint(1, 2)):
            length = rng.choice([1, 1, 2, 3])
            variables = [rng.choice(_IDENTS) if rng.random() < 0.5 else None for _ in range(length)]
            nodes = tuple(_random_ast_node(rng, v) for v in variables)
            edges = tuple(
                EdgeAtom(
                    variable=None if rng.random() < 0.8 else f"e{i}",
                    relation=rng.choice(RELATIONS + [None]),
                    direction=rng.choice(["out", "in"]),
                )
                for i in range(length - 1)
            )
            clauses.append(CreateClause(pattern=Pattern(nodes=nodes, edges=edges)))
        return QueryAst(clauses=tuple(clauses))
    if kind == "delete":
        length = rng.choice([1, 2])
        variables = ["a", "b"][:length]
        nodes = tuple(_random_ast_node(rng, v) for v in variables)
        edges = tuple(
            EdgeAtom(variable=None, relation=rng.choice(RELATIONS + [None]), direction=rng.choice(["out", "in"]))
            for _ in range(length - 1)
        )
        match = MatchClause(pattern=Pattern(nodes=nodes, edges=edges), where=None)
        delete = DeleteClause(variable=rng.choice(variables), detach=rng.random() < 0.5)
        return QueryAst(clauses=(match, delete))

    # read query over a tiny throwaway graph for name sampling
    scratch = PropertyGraph()
    for i in range(4):
        scratch.upsert_node(f"s{i}", "Concept", {"level": i})
    return random_read_query(rng, scratch)
