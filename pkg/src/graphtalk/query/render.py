"""Canonical text rendering for query ASTs.

The renderer is the inverse of the parser up to formatting: for any valid
AST, parse(render(ast)) is structurally equal to ast. Strings use single
quotes with '' escaping; booleans render lowercase; edges always render in
bracket form even when parsed from the -- arrow shorthand.
"""

from __future__ import annotations

from typing import Union

from ..store.graph import Scalar
from .ast import (
    Comparison,
    CreateClause,
    DeleteClause,
    EdgeAtom,
    IN,
    MatchClause,
    MergeClause,
    NodeAtom,
    Pattern,
    Projection,
    PropertyRef,
    QueryAst,
    ReturnClause,
)


def render_scalar(value: Scalar) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return "'" + value.replace("'", "''") + "'"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_node(atom: NodeAtom) -> str:
    inner = atom.variable or ""
    if atom.label is not None:
        inner += f":{atom.label}"
    if atom.properties:
        body = ", ".join(f"{key}: {render_scalar(value)}" for key, value in atom.properties)
        inner += ("" if not inner else " ") + "{" + body + "}"
    return f"({inner})"


def _render_edge(atom: EdgeAtom) -> str:
    inner = atom.variable or ""
    if atom.relation is not None:
        inner += f":{atom.relation}"
    body = f"[{inner}]"
    if atom.direction == IN:
        return f"<-{body}-"
    return f"-{body}->"


def render_pattern(pattern: Pattern) -> str:
    pieces = [_render_node(pattern.nodes[0])]
    for edge, node in zip(pattern.edges, pattern.nodes[1:]):
        pieces.append(_render_edge(edge))
        pieces.append(_render_node(node))
    return "".join(pieces)


def _render_comparison(comparison: Comparison) -> str:
    ref = f"{comparison.ref.variable}.{comparison.ref.key}"
    return f"{ref} {comparison.op} {render_scalar(comparison.value)}"


def _render_projection(projection: Projection) -> str:
    expr = projection.expression
    if isinstance(expr, PropertyRef):
        return f"{expr.variable}.{expr.key}"
    return expr


def render(ast: QueryAst) -> str:
    parts = []
    for clause in ast.clauses:
        if isinstance(clause, MatchClause):
            text = f"MATCH {render_pattern(clause.pattern)}"
            if clause.where is not None:
                conditions = " AND ".join(_render_comparison(c) for c in clause.where.comparisons)
                text += f" WHERE {conditions}"
            parts.append(text)
        elif isinstance(clause, CreateClause):
            parts.append(f"CREATE {render_pattern(clause.pattern)}")
        elif isinstance(clause, MergeClause):
            parts.append(f"MERGE {render_pattern(clause.pattern)}")
        elif isinstance(clause, DeleteClause):
            keyword = "DETACH DELETE" if clause.detach else "DELETE"
            parts.append(f"{keyword} {clause.variable}")
        elif isinstance(clause, ReturnClause):
            text = "RETURN " + ", ".join(_render_projection(p) for p in clause.projections)
            if clause.limit is not None:
                text += f" LIMIT {clause.limit}"
            parts.append(text)
        else:  # pragma: no cover
            raise TypeError(f"unknown clause type {type(clause).__name__}")
    return " ".join(parts)
