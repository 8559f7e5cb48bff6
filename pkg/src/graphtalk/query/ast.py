"""AST node types for the graph query language.

All nodes are frozen dataclasses so they hash and compare structurally,
which the round-trip tests (parse, render, parse again) rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..store.graph import Scalar

OUT = "out"
IN = "in"


@dataclass(frozen=True)
class NodeAtom:
    """One parenthesized node element: ``(var:Label {key: value, ...})``."""

    variable: Optional[str] = None
    label: Optional[str] = None
    properties: Tuple[Tuple[str, Scalar], ...] = ()


@dataclass(frozen=True)
class EdgeAtom:
    """One edge element: ``-[var:RELATION]->`` or ``<-[var:RELATION]-``."""

    variable: Optional[str] = None
    relation: Optional[str] = None
    direction: str = OUT


@dataclass(frozen=True)
class Pattern:
    """Linear path: nodes interleaved with edges, one more node than edges."""

    nodes: Tuple[NodeAtom, ...]
    edges: Tuple[EdgeAtom, ...] = ()

    def __post_init__(self) -> None:
        if len(self.nodes) != len(self.edges) + 1:
            raise ValueError("pattern must alternate node, edge, node, ...")

    def variables(self) -> Tuple[str, ...]:
        seen = []
        for atom in self.nodes + self.edges:
            if atom.variable and atom.variable not in seen:
                seen.append(atom.variable)
        return tuple(seen)


@dataclass(frozen=True)
class PropertyRef:
    variable: str
    key: str


@dataclass(frozen=True)
class Comparison:
    """``var.key = literal`` or ``var.key <> literal``."""

    ref: PropertyRef
    op: str  # "=" or "<>"
    value: Scalar


@dataclass(frozen=True)
class WherePredicate:
    """Conjunction of comparisons (joined by AND)."""

    comparisons: Tuple[Comparison, ...]


@dataclass(frozen=True)
class MatchClause:
    pattern: Pattern
    where: Optional[WherePredicate] = None


@dataclass(frozen=True)
class CreateClause:
    pattern: Pattern


@dataclass(frozen=True)
class MergeClause:
    pattern: Pattern  # restricted to a single node atom by the parser


@dataclass(frozen=True)
class DeleteClause:
    variable: str
    detach: bool = False


@dataclass(frozen=True)
class Projection:
    """A bare variable or a property reference in RETURN."""

    expression: Union[str, PropertyRef]

    def column_name(self) -> str:
        if isinstance(self.expression, PropertyRef):
            return f"{self.expression.variable}.{self.expression.key}"
        return self.expression


@dataclass(frozen=True)
class ReturnClause:
    projections: Tuple[Projection, ...]
    limit: Optional[int] = None


Clause = Union[MatchClause, CreateClause, MergeClause, DeleteClause, ReturnClause]


@dataclass(frozen=True)
class QueryAst:
    clauses: Tuple[Clause, ...] = field(default_factory=tuple)

    def is_read(self) -> bool:
        return any(isinstance(c, ReturnClause) for c in self.clauses)

    def is_write(self) -> bool:
        return any(isinstance(c, (CreateClause, MergeClause, DeleteClause)) for c in self.clauses)

    def match_clauses(self) -> Tuple[MatchClause, ...]:
        return tuple(c for c in self.clauses if isinstance(c, MatchClause))
