"""Cypher-flavored query language: parse, render, execute."""

from .ast import (
    Comparison,
    CreateClause,
    DeleteClause,
    EdgeAtom,
    MatchClause,
    MergeClause,
    NodeAtom,
    Pattern,
    Projection,
    PropertyRef,
    QueryAst,
    ReturnClause,
    WherePredicate,
)
from .executor import MutationSummary, NodeRef, ResultTable, execute, render_value
from .parser import parse
from .render import render, render_scalar

__all__ = [
    "Comparison",
    "CreateClause",
    "DeleteClause",
    "EdgeAtom",
    "MatchClause",
    "MergeClause",
    "MutationSummary",
    "NodeAtom",
    "NodeRef",
    "Pattern",
    "Projection",
    "PropertyRef",
    "QueryAst",
    "ResultTable",
    "ReturnClause",
    "WherePredicate",
    "execute",
    "parse",
    "render",
    "render_scalar",
    "render_value",
]
