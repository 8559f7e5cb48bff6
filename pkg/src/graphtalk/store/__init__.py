"""Embedded property-graph store: records, graph, locks, persistence."""

from .fileio import load_graph, save_graph
from .graph import (
    EdgeRecord,
    MutationSummary,
    NodeRecord,
    PropertyGraph,
    Scalar,
    SELF_LOOP_RELATION,
    UpsertOutcome,
    normalize_name,
    validate_properties,
)
from .locks import ReadWriteLock

__all__ = [
    "EdgeRecord",
    "MutationSummary",
    "NodeRecord",
    "PropertyGraph",
    "ReadWriteLock",
    "Scalar",
    "SELF_LOOP_RELATION",
    "UpsertOutcome",
    "load_graph",
    "normalize_name",
    "save_graph",
    "validate_properties",
]
