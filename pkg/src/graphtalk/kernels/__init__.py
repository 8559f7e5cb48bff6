"""Deterministic graph algorithms behind the six predefined chat tasks."""

from .kernels import (
    KernelResult,
    concept_clustering,
    idea_context,
    path_search,
    prerequisite_prediction,
    relation_judgment,
    subgraph_completion,
)

__all__ = [
    "KernelResult",
    "concept_clustering",
    "idea_context",
    "path_search",
    "prerequisite_prediction",
    "relation_judgment",
    "subgraph_completion",
]
