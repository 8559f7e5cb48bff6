"""graphtalk: knowledge-graph chat toolkit.

An embedded property-graph store, a small Cypher-flavored query language,
an LLM gateway with a scriptable offline backend, concept linking, a staged
agent pipeline for graph question answering, an HTTP service, and a
benchmark harness.
"""

__version__ = "0.1.0"

from graphtalk.config import AppConfig, config_from_dict, load_config
from graphtalk.wiring import build_backend, build_context, build_graph, build_settings

__all__ = [
    "AppConfig",
    "build_backend",
    "build_context",
    "build_graph",
    "build_settings",
    "config_from_dict",
    "load_config",
]
