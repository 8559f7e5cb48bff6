"""Construction helpers shared by the CLI and the HTTP service.

Each helper turns one slice of an AppConfig into a live object: a loaded
graph, a chat backend, pipeline settings, or a full pipeline context.
"""

from __future__ import annotations

from typing import Optional

from graphtalk.config import AppConfig
from graphtalk.fixtures import demo_graph_path, mock_script_path
from graphtalk.llm import HttpBackend, MockBackend, load_mock_script
from graphtalk.pipeline import PipelineContext, PipelineSettings, TraceStore
from graphtalk.store import PropertyGraph, load_graph


def build_graph(config: AppConfig) -> PropertyGraph:
    """Load the configured graph file, or the bundled demo graph."""
    path = config.graph_path or demo_graph_path()
    return load_graph(path)


def build_backend(config: AppConfig):
    """Mock backend from a script file, or an OpenAI-style HTTP backend."""
    if config.backend == "mock":
        script = load_mock_script(config.mock_script or mock_script_path())
        return MockBackend(script)
    return HttpBackend(
        endpoint=config.endpoint,
        model=config.model,
        api_key_env=config.api_key_env or None,
    )


def build_settings(config: AppConfig) -> PipelineSettings:
    return PipelineSettings(
        link_threshold=config.link_threshold,
        max_react_steps=config.max_react_steps,
        max_hops=config.max_hops,
        history_window=config.history_window,
        suggestion_k=config.suggestion_k,
        idea_radius=config.idea_radius,
        temperature=config.temperature,
    )


def build_context(
    config: AppConfig,
    graph: Optional[PropertyGraph] = None,
    backend=None,
    trace_store: Optional[TraceStore] = None,
) -> PipelineContext:
    """Assemble a pipeline context, letting callers inject pieces for tests."""
    if graph is None:
        graph = build_graph(config)
    if backend is None:
        backend = build_backend(config)
    if trace_store is None:
        trace_store = TraceStore(config.trace_dir)
    return PipelineContext(
        graph=graph,
        backend=backend,
        settings=build_settings(config),
        trace_store=trace_store,
    )
