"""Paths to the bundled fixture data shipped inside the package."""

from importlib import resources


def _data_path(name: str) -> str:
    return str(resources.files("graphtalk") / "data" / name)


def demo_graph_path() -> str:
    """Curriculum graph used by the CLI defaults and the test suite."""
    return _data_path("demo_graph.jsonl")


def benchmark_fixture_path() -> str:
    """Seventy labeled queries, ten per task kind."""
    return _data_path("benchmark_fixture.jsonl")


def mock_script_path() -> str:
    """Mock backend script that answers every fixture query correctly."""
    return _data_path("mock_script.json")
