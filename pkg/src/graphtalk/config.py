"""Application configuration.

A config is a flat JSON object. Loading is strict: unknown keys, wrong types,
and out-of-range values are all rejected up front so a typo in a deployment
file fails at startup instead of surfacing as odd runtime behaviour.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import Any, Dict, Optional

from graphtalk.errors import InvalidConfigError

BACKEND_KINDS = ("mock", "http")


@dataclass
class AppConfig:
    """Validated settings for the service, CLI, and benchmark harness."""

    backend: str = "mock"
    endpoint: str = ""
    model: str = ""
    api_key_env: str = ""
    mock_script: Optional[str] = None
    graph_path: Optional[str] = None
    trace_dir: Optional[str] = None
    ui_origin: str = "*"
    ui_dir: Optional[str] = None
    port: int = 8030
    link_threshold: float = 0.60
    max_react_steps: int = 5
    max_hops: int = 1
    history_window: int = 6
    suggestion_k: int = 3
    idea_radius: int = 1
    temperature: float = 0.0
    bench_parallelism: int = 1
    exec_success_floor: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)


_FIELDS = {f.name: f for f in dataclasses.fields(AppConfig)}

# Fields that accept either a string or null.
_OPTIONAL_STR = {"mock_script", "graph_path", "trace_dir", "ui_dir"}


def _check_type(key: str, value: Any) -> None:
    field = _FIELDS[key]
    if key in _OPTIONAL_STR:
        if value is not None and not isinstance(value, str):
            raise InvalidConfigError(f"'{key}' must be a string or null")
        return
    if field.type in ("str", str):
        if not isinstance(value, str):
            raise InvalidConfigError(f"'{key}' must be a string")
    elif field.type in ("int", int):
        # bool is an int subclass; reject it explicitly.
        if not isinstance(value, int) or isinstance(value, bool):
            raise InvalidConfigError(f"'{key}' must be an integer")
    elif field.type in ("float", float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InvalidConfigError(f"'{key}' must be a number")


def _check_ranges(config: AppConfig) -> None:
    if config.backend not in BACKEND_KINDS:
        raise InvalidConfigError(
            f"'backend' must be one of {list(BACKEND_KINDS)}, got {config.backend!r}"
        )
    if config.backend == "http" and not config.endpoint:
        raise InvalidConfigError("'endpoint' is required when backend is 'http'")
    if not 0.0 <= config.link_threshold <= 1.0:
        raise InvalidConfigError("'link_threshold' must be between 0 and 1")
    if config.max_react_steps < 1:
        raise InvalidConfigError("'max_react_steps' must be at least 1")
    if not 1 <= config.max_hops <= 3:
        raise InvalidConfigError("'max_hops' must be between 1 and 3")
    if config.history_window < 0:
        raise InvalidConfigError("'history_window' must not be negative")
    if config.suggestion_k < 1:
        raise InvalidConfigError("'suggestion_k' must be at least 1")
    if config.idea_radius not in (1, 2):
        raise InvalidConfigError("'idea_radius' must be 1 or 2")
    if config.temperature < 0.0:
        raise InvalidConfigError("'temperature' must not be negative")
    if config.bench_parallelism < 1:
        raise InvalidConfigError("'bench_parallelism' must be at least 1")
    if not 0.0 <= config.exec_success_floor <= 1.0:
        raise InvalidConfigError("'exec_success_floor' must be between 0 and 1")
    if not 1 <= config.port <= 65535:
        raise InvalidConfigError("'port' must be a valid TCP port")


def config_from_dict(data: Any) -> AppConfig:
    """Build an AppConfig from a parsed JSON object, strictly."""
    if not isinstance(data, dict):
        raise InvalidConfigError("config must be a JSON object")
    unknown = sorted(set(data) - set(_FIELDS))
    if unknown:
        raise InvalidConfigError(f"unknown config keys: {', '.join(unknown)}")
    for key, value in data.items():
        _check_type(key, value)
    kwargs = dict(data)
    if "temperature" in kwargs:
        kwargs["temperature"] = float(kwargs["temperature"])
    for key in ("link_threshold", "exec_success_floor"):
        if key in kwargs:
            kwargs[key] = float(kwargs[key])
    config = AppConfig(**kwargs)
    _check_ranges(config)
    return config


def load_config(path: str) -> AppConfig:
    """Load and validate a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InvalidConfigError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(data)
