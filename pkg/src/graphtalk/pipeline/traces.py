"""Execution traces: per-stage audit entries plus file-backed persistence."""

import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from graphtalk.errors import IoFailureError


@dataclass
class TraceEntry:
    stage: str
    prompt: str = ""
    output: str = ""
    artifact: object = None
    duration_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "prompt": self.prompt,
            "output": self.output,
            "artifact": self.artifact,
            "duration_ms": self.duration_ms,
        }


@dataclass
class AgentTrace:
    trace_id: str
    query: str
    task_type: str = ""
    answer: Optional[str] = None
    created_at: float = field(default_factory=time.time)
    entries: List[TraceEntry] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    failed_step: Optional[dict] = None

    def add(
        self,
        stage: str,
        prompt: str = "",
        output: str = "",
        artifact: object = None,
        duration_ms: float = 0.0,
    ) -> TraceEntry:
        entry = TraceEntry(stage=stage, prompt=prompt, output=output, artifact=artifact, duration_ms=duration_ms)
        self.entries.append(entry)
        return entry

    def to_dict(self) -> dict:
        return {
            "trace_id": self.trace_id,
            "query": self.query,
            "task_type": self.task_type,
            "answer": self.answer,
            "created_at": self.created_at,
            "entries": [entry.to_dict() for entry in self.entries],
            "warnings": list(self.warnings),
            "failed_step": self.failed_step,
        }

    def comparison_form(self) -> dict:
        """to_dict with wall-clock fields stripped, for determinism checks."""
        form = self.to_dict()
        del form["created_at"]
        for entry in form["entries"]:
            del entry["duration_ms"]
        return form


class TraceStore:
    """Keeps traces in memory and, when a directory is set, one JSON file each."""

    def __init__(self, directory: Optional[str] = None):
        self.directory = directory
        self._memory: Dict[str, dict] = {}
        if directory:
            os.makedirs(directory, exist_ok=True)

    def _path(self, trace_id: str) -> str:
        return os.path.join(self.directory, f"{trace_id}.json")

    def save(self, trace: AgentTrace) -> None:
        payload = trace.to_dict()
        self._memory[trace.trace_id] = payload
        if not self.directory:
            return
        try:
            fd, tmp_path = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, ensure_ascii=False, indent=2, sort_keys=True)
            os.replace(tmp_path, self._path(trace.trace_id))
        except OSError as exc:
            raise IoFailureError(f"cannot persist trace {trace.trace_id}: {exc}") from exc

    def get(self, trace_id: str) -> Optional[dict]:
        if trace_id in self._memory:
            return self._memory[trace_id]
        if not self.directory:
            return None
        path = self._path(trace_id)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as handle:
                return json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise IoFailureError(f"cannot read trace {trace_id}: {exc}") from exc
