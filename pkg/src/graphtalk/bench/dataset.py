"""Benchmark dataset: JSONL records of labeled queries."""

import json
from dataclasses import dataclass, field
from typing import List, Optional

from graphtalk.errors import IoFailureError, MalformedRecordError
from graphtalk.pipeline import INTENT_KINDS

_RECORD_FIELDS = {"query", "gold_task", "gold_concepts"}


@dataclass(frozen=True)
class BenchmarkRecord:
    query: str
    gold_task: str
    gold_concepts: Optional[List[str]] = None

    def to_dict(self) -> dict:
        out = {"query": self.query, "gold_task": self.gold_task}
        if self.gold_concepts is not None:
            out["gold_concepts"] = list(self.gold_concepts)
        return out


def _record_from_dict(data: dict, line_number: int) -> BenchmarkRecord:
    unknown = set(data) - _RECORD_FIELDS
    if unknown:
        raise MalformedRecordError(line_number, f"unknown record fields: {sorted(unknown)}")
    query = data.get("query")
    if not isinstance(query, str) or not query.strip():
        raise MalformedRecordError(line_number, "query must be a non-empty string")
    gold_task = data.get("gold_task")
    if gold_task not in INTENT_KINDS:
        raise MalformedRecordError(line_number, f"gold_task must be one of {list(INTENT_KINDS)}")
    gold_concepts = data.get("gold_concepts")
    if gold_concepts is not None:
        if not isinstance(gold_concepts, list) or not all(
            isinstance(c, str) and c.strip() for c in gold_concepts
        ):
            raise MalformedRecordError(line_number, "gold_concepts must be a list of non-empty strings")
    return BenchmarkRecord(query=query, gold_task=gold_task, gold_concepts=gold_concepts)


def load_dataset(path: str) -> List[BenchmarkRecord]:
    """Read one JSON record per line; blank lines are allowed and skipped."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise IoFailureError(f"cannot read dataset {path!r}: {exc}") from exc
    records: List[BenchmarkRecord] = []
    for index, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            data = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRecordError(index, f"invalid JSON: {exc.msg}")
        if not isinstance(data, dict):
            raise MalformedRecordError(index, "record must be a JSON object")
        records.append(_record_from_dict(data, index))
    return records
