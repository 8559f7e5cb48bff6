"""Benchmark execution: classify and run every record, then score it."""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from graphtalk.bench.dataset import BenchmarkRecord
from graphtalk.bench.metrics import Metrics, compute_metrics
from graphtalk.errors import GraphTalkError
from graphtalk.pipeline import (
    FREE_FORM,
    KERNEL_FOR_KIND,
    PipelineContext,
    classify_intent,
    run_chat,
)


def _is_str_list(value) -> bool:
    return isinstance(value, list) and all(isinstance(item, str) for item in value)


def _valid_relation_judgment(payload: dict) -> bool:
    connected = payload.get("connected")
    witness = payload.get("witness")
    if not isinstance(connected, bool):
        return False
    if not connected:
        return witness is None
    return (
        isinstance(witness, list)
        and len(witness) >= 1
        and all(
            isinstance(hop, dict) and {"from", "to", "relation", "direction"} <= set(hop)
            for hop in witness
        )
    )


def _valid_prerequisite(payload: dict) -> bool:
    items = payload.get("prerequisites")
    if not isinstance(items, list):
        return False
    return all(
        isinstance(item, dict)
        and isinstance(item.get("name"), str)
        and isinstance(item.get("id"), str)
        and isinstance(item.get("distance"), int)
        and item["distance"] >= 1
        for item in items
    )


def _valid_path(payload: dict) -> bool:
    found = payload.get("found")
    path = payload.get("path")
    if not isinstance(found, bool) or not _is_str_list(path):
        return False
    return found == (len(path) > 0)


def _valid_clustering(payload: dict) -> bool:
    clusters = payload.get("clusters")
    if not isinstance(clusters, list):
        return False
    seen: List[str] = []
    for cluster in clusters:
        if not isinstance(cluster, dict):
            return False
        members = cluster.get("members")
        if not _is_str_list(members) or cluster.get("size") != len(members):
            return False
        if not isinstance(cluster.get("label"), str):
            return False
        seen.extend(members)
    return len(seen) == len(set(seen))


def _valid_completion(payload: dict) -> bool:
    suggestions = payload.get("suggestions")
    if not isinstance(suggestions, list):
        return False
    for item in suggestions:
        if not isinstance(item, dict):
            return False
        if not _is_str_list(item.get("pair")) or len(item["pair"]) != 2:
            return False
        if not isinstance(item.get("common_neighbors"), int):
            return False
        if not isinstance(item.get("jaccard"), (int, float)):
            return False
    return True


def _valid_idea(payload: dict) -> bool:
    text = payload.get("text")
    count = payload.get("triple_count")
    if not isinstance(text, str) or not text.startswith("Seeds: "):
        return False
    return isinstance(count, int) and 0 <= count <= 200


_VALIDATORS = {
    "RELATION_JUDGMENT": _valid_relation_judgment,
    "PREREQUISITE_PREDICTION": _valid_prerequisite,
    "PATH_SEARCHING": _valid_path,
    "CONCEPT_CLUSTERING": _valid_clustering,
    "SUBGRAPH_COMPLETION": _valid_completion,
    "IDEA_HAMSTER": _valid_idea,
}


def validate_execution(gold_task: str, trace_dict: dict, answer: str) -> Tuple[bool, str]:
    """Strict execution check: completed, non-empty answer, gold-shaped payload."""
    if trace_dict.get("failed_step"):
        return False, "pipeline step failed"
    if not answer or not answer.strip():
        return False, "empty answer"
    if gold_task == FREE_FORM:
        return True, "ok"
    kernel = KERNEL_FOR_KIND[gold_task]
    artifact = None
    for entry in trace_dict.get("entries", []):
        stage = entry.get("stage", "")
        if stage.endswith(f":{kernel}"):
            artifact = entry.get("artifact")
            break
    if not isinstance(artifact, dict):
        return False, f"no {kernel} step in trace"
    payload = artifact.get("payload")
    if not isinstance(payload, dict) or not _VALIDATORS[gold_task](payload):
        return False, f"{kernel} payload does not validate"
    return True, "ok"


def _evaluate_record(context: PipelineContext, record: BenchmarkRecord) -> dict:
    log: Dict[str, object] = {
        "query": record.query,
        "gold_task": record.gold_task,
    }
    predicted = classify_intent(context.backend, record.query).kind
    log["predicted"] = predicted
    try:
        result = run_chat(context, record.query)
    except GraphTalkError as exc:
        log["exec_success"] = False
        log["exec_reason"] = f"{exc.code}: {exc}"
        log["trace_id"] = getattr(exc, "trace_id", None)
        return log
    ok, reason = validate_execution(record.gold_task, result.trace.to_dict(), result.answer)
    log["exec_success"] = ok
    log["exec_reason"] = reason
    log["trace_id"] = result.trace_id
    log["answer"] = result.answer
    return log


def run_benchmark(
    context: PipelineContext, records: Sequence[BenchmarkRecord], workers: int = 1
) -> Tuple[Metrics, List[dict]]:
    """Score every record; per-record failures are logged, never fatal.

    Workers above 1 evaluate records concurrently; the metric accumulation
    is order-independent, but runs that mutate the graph should stay at 1.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    logs: List[Optional[dict]] = [None] * len(records)
    if workers == 1:
        for i, record in enumerate(records):
            logs[i] = _evaluate_record(context, record)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_evaluate_record, context, record): i for i, record in enumerate(records)
            }
            for future, i in futures.items():
                logs[i] = future.result()
    done: List[dict] = [log for log in logs if log is not None]
    metrics = compute_metrics(
        [record.gold_task for record in records],
        [log["predicted"] for log in done],
        [bool(log["exec_success"]) for log in done],
    )
    return metrics, done
