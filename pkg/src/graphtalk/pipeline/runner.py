"""Pipeline execution: classify, extract, plan, run steps, persist the trace."""

import hashlib
import json
import re
import threading
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from graphtalk.errors import (
    EmptyNameError,
    EmptyQueryError,
    ExtractionParseFailureError,
    GatewayError,
    GraphTalkError,
    StepFailedError,
    UnknownEndpointError,
)
from graphtalk.kernels import (
    KernelResult,
    concept_clustering,
    idea_context,
    path_search,
    prerequisite_prediction,
    relation_judgment,
    subgraph_completion,
)
from graphtalk.linking import ExtractionResult, NodeEmbeddingIndex, extract, link_all
from graphtalk.llm import (
    ChatMessage,
    ChatRequest,
    ReactTools,
    complete,
    load_template,
    render_prompt,
    run_react,
)
from graphtalk.pipeline.intents import FREE_FORM, Intent, classify_intent, render_history
from graphtalk.pipeline.planning import ALL_NODES, TaskPlan, plan
from graphtalk.pipeline.traces import AgentTrace, TraceStore
from graphtalk.query import ResultTable, execute, parse, render_value
from graphtalk.store import MutationSummary, PropertyGraph, normalize_name


@dataclass
class PipelineSettings:
    """Knobs the pipeline reads; mirrors the service config keys."""

    link_threshold: float = 0.60
    max_react_steps: int = 5
    max_hops: int = 1
    history_window: int = 6
    suggestion_k: int = 3
    idea_radius: int = 1
    temperature: float = 0.0


class PipelineContext:
    """Everything one pipeline run needs: graph, backend, settings, traces."""

    def __init__(
        self,
        graph: PropertyGraph,
        backend,
        settings: Optional[PipelineSettings] = None,
        trace_store: Optional[TraceStore] = None,
    ):
        self.graph = graph
        self.backend = backend
        self.settings = settings or PipelineSettings()
        self.trace_store = trace_store or TraceStore(None)
        self.index = NodeEmbeddingIndex(graph)
        self._trace_count = 0
        self._counter_lock = threading.Lock()

    def next_trace_id(self, query: str) -> str:
        with self._counter_lock:
            self._trace_count += 1
            count = self._trace_count
        digest = hashlib.sha1(query.encode("utf-8")).hexdigest()[:8]
        return f"t{count:06d}-{digest}"


@dataclass
class ChatResult:
    answer: str
    task_type: str
    trace_id: str
    trace: AgentTrace


def render_table(table: ResultTable) -> str:
    """Stable text form of a query result, used as a ReAct observation."""
    if not table.rows:
        return "EMPTY_RESULT (0 rows)"
    lines = [" | ".join(table.columns)]
    for row in table.rows:
        lines.append(" | ".join(render_value(cell) for cell in row))
    return "\n".join(lines)


def render_evidence(value: object) -> str:
    """Deterministic text form of a step output for the reasoning prompt."""
    if isinstance(value, KernelResult):
        parts = [f"{value.kind} result:", json.dumps(value.payload, ensure_ascii=False, indent=2, sort_keys=True)]
        if value.warnings:
            parts.append("warnings: " + "; ".join(value.warnings))
        return "\n".join(parts)
    if isinstance(value, dict) and "react_answer" in value:
        lines = [f"exploration answer: {value['react_answer']}"]
        for step in value.get("steps", []):
            lines.append(f"- {step['action']} => {step['observation']}")
        return "\n".join(lines)
    if isinstance(value, MutationSummary):
        return json.dumps(value.to_dict(), sort_keys=True)
    return str(value)


def apply_update(context: PipelineContext, new_entities: Sequence[str], new_relations: Sequence[Sequence[str]]) -> MutationSummary:
    """Union-merge extracted entities and relations into the graph.

    Endpoints must name a listed entity or an existing node; resolution is
    checked up front so a bad payload mutates nothing.
    """
    graph = context.graph
    summary = MutationSummary()
    entity_names = [name for name in new_entities]
    for name in entity_names:
        if not name or not name.strip():
            raise EmptyNameError("entity names must not be blank")
    with graph.lock.write_locked():
        known = {normalize_name(name) for name in entity_names}

        def resolvable(name: str) -> bool:
            if normalize_name(name) in known:
                return True
            return bool(graph.find_nodes_by_name(name))

        for head, relation, tail in new_relations:
            for endpoint in (head, tail):
                if not resolvable(endpoint):
                    raise UnknownEndpointError(f"relation endpoint {endpoint!r} is neither a new entity nor an existing node")

        name_to_id: Dict[str, str] = {}
        for name in entity_names:
            outcome = graph.upsert_node(name, "Concept")
            name_to_id[normalize_name(name)] = outcome.id
            if outcome.created:
                summary.nodes_created += 1

        def resolve(name: str) -> str:
            normalized = normalize_name(name)
            if normalized in name_to_id:
                return name_to_id[normalized]
            return graph.find_nodes_by_name(name)[0].id

        for head, relation, tail in new_relations:
            outcome = graph.upsert_edge(resolve(head), relation, resolve(tail))
            if outcome.created:
                summary.edges_created += 1
    return summary


def _react_query_tool(graph: PropertyGraph):
    """Read-only query executor; write statements come back as errors."""

    def run(text: str) -> str:
        ast = parse(text)
        if ast.is_write():
            return "ERROR: EXECUTION_ERROR: write statements are not allowed during exploration"
        result = execute(graph, ast)
        return render_table(result)

    return run


def _linked_names(context: PipelineContext, extraction: ExtractionResult) -> str:
    names: List[str] = []
    for mention in extraction.mentions:
        if mention.linked_node and mention.linked_node in context.graph.nodes:
            name = context.graph.nodes[mention.linked_node].name
            if name not in names:
                names.append(name)
    return ", ".join(names) if names else "(none)"


def _run_kernel(context: PipelineContext, kind: str, inputs: dict) -> KernelResult:
    graph = context.graph
    settings = context.settings
    if kind == "relation_judgment":
        return relation_judgment(graph, inputs["node_a"], inputs["node_b"], max_hops=settings.max_hops)
    if kind == "prerequisite_prediction":
        return prerequisite_prediction(graph, inputs["target"])
    if kind == "path_search":
        return path_search(graph, inputs["start"], inputs["goal"], relation=inputs.get("relation"))
    if kind == "concept_clustering":
        return concept_clustering(graph, relation_set=inputs.get("relation_set"))
    if kind == "subgraph_completion":
        seeds = inputs["seeds"]
        if seeds == ALL_NODES:
            seeds = [node.id for node in graph.nodes_sorted()]
        return subgraph_completion(graph, seeds, k=settings.suggestion_k)
    if kind == "idea_context":
        return idea_context(graph, inputs["seeds"], radius=settings.idea_radius)
    raise ValueError(f"unknown step kind {kind}")


def _resolve_inputs(inputs: dict, outputs: Dict[int, object]) -> dict:
    resolved = {}
    for key, value in inputs.items():
        if isinstance(value, dict) and "$step" in value:
            resolved[key] = outputs[value["$step"]]
        else:
            resolved[key] = value
    return resolved


def _post_check_answer(context: PipelineContext, answer: str, evidence: str, query: str) -> List[str]:
    """Flag node names in the answer that neither the evidence nor the query backs."""
    warnings: List[str] = []
    backing = (evidence + "\n" + query).lower()
    lowered = answer.lower()
    for node in context.graph.nodes_sorted():
        name = node.normalized_name
        if len(name) < 2:
            continue
        pattern = r"(?<!\w)" + re.escape(name) + r"(?!\w)"
        if re.search(pattern, lowered) and not re.search(pattern, backing):
            warnings.append(f"answer cites '{node.name}' which the gathered evidence does not contain")
    return warnings


def execute_plan(
    context: PipelineContext,
    task_plan: TaskPlan,
    query: str,
    task_type: str,
    history: Sequence[Tuple[str, str]] = (),
    extraction: Optional[ExtractionResult] = None,
    trace: Optional[AgentTrace] = None,
) -> AgentTrace:
    """Run every step in order, appending one trace entry per step.

    A failing step halts execution; the trace keeps the completed prefix,
    is persisted, and the raised StepFailed carries the trace id. Gateway
    outages propagate as-is so callers can distinguish them.
    """
    if trace is None:
        trace = AgentTrace(trace_id=context.next_trace_id(query), query=query, task_type=task_type)
    extraction = extraction or ExtractionResult()
    outputs: Dict[int, object] = {}
    settings = context.settings
    evidence_text = ""
    analysis_text = ""

    for step in task_plan.steps:
        started = time.perf_counter()
        inputs = _resolve_inputs(step.inputs, outputs)
        stage = f"step{step.id}:{step.kind}"
        try:
            if step.kind == "query":
                template = load_template("react-explore")
                bindings = {
                    "concepts": _linked_names(context, extraction),
                    "history": render_history(history),
                    "query": query,
                }
                prompt = render_prompt(template, bindings)
                tools = ReactTools(execute_query=_react_query_tool(context.graph))
                answer, react_steps = run_react(
                    context.backend,
                    template,
                    tools,
                    bindings,
                    max_steps=settings.max_react_steps,
                    temperature=settings.temperature,
                )
                outputs[step.id] = {
                    "react_answer": answer,
                    "steps": [s.to_dict() for s in react_steps],
                }
                trace.add(
                    stage,
                    prompt=prompt,
                    output=answer,
                    artifact=outputs[step.id],
                    duration_ms=(time.perf_counter() - started) * 1000.0,
                )
            elif step.kind == "reason":
                evidence_text = render_evidence(inputs["evidence"])
                template = load_template("reason")
                prompt = render_prompt(
                    template,
                    {"task_type": task_type, "query": query, "evidence": evidence_text},
                )
                request = ChatRequest(
                    system_prompt="You reason over knowledge-graph evidence.",
                    messages=[ChatMessage(role="user", content=prompt)],
                    temperature=settings.temperature,
                )
                analysis_text = complete(context.backend, request)
                outputs[step.id] = analysis_text
                trace.add(
                    stage,
                    prompt=prompt,
                    output=analysis_text,
                    artifact=None,
                    duration_ms=(time.perf_counter() - started) * 1000.0,
                )
            elif step.kind == "update":
                summary = apply_update(context, inputs["entities"], inputs["relations"])
                outputs[step.id] = summary
                trace.add(
                    stage,
                    artifact=summary.to_dict(),
                    duration_ms=(time.perf_counter() - started) * 1000.0,
                )
            elif step.kind == "respond":
                template = load_template("respond")
                prompt = render_prompt(
                    template,
                    {
                        "task_type": task_type,
                        "query": query,
                        "analysis": render_evidence(inputs.get("analysis", "")),
                        "evidence": render_evidence(inputs.get("evidence", "")),
                    },
                )
                request = ChatRequest(
                    system_prompt="You answer questions about a knowledge graph.",
                    messages=[ChatMessage(role="user", content=prompt)],
                    temperature=settings.temperature,
                )
                answer = complete(context.backend, request)
                outputs[step.id] = answer
                trace.answer = answer
                trace.add(
                    stage,
                    prompt=prompt,
                    output=answer,
                    artifact=None,
                    duration_ms=(time.perf_counter() - started) * 1000.0,
                )
            else:
                result = _run_kernel(context, step.kind, inputs)
                outputs[step.id] = result
                trace.add(
                    stage,
                    artifact=result.to_dict(),
                    duration_ms=(time.perf_counter() - started) * 1000.0,
                )
                trace.warnings.extend(result.warnings)
        except GatewayError:
            raise
        except StepFailedError:
            raise
        except (GraphTalkError, ValueError, KeyError) as exc:
            code = exc.code if isinstance(exc, GraphTalkError) else "EXECUTION_ERROR"
            trace.failed_step = {"step_id": step.id, "code": code, "message": str(exc)}
            trace.add(
                stage,
                artifact=trace.failed_step,
                duration_ms=(time.perf_counter() - started) * 1000.0,
            )
            context.trace_store.save(trace)
            raise StepFailedError(step.id, exc, trace.trace_id) from exc

    if trace.answer is not None:
        trace.warnings.extend(_post_check_answer(context, trace.answer, evidence_text + "\n" + analysis_text, query))
    context.trace_store.save(trace)
    return trace


def run_chat(
    context: PipelineContext,
    message: str,
    history: Sequence[Tuple[str, str]] = (),
) -> ChatResult:
    """Full pipeline: classify, extract and link, plan, execute, respond."""
    if not message or not message.strip():
        raise EmptyQueryError("message must not be empty")
    settings = context.settings
    windowed = list(history)[-settings.history_window :]
    trace = AgentTrace(trace_id=context.next_trace_id(message), query=message)

    started = time.perf_counter()
    intent = classify_intent(context.backend, message, windowed)
    trace.task_type = intent.kind
    trace.add(
        "classify",
        output=intent.confidence_note,
        artifact=intent.to_dict(),
        duration_ms=(time.perf_counter() - started) * 1000.0,
    )

    started = time.perf_counter()
    try:
        extraction = extract(context.backend, message)
    except ExtractionParseFailureError as exc:
        extraction = ExtractionResult(warnings=[str(exc)])
    extraction = link_all(context.index, extraction, settings.link_threshold)
    trace.warnings.extend(extraction.warnings)
    trace.add(
        "extract",
        artifact={
            "mentions": [m.to_dict() for m in extraction.mentions],
            "triples": [t.to_dict() for t in extraction.triples],
        },
        duration_ms=(time.perf_counter() - started) * 1000.0,
    )

    started = time.perf_counter()
    try:
        task_plan = plan(context.backend, intent, extraction)
    except GraphTalkError as exc:
        trace.failed_step = {"step_id": 0, "code": exc.code, "message": str(exc)}
        trace.add("plan", artifact=trace.failed_step, duration_ms=(time.perf_counter() - started) * 1000.0)
        context.trace_store.save(trace)
        exc.trace_id = trace.trace_id
        raise
    trace.add(
        "plan",
        artifact=task_plan.to_dict(),
        duration_ms=(time.perf_counter() - started) * 1000.0,
    )

    trace = execute_plan(
        context,
        task_plan,
        query=message,
        task_type=intent.kind,
        history=windowed,
        extraction=extraction,
        trace=trace,
    )
    return ChatResult(answer=trace.answer or "", task_type=intent.kind, trace_id=trace.trace_id, trace=trace)
