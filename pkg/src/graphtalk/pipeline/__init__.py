"""Chat pipeline: intent, extraction, planning, execution, traces."""

from .intents import (
    CONCEPT_CLUSTERING,
    FREE_FORM,
    IDEA_HAMSTER,
    INTENT_KINDS,
    Intent,
    PATH_SEARCHING,
    PREREQUISITE_PREDICTION,
    RELATION_JUDGMENT,
    SUBGRAPH_COMPLETION,
    classify_intent,
    match_intent_kind,
    render_history,
)
from .planning import ALL_NODES, KERNEL_FOR_KIND, REQUIRED_CONCEPTS, TaskPlan, TaskStep, plan, step_ref
from .runner import (
    ChatResult,
    PipelineContext,
    PipelineSettings,
    apply_update,
    execute_plan,
    render_evidence,
    render_table,
    run_chat,
)
from .traces import AgentTrace, TraceEntry, TraceStore

__all__ = [
    "ALL_NODES",
    "AgentTrace",
    "ChatResult",
    "CONCEPT_CLUSTERING",
    "FREE_FORM",
    "IDEA_HAMSTER",
    "INTENT_KINDS",
    "Intent",
    "KERNEL_FOR_KIND",
    "PATH_SEARCHING",
    "PipelineContext",
    "PipelineSettings",
    "PREREQUISITE_PREDICTION",
    "RELATION_JUDGMENT",
    "REQUIRED_CONCEPTS",
    "SUBGRAPH_COMPLETION",
    "TaskPlan",
    "TaskStep",
    "TraceEntry",
    "TraceStore",
    "apply_update",
    "classify_intent",
    "execute_plan",
    "match_intent_kind",
    "plan",
    "render_evidence",
    "render_history",
    "render_table",
    "run_chat",
    "step_ref",
]
