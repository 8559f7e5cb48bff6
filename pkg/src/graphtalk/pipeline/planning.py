"""Plan construction: fixed step skeletons keyed by classified intent."""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from graphtalk.errors import MissingConceptsError
from graphtalk.linking import ExtractionResult
from graphtalk.pipeline.intents import (
    CONCEPT_CLUSTERING,
    FREE_FORM,
    IDEA_HAMSTER,
    PATH_SEARCHING,
    PREREQUISITE_PREDICTION,
    RELATION_JUDGMENT,
    SUBGRAPH_COMPLETION,
    Intent,
)

# Seeds value meaning "every node in the graph" (resolved at execution time).
ALL_NODES = "all"

KERNEL_FOR_KIND = {
    RELATION_JUDGMENT: "relation_judgment",
    PREREQUISITE_PREDICTION: "prerequisite_prediction",
    PATH_SEARCHING: "path_search",
    CONCEPT_CLUSTERING: "concept_clustering",
    SUBGRAPH_COMPLETION: "subgraph_completion",
    IDEA_HAMSTER: "idea_context",
}

REQUIRED_CONCEPTS = {
    RELATION_JUDGMENT: 2,
    PREREQUISITE_PREDICTION: 1,
    PATH_SEARCHING: 2,
    CONCEPT_CLUSTERING: 0,
    SUBGRAPH_COMPLETION: 0,
    IDEA_HAMSTER: 1,
    FREE_FORM: 0,
}


def step_ref(step_id: int) -> dict:
    """Input value that resolves to an earlier step's output at execution."""
    return {"$step": step_id}


@dataclass(frozen=True)
class TaskStep:
    id: int
    kind: str
    inputs: dict = field(default_factory=dict)
    depends_on: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "inputs": self.inputs,
            "depends_on": sorted(self.depends_on),
        }


@dataclass(frozen=True)
class TaskPlan:
    steps: Tuple[TaskStep, ...]

    def __post_init__(self):
        if not self.steps:
            raise ValueError("plan must contain at least one step")
        seen: List[int] = []
        for step in self.steps:
            if seen and step.id <= seen[-1]:
                raise ValueError("step ids must be strictly increasing")
            for dep in step.depends_on:
                if dep not in seen:
                    raise ValueError(f"step {step.id} depends on {dep} which does not precede it")
            seen.append(step.id)
        if self.steps[-1].kind != "respond":
            raise ValueError("final step must be respond")

    def to_dict(self) -> dict:
        return {"steps": [step.to_dict() for step in self.steps]}


def linked_concept_ids(extraction: ExtractionResult) -> List[str]:
    """Node ids of linked mentions in mention order, first occurrence kept."""
    out: List[str] = []
    for mention in extraction.mentions:
        if mention.linked_node and mention.linked_node not in out:
            out.append(mention.linked_node)
    return out


def _kernel_inputs(kind: str, concept_ids: List[str]) -> dict:
    if kind == RELATION_JUDGMENT:
        return {"node_a": concept_ids[0], "node_b": concept_ids[1]}
    if kind == PREREQUISITE_PREDICTION:
        return {"target": concept_ids[0]}
    if kind == PATH_SEARCHING:
        return {"start": concept_ids[0], "goal": concept_ids[1]}
    if kind == CONCEPT_CLUSTERING:
        return {}
    if kind == SUBGRAPH_COMPLETION:
        # fewer than two anchors: complete over the whole graph instead
        return {"seeds": concept_ids if len(concept_ids) >= 2 else ALL_NODES}
    if kind == IDEA_HAMSTER:
        return {"seeds": [concept_ids[0]]}
    raise ValueError(f"no kernel inputs for kind {kind}")


def plan(backend, intent: Intent, extraction: ExtractionResult) -> TaskPlan:
    """Build the step plan for an intent; fixed skeletons, no model call.

    The backend parameter is part of the operation contract (a learned
    planner would use it) but the v1 skeletons are deterministic.
    """
    del backend
    concept_ids = linked_concept_ids(extraction)
    needed = REQUIRED_CONCEPTS[intent.kind]
    if len(concept_ids) < needed:
        raise MissingConceptsError(intent.kind, needed, len(concept_ids))

    steps: List[TaskStep] = []
    if intent.kind == FREE_FORM:
        steps.append(TaskStep(id=1, kind="query", inputs={}))
        steps.append(TaskStep(id=2, kind="reason", inputs={"evidence": step_ref(1)}, depends_on=(1,)))
        next_id = 3
        if extraction.mentions or extraction.triples:
            steps.append(
                TaskStep(
                    id=next_id,
                    kind="update",
                    inputs={
                        "entities": [m.surface for m in extraction.mentions],
                        "relations": [
                            [t.head.surface, t.relation, t.tail.surface] for t in extraction.triples
                        ],
                    },
                )
            )
            next_id += 1
        steps.append(
            TaskStep(
                id=next_id,
                kind="respond",
                inputs={"analysis": step_ref(2), "evidence": step_ref(1)},
                depends_on=(1, 2),
            )
        )
    else:
        kernel = KERNEL_FOR_KIND[intent.kind]
        steps.append(TaskStep(id=1, kind=kernel, inputs=_kernel_inputs(intent.kind, concept_ids)))
        steps.append(TaskStep(id=2, kind="reason", inputs={"evidence": step_ref(1)}, depends_on=(1,)))
        steps.append(
            TaskStep(
                id=3,
                kind="respond",
                inputs={"analysis": step_ref(2), "evidence": step_ref(1)},
                depends_on=(1, 2),
            )
        )
    return TaskPlan(steps=tuple(steps))
