"""Intent classification: map a chat message onto one of seven task kinds."""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from graphtalk.errors import EmptyQueryError
from graphtalk.llm import ChatMessage, ChatRequest, complete, load_template, render_prompt

RELATION_JUDGMENT = "RELATION_JUDGMENT"
PREREQUISITE_PREDICTION = "PREREQUISITE_PREDICTION"
PATH_SEARCHING = "PATH_SEARCHING"
CONCEPT_CLUSTERING = "CONCEPT_CLUSTERING"
SUBGRAPH_COMPLETION = "SUBGRAPH_COMPLETION"
IDEA_HAMSTER = "IDEA_HAMSTER"
FREE_FORM = "FREE_FORM"

# Order is load-bearing: the benchmark confusion matrix uses this axis order.
INTENT_KINDS: Tuple[str, ...] = (
    RELATION_JUDGMENT,
    PREREQUISITE_PREDICTION,
    PATH_SEARCHING,
    CONCEPT_CLUSTERING,
    SUBGRAPH_COMPLETION,
    IDEA_HAMSTER,
    FREE_FORM,
)


@dataclass(frozen=True)
class Intent:
    kind: str
    confidence_note: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "confidence_note": self.confidence_note}


def render_history(history: Sequence[Tuple[str, str]]) -> str:
    """Render (user, answer) turns for prompt embedding; '(none)' when empty."""
    if not history:
        return "(none)"
    lines: List[str] = []
    for user_text, answer_text in history:
        lines.append(f"USER: {user_text}")
        lines.append(f"ASSISTANT: {answer_text}")
    return "\n".join(lines)


def match_intent_kind(output: str) -> str:
    """Earliest case-insensitive task label wins; no label means FREE_FORM."""
    lowered = output.lower()
    best_kind = FREE_FORM
    best_pos = len(lowered) + 1
    for kind in INTENT_KINDS:
        pos = lowered.find(kind.lower())
        if pos != -1 and pos < best_pos:
            best_pos = pos
            best_kind = kind
    return best_kind


def classify_intent(backend, query: str, history: Sequence[Tuple[str, str]] = ()) -> Intent:
    """Ask the backend for the task kind; total on non-empty input."""
    if not query or not query.strip():
        raise EmptyQueryError("cannot classify an empty query")
    template = load_template("classify-intent")
    prompt = render_prompt(template, {"history": render_history(history), "query": query})
    request = ChatRequest(
        system_prompt="You classify knowledge-graph questions.",
        messages=[ChatMessage(role="user", content=prompt)],
    )
    output = complete(backend, request)
    return Intent(kind=match_intent_kind(output), confidence_note=output.strip())
