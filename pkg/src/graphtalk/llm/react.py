"""ReAct episode loop: alternate model actions with tool observations.

The action grammar is one line of the completion:

    ACTION: QUERY <query text>
    ACTION: FINISH <answer>

Anything else becomes a PARSE_ERROR observation and still consumes a step,
so a confused model cannot loop for free. Query execution failures are fed
back as observations too; only exhausting the step budget aborts the
episode.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import BudgetExhaustedError, GraphTalkError, QuerySyntaxError
from .gateway import ChatMessage, ChatRequest, complete
from .prompts import PromptTemplate, render_prompt

ACTION_PREFIX = "ACTION:"
PARSE_ERROR_HELP = "PARSE_ERROR: expected one line 'ACTION: QUERY <text>' or 'ACTION: FINISH <answer>'"


@dataclass
class ReactStep:
    thought: str
    action: str  # "QUERY <text>", "FINISH <answer>", or "MALFORMED"
    observation: str

    def to_dict(self) -> dict:
        return {"thought": self.thought, "action": self.action, "observation": self.observation}


@dataclass
class ReactTools:
    """Callbacks the loop may invoke; query execution is the only tool in v1."""

    execute_query: Callable[[str], str]


def _parse_action(completion: str) -> Tuple[str, str, str]:
    """Split a completion into (thought, action_kind, action_text).

    action_kind is "query", "finish", or "malformed".
    """
    lines = completion.splitlines()
    for index, line in enumerate(lines):
        stripped = line.strip()
        if not stripped.startswith(ACTION_PREFIX):
            continue
        thought = "\n".join(lines[:index]).strip()
        rest = stripped[len(ACTION_PREFIX) :].strip()
        if rest.startswith("QUERY "):
            text = rest[len("QUERY ") :].strip()
            if text:
                return thought, "query", text
        elif rest.startswith("FINISH "):
            answer = rest[len("FINISH ") :].strip()
            if answer:
                return thought, "finish", answer
        return thought, "malformed", stripped
    return completion.strip(), "malformed", ""


def run_react(
    backend,
    template: PromptTemplate,
    tools: ReactTools,
    bindings: Dict[str, str],
    max_steps: int = 5,
    temperature: float = 0.0,
) -> Tuple[str, List[ReactStep]]:
    """Run one episode; returns (final answer, steps) or raises BudgetExhaustedError.

    The exhausted error carries the step trace so callers can surface it.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    prompt = render_prompt(template, bindings)
    messages: List[ChatMessage] = [ChatMessage(role="user", content=prompt)]
    steps: List[ReactStep] = []
    system = "You are a graph exploration assistant."

    for _ in range(max_steps):
        request = ChatRequest(system_prompt=system, messages=list(messages), temperature=temperature)
        completion = complete(backend, request)
        thought, kind, text = _parse_action(completion)

        if kind == "finish":
            steps.append(ReactStep(thought=thought, action=f"FINISH {text}", observation="FINISHED"))
            return text, steps

        if kind == "query":
            try:
                observation = tools.execute_query(text)
            except QuerySyntaxError as exc:
                observation = f"PARSE_ERROR: {exc}"
            except GraphTalkError as exc:
                observation = f"ERROR: {exc.code}: {exc}"
            steps.append(ReactStep(thought=thought, action=f"QUERY {text}", observation=observation))
        else:
            observation = PARSE_ERROR_HELP
            steps.append(ReactStep(thought=thought, action="MALFORMED", observation=observation))

        messages.append(ChatMessage(role="assistant", content=completion))
        messages.append(ChatMessage(role="user", content=f"OBSERVATION:\n{observation}"))

    raise BudgetExhaustedError(steps)
