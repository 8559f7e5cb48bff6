"""Prompt templates: versioned JSON files rendered into deterministic prompts.

A template has a body with {placeholder} slots, optional few-shot examples,
and a reasoning style. Rendering serializes the examples in file order
BEFORE the live input, substitutes bindings verbatim, and wraps the live
section in BEGIN/END fences so distinct inputs can never render to the same
prompt (the fences plus fixed surrounding text make the input slot
injective).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Tuple

from ..errors import IoFailureError, MalformedRecordError, MissingPlaceholderError

REASONING_STYLES = ("plain", "chain_of_thought", "react")

_PLACEHOLDER = re.compile(r"\{([a-z_][a-z0-9_]*)\}")

_STYLE_PREAMBLE = {
    "plain": "",
    "chain_of_thought": "Think through the problem step by step, then give the final answer.",
    "react": (
        "Work with the graph tools one step at a time. Reply with exactly one line: "
        "'ACTION: QUERY <query text>' to run a graph query, or 'ACTION: FINISH <answer>' when you are done."
    ),
}


@dataclass
class PromptTemplate:
    name: str
    body: str
    few_shot_examples: List[Tuple[str, str]] = field(default_factory=list)
    reasoning_style: str = "plain"

    def __post_init__(self) -> None:
        if self.reasoning_style not in REASONING_STYLES:
            raise ValueError(f"reasoning_style must be one of {REASONING_STYLES}")

    def placeholders(self) -> List[str]:
        seen = []
        for match in _PLACEHOLDER.finditer(self.body):
            if match.group(1) not in seen:
                seen.append(match.group(1))
        return seen


def render_prompt(template: PromptTemplate, bindings: Dict[str, str]) -> str:
    """Deterministic prompt text: task header, style preamble, examples, fenced live input."""
    needed = template.placeholders()
    for name in needed:
        if name not in bindings:
            raise MissingPlaceholderError(name)

    def substitute(match: re.Match) -> str:
        return str(bindings[match.group(1)])

    live = _PLACEHOLDER.sub(substitute, template.body)

    parts = [f"### TASK: {template.name}"]
    preamble = _STYLE_PREAMBLE[template.reasoning_style]
    if preamble:
        parts.append(preamble)
    if template.few_shot_examples:
        example_lines = ["### EXAMPLES"]
        for index, (example_in, example_out) in enumerate(template.few_shot_examples, start=1):
            example_lines.append(f"Example {index} input:")
            example_lines.append(example_in)
            example_lines.append(f"Example {index} output:")
            example_lines.append(example_out)
        parts.append("\n".join(example_lines))
    parts.append("### INPUT BEGIN\n" + live + "\n### INPUT END")
    return "\n\n".join(parts)


def _template_from_dict(data: dict, source: str) -> PromptTemplate:
    if not isinstance(data, dict):
        raise MalformedRecordError(1, f"template {source} must be a JSON object")
    unknown = set(data) - {"name", "body", "few_shot_examples", "reasoning_style"}
    if unknown:
        raise MalformedRecordError(1, f"template {source} has unknown keys: {sorted(unknown)}")
    if not isinstance(data.get("name"), str) or not isinstance(data.get("body"), str):
        raise MalformedRecordError(1, f"template {source} needs string 'name' and 'body'")
    examples = []
    for pair in data.get("few_shot_examples", []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise MalformedRecordError(1, f"template {source} examples must be [input, output] pairs")
        examples.append((str(pair[0]), str(pair[1])))
    return PromptTemplate(
        name=data["name"],
        body=data["body"],
        few_shot_examples=examples,
        reasoning_style=data.get("reasoning_style", "plain"),
    )


def load_template(name: str) -> PromptTemplate:
    """Load a bundled template by name from the package's templates directory."""
    try:
        text = resources.files("graphtalk.llm.templates").joinpath(f"{name}.json").read_text("utf-8")
    except (FileNotFoundError, OSError) as exc:
        raise IoFailureError(f"no bundled template named {name!r}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(exc.lineno, f"template {name!r} is not valid JSON: {exc.msg}")
    return _template_from_dict(data, name)


def load_template_file(path: str) -> PromptTemplate:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise IoFailureError(f"cannot read template {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(exc.lineno, f"template {path!r} is not valid JSON: {exc.msg}")
    return _template_from_dict(data, path)
