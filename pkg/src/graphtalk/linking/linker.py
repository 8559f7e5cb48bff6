"""Entity extraction and concept linking.

Extraction asks the model for a delimited line format:

    ENTITY: <surface>|<start>|<end>
    REL: <head index>|<RELATION_NAME>|<tail index>

Spans are byte offsets into the query. Unparseable lines are dropped with a
warning rather than failing the stage; only a response with no usable lines
at all is an error. Linking maps each mention to the nearest node name by
embedding cosine, with exact normalized-name matches pinned to score 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

from ..errors import EmptyQueryError, ExtractionParseFailureError
from ..llm.gateway import ChatMessage, ChatRequest, complete
from ..llm.prompts import load_template, render_prompt
from .embeddings import NodeEmbeddingIndex

ENTITY_PREFIX = "ENTITY:"
REL_PREFIX = "REL:"
NO_CONCEPTS = "NONE"


@dataclass(frozen=True)
class Mention:
    surface: str
    span: Tuple[int, int]
    linked_node: Optional[str] = None
    score: float = 0.0

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "span": list(self.span),
            "linked_node": self.linked_node,
            "score": self.score,
        }


@dataclass(frozen=True)
class RelationTriple:
    head: Mention
    relation: str
    tail: Mention

    def to_dict(self) -> dict:
        return {"head": self.head.to_dict(), "relation": self.relation, "tail": self.tail.to_dict()}


@dataclass
class ExtractionResult:
    mentions: List[Mention] = field(default_factory=list)
    triples: List[RelationTriple] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)


def _parse_entity_line(line: str, query_bytes: int, warnings: List[str]) -> Optional[Mention]:
    body = line[len(ENTITY_PREFIX) :].strip()
    parts = body.rsplit("|", 2)  # the surface itself may contain pipes
    if len(parts) != 3:
        warnings.append(f"dropped entity line (need surface|start|end): {line!r}")
        return None
    surface, start_text, end_text = parts
    surface = surface.strip()
    try:
        start = int(start_text)
        end = int(end_text)
    except ValueError:
        warnings.append(f"dropped entity line (non-integer span): {line!r}")
        return None
    if not surface:
        warnings.append(f"dropped entity line (empty surface): {line!r}")
        return None
    if not (0 <= start < end <= query_bytes):
        warnings.append(f"dropped entity line (span outside query bounds): {line!r}")
        return None
    return Mention(surface=surface, span=(start, end))


def _parse_rel_line(line: str, mentions: List[Mention], warnings: List[str]) -> Optional[RelationTriple]:
    body = line[len(REL_PREFIX) :].strip()
    parts = body.split("|")
    if len(parts) != 3:
        warnings.append(f"dropped relation line (need head|relation|tail): {line!r}")
        return None
    head_text, relation, tail_text = (p.strip() for p in parts)
    try:
        head_index = int(head_text)
        tail_index = int(tail_text)
    except ValueError:
        warnings.append(f"dropped relation line (non-integer index): {line!r}")
        return None
    if not relation:
        warnings.append(f"dropped relation line (empty relation): {line!r}")
        return None
    if not (0 <= head_index < len(mentions)) or not (0 <= tail_index < len(mentions)):
        warnings.append(f"dropped relation line (index out of range): {line!r}")
        return None
    if head_index == tail_index:
        warnings.append(f"dropped relation line (head and tail are the same mention): {line!r}")
        return None
    return RelationTriple(head=mentions[head_index], relation=relation, tail=mentions[tail_index])


def parse_extraction(response: str, query_text: str) -> ExtractionResult:
    """Parse the model's extraction response; independent of any backend."""
    result = ExtractionResult()
    stripped = response.strip()
    if stripped.upper() == NO_CONCEPTS:
        return result
    query_bytes = len(query_text.encode("utf-8"))
    recognized_any = False  # at least one line in the expected wire format
    attempted_any = False
    # REL indexes refer to ENTITY lines in emission order, so collect first
    ordered_mentions: List[Mention] = []
    rel_lines: List[str] = []
    for raw_line in stripped.splitlines():
        line = raw_line.strip()
        if not line:
            continue
        attempted_any = True
        if line.startswith(ENTITY_PREFIX):
            recognized_any = True
            mention = _parse_entity_line(line, query_bytes, result.warnings)
            if mention is not None:
                ordered_mentions.append(mention)
        elif line.startswith(REL_PREFIX):
            recognized_any = True
            rel_lines.append(line)
        else:
            result.warnings.append(f"dropped unrecognized line: {line!r}")
    for line in rel_lines:
        triple = _parse_rel_line(line, ordered_mentions, result.warnings)
        if triple is not None:
            result.triples.append(triple)
    if attempted_any and not recognized_any:
        raise ExtractionParseFailureError("no ENTITY or REL lines in extraction output")
    result.mentions = sorted(ordered_mentions, key=lambda m: m.span)
    return result


def extract(backend, query_text: str) -> ExtractionResult:
    """Run the extraction stage against a backend and parse its output."""
    if not query_text or not query_text.strip():
        raise EmptyQueryError("cannot extract concepts from an empty query")
    template = load_template("extract-concepts")
    prompt = render_prompt(template, {"query": query_text})
    request = ChatRequest(system_prompt="You extract graph concepts.", messages=[ChatMessage("user", prompt)])
    response = complete(backend, request)
    return parse_extraction(response, query_text)


def link(index: NodeEmbeddingIndex, mention: Mention, threshold: float) -> Mention:
    """Fill linked_node/score on a mention; below-threshold stays unlinked."""
    node_id, score = index.best_match(mention.surface)
    if node_id and score >= threshold:
        return replace(mention, linked_node=node_id, score=score)
    return replace(mention, linked_node=None, score=score)


def link_all(index: NodeEmbeddingIndex, result: ExtractionResult, threshold: float) -> ExtractionResult:
    """Link every mention, rewriting triples to reference the linked copies."""
    linked = {id(m): link(index, m, threshold) for m in result.mentions}
    mentions = [linked[id(m)] for m in result.mentions]
    triples = [
        RelationTriple(
            head=linked.get(id(t.head), link(index, t.head, threshold)),
            relation=t.relation,
            tail=linked.get(id(t.tail), link(index, t.tail, threshold)),
        )
        for t in result.triples
    ]
    return ExtractionResult(mentions=mentions, triples=triples, warnings=list(result.warnings))
