"""Concept extraction and linking: trigram embeddings, mention linking."""

from .embeddings import DIMENSION, NodeEmbeddingIndex, TrigramEmbedding, cosine
from .linker import (
    ExtractionResult,
    Mention,
    RelationTriple,
    extract,
    link,
    link_all,
    parse_extraction,
)

__all__ = [
    "DIMENSION",
    "ExtractionResult",
    "Mention",
    "NodeEmbeddingIndex",
    "RelationTriple",
    "TrigramEmbedding",
    "cosine",
    "extract",
    "link",
    "link_all",
    "parse_extraction",
]
