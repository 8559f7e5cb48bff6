"""Deterministic text embeddings for concept linking.

The default provider hashes character trigrams into a fixed 256-dim vector
and L2-normalizes. It is stable across processes (crc32, not the salted
builtin hash), cheap enough to recompute freely, and good enough to rank
near-duplicate names, which is all linking needs. Empty text maps to the
zero vector by convention; cosine against it is defined as 0.
"""

from __future__ import annotations

import zlib
from typing import Dict, List, Tuple

import numpy as np

from ..store.graph import PropertyGraph, normalize_name

DIMENSION = 256
_PAD = "#"


class TrigramEmbedding:
    """Character-trigram hashing provider. Unit-norm output, zero vector for empty text."""

    dimension = DIMENSION

    def embed(self, text: str) -> np.ndarray:
        norm = normalize_name(text)
        vector = np.zeros(self.dimension, dtype=np.float64)
        if not norm:
            return vector
        padded = _PAD + norm + _PAD
        for i in range(len(padded) - 2):
            trigram = padded[i : i + 3]
            bucket = zlib.crc32(trigram.encode("utf-8")) % self.dimension
            vector[bucket] += 1.0
        length = float(np.linalg.norm(vector))
        if length > 0:
            vector /= length
        return vector


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine similarity with the zero-vector convention (anything vs zero = 0)."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


class NodeEmbeddingIndex:
    """Cached name embeddings for every node, invalidated by the graph's version counter."""

    def __init__(self, graph: PropertyGraph, provider=None) -> None:
        self.graph = graph
        self.provider = provider or TrigramEmbedding()
        self._built_version = -1
        self._matrix = np.zeros((0, self.provider.dimension))
        self._entries: List[Tuple[str, str, str]] = []  # (normalized name, label, node id)
        self._exact: Dict[str, List[Tuple[str, str, str]]] = {}

    def _rebuild(self) -> None:
        with self.graph.lock.read_locked():
            nodes = sorted(
                self.graph.nodes.values(), key=lambda n: (n.normalized_name, n.label, n.id)
            )
            entries = [(n.normalized_name, n.label, n.id) for n in nodes]
            version = self.graph.version
        if entries:
            matrix = np.stack([self.provider.embed(norm) for norm, _, _ in entries])
        else:
            matrix = np.zeros((0, self.provider.dimension))
        exact: Dict[str, List[Tuple[str, str, str]]] = {}
        for entry in entries:
            exact.setdefault(entry[0], []).append(entry)
        self._entries = entries
        self._matrix = matrix
        self._exact = exact
        self._built_version = version

    def _ensure_fresh(self) -> None:
        if self.graph.version != self._built_version:
            self._rebuild()

    def best_match(self, surface: str) -> Tuple[str, float]:
        """(node id, score) of the best candidate, or ("", 0.0) for an empty graph.

        Exact normalized-name matches score exactly 1.0 and dominate. Otherwise
        the highest cosine wins, ties broken by (normalized name, label, id).
        """
        self._ensure_fresh()
        if not self._entries:
            return "", 0.0
        norm = normalize_name(surface)
        exact = self._exact.get(norm)
        if exact:
            return exact[0][2], 1.0
        query = self.provider.embed(surface)
        if float(np.linalg.norm(query)) == 0.0:
            return "", 0.0
        scores = self._matrix @ query
        best = float(scores.max())
        # entries are presorted by (normalized name, label, id); first argmax wins ties
        index = int(np.argmax(scores))
        return self._entries[index][2], best
