"""Word-embedding spaces, the cosine kernel, and exact nearest-neighbor search."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, FormatError, VocabularyError

# Cosine may exceed [-1, 1] by rounding noise only; anything larger means
# broken inputs rather than float overshoot.
_COSINE_OVERSHOOT = 1e-9


@dataclass(frozen=True)
class EmbeddingSpace:
    """Immutable word -> vector map with a label and a fixed dimension.

    Vectors are stored as float64 rows of ``matrix`` in vocabulary order;
    ``words`` gives the row order. All vectors are finite with strictly
    positive norm (enforced at construction).
    """

    label: str
    words: tuple[str, ...]
    matrix: np.ndarray
    _index: dict = field(repr=False)
    _unit: np.ndarray = field(repr=False)

    @classmethod
    def from_rows(cls, label: str, words, matrix) -> "EmbeddingSpace":
        matrix = np.asarray(matrix, dtype=np.float64)
        words = tuple(words)
        if matrix.ndim != 2 or matrix.shape[0] != len(words):
            raise DataError(
                f"matrix shape {matrix.shape} does not match {len(words)} words"
            )
        if matrix.shape[1] == 0:
            raise DataError("embedding dimension must be positive")
        if len(set(words)) != len(words):
            raise DataError("duplicate words in vocabulary")
        if not np.all(np.isfinite(matrix)):
            raise DataError(f"space '{label}' contains non-finite components")
        norms = np.linalg.norm(matrix, axis=1)
        if np.any(norms == 0.0):
            bad = [w for w, n in zip(words, norms) if n == 0.0]
            raise DataError(f"zero-norm vector for words: {', '.join(sorted(bad))}")
        matrix = matrix.copy()
        matrix.flags.writeable = False
        unit = matrix / norms[:, None]
        unit.flags.writeable = False
        index = {w: i for i, w in enumerate(words)}
        return cls(label, words, matrix, index, unit)

    @classmethod
    def from_dict(cls, label: str, vectors: dict) -> "EmbeddingSpace":
        words = list(vectors.keys())
        return cls.from_rows(label, words, np.array([vectors[w] for w in words]))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def vector(self, word: str) -> np.ndarray:
        """Row vector for ``word``; absence is an error, never a default."""
        try:
            return self.matrix[self._index[word]]
        except KeyError:
            raise VocabularyError(
                f"word '{word}' not in vocabulary of space '{self.label}'",
                missing=[word],
            ) from None

    def missing(self, words) -> list[str]:
        """Subset of ``words`` absent from this vocabulary, input order kept."""
        return [w for w in words if w not in self._index]

    def require(self, words, context: str = "") -> None:
        missing = self.missing(words)
        if missing:
            where = f" ({context})" if context else ""
            raise VocabularyError(
                f"space '{self.label}'{where} is missing words: "
                + ", ".join(sorted(missing)),
                missing=missing,
            )


def cosine(u, v) -> float:
    """Cosine similarity of two vectors, clamped only against fp overshoot."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DataError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise DataError("cosine undefined for zero-norm vector")
    if np.array_equal(u, v):
        return 1.0
    c = float(np.dot(u, v) / (nu * nv))
    if not math.isfinite(c):
        raise DataError("cosine produced a non-finite value")
    if abs(c) > 1.0:
        if abs(c) > 1.0 + _COSINE_OVERSHOOT:
            raise DataError(f"cosine {c!r} exceeds [-1, 1] beyond fp tolerance")
        c = math.copysign(1.0, c)
    return c


def nearest_neighbor(space: EmbeddingSpace, query) -> str:
    """Vocabulary word maximizing cosine with ``query``.

    Exact scan over the whole vocabulary; ties break to the
    lexicographically smallest word so results are deterministic.
    """
    if len(space) == 0:
        raise DataError("nearest_neighbor on empty space")
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (space.dimension,):
        raise DataError(
            f"query dimension {query.shape} does not match space "
            f"dimension {space.dimension}"
        )
    qn = np.linalg.norm(query)
    if qn == 0.0:
        raise DataError("nearest_neighbor undefined for zero-norm query")
    sims = space._unit @ (query / qn)
    best = sims.max()
    candidates = np.flatnonzero(sims == best)
    if len(candidates) == 1:
        return space.words[candidates[0]]
    return min(space.words[i] for i in candidates)


def load_word2vec_text(path: str, label: str | None = None) -> EmbeddingSpace:
    """Load a text-format word2vec file.

    First line is ``<vocab_size> <dimension>``; each following line is a word
    and ``dimension`` space-separated components. Any malformed row aborts the
    load with its line number.
    """
    if label is None:
        label = os.path.splitext(os.path.basename(path))[0]
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise FormatError(f"{path}:1: header must be '<vocab_size> <dimension>'")
        try:
            vocab_size, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"{path}:1: non-integer header fields") from None
        if vocab_size < 0 or dim <= 0:
            raise FormatError(f"{path}:1: header values out of range")

        words: list[str] = []
        rows = np.empty((vocab_size, dim), dtype=np.float64)
        seen: set[str] = set()
        n = 0
        for lineno, line in enumerate(fh, start=2):
            if line.strip() == "":
                continue
            fields = line.rstrip("\n").split(" ")
            if len(fields) != dim + 1:
                raise FormatError(
                    f"{path}:{lineno}: expected {dim + 1} fields, got {len(fields)}"
                )
            word = fields[0]
            if word in seen:
                raise FormatError(f"{path}:{lineno}: duplicate word '{word}'")
            try:
                vec = np.fromiter(map(float, fields[1:]), dtype=np.float64, count=dim)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-numeric component") from None
            if not np.all(np.isfinite(vec)):
                raise FormatError(f"{path}:{lineno}: non-finite component")
            if not np.any(vec):
                raise FormatError(f"{path}:{lineno}: zero-norm vector for '{word}'")
            if n >= vocab_size:
                raise FormatError(
                    f"{path}:{lineno}: row count exceeds declared vocab size "
                    f"{vocab_size}"
                )
            seen.add(word)
            words.append(word)
            rows[n] = vec
            n += 1
        if n != vocab_size:
            raise FormatError(
                f"{path}: row count mismatch: header declares {vocab_size}, "
                f"found {n}"
            )
    return EmbeddingSpace.from_rows(label, words, rows)


def save_word2vec_text(space: EmbeddingSpace, path: str) -> None:
    """Write a space in text word2vec format; floats round-trip exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(space)} {space.dimension}\n")
        for word, row in zip(space.words, space.matrix):
            fh.write(word + " " + " ".join(repr(c) for c in row.tolist()) + "\n")
