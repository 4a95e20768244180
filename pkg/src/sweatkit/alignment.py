"""Orthogonal Procrustes alignment of two embedding spaces and the
cross-space round-trip stability test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import EmbeddingSpace, nearest_neighbor
from .errors import DataError, VocabularyError


@dataclass
class AlignmentReport:
    rotation: np.ndarray
    anchors_used: list
    residual: float
    source_label: str
    target_label: str
    underdetermined: bool = False

    def to_dict(self) -> dict:
        return {
            "source_label": self.source_label,
            "target_label": self.target_label,
            "n_anchors": len(self.anchors_used),
            "residual": self.residual,
            "underdetermined": self.underdetermined,
        }


def procrustes_align(
    source: EmbeddingSpace, target: EmbeddingSpace, anchors
) -> tuple[EmbeddingSpace, AlignmentReport]:
    """Map ``source`` into ``target``'s coordinate system.

    Solves min_R sum over anchors of ||E_src(w) R - E_tgt(w)||^2 over
    orthogonal R via SVD of the anchor cross-covariance. Anchor matrices are
    mean-centered before solving and the centering offsets are folded into
    the returned space: v -> (v - mu_src) R + mu_tgt.
    """
    anchors = list(anchors)
    if not anchors:
        raise DataError("no anchors given for alignment")
    if source.dimension != target.dimension:
        raise DataError(
            f"dimension mismatch: {source.dimension} vs {target.dimension}"
        )
    missing = set(source.missing(anchors)) | set(target.missing(anchors))
    if missing:
        raise VocabularyError(
            "anchors missing from one of the spaces: " + ", ".join(sorted(missing)),
            missing=missing,
        )

    src = np.array([source.vector(w) for w in anchors])
    tgt = np.array([target.vector(w) for w in anchors])
    mu_src = src.mean(axis=0)
    mu_tgt = tgt.mean(axis=0)
    src_c = src - mu_src
    tgt_c = tgt - mu_tgt

    try:
        u, _, vt = np.linalg.svd(src_c.T @ tgt_c)
    except np.linalg.LinAlgError as exc:
        raise DataError(f"SVD failed during alignment: {exc}") from exc
    rotation = u @ vt

    mapped_anchors = src_c @ rotation + mu_tgt
    residual = float(np.mean(np.sum((mapped_anchors - tgt) ** 2, axis=1)))

    mapped = (source.matrix - mu_src) @ rotation + mu_tgt
    aligned = EmbeddingSpace.from_rows(source.label, source.words, mapped)
    report = AlignmentReport(
        rotation=rotation,
        anchors_used=anchors,
        residual=residual,
        source_label=source.label,
        target_label=target.label,
        underdetermined=len(anchors) < source.dimension,
    )
    return aligned, report


def round_trip_stable(
    word: str, space1: EmbeddingSpace, space2: EmbeddingSpace
) -> bool:
    """True iff the word's vector in either space has the word itself as the
    nearest neighbor in the other space. Assumes aligned coordinates."""
    space1.require([word])
    space2.require([word])
    if nearest_neighbor(space2, space1.vector(word)) != word:
        return False
    return nearest_neighbor(space1, space2.vector(word)) == word


def default_anchors(
    space1: EmbeddingSpace,
    space2: EmbeddingSpace,
    table1=None,
    table2=None,
    zipf_threshold: float = 5.0,
) -> list[str]:
    """Anchor choice for ``--anchors auto``: shared-vocabulary words with
    Zipf score above threshold in both tables, else the full shared vocab.

    Kept in vocabulary order of ``space1`` for determinism.
    """
    shared = [w for w in space1.words if w in space2]
    if not shared:
        raise DataError("spaces share no vocabulary; cannot pick anchors")
    if table1 is None or table2 is None:
        return shared
    frequent = [
        w
        for w in shared
        if w in table1
        and w in table2
        and table1.zipf(w) > zipf_threshold
        and table2.zipf(w) > zipf_threshold
    ]
    return frequent if frequent else shared
