"""Statistical core: per-word associations, WEAT/SWEAT scores, effect sizes,
and permutation-test p-values.

All group sums go through math.fsum so scores are independent of word input
order (fsum returns the correctly rounded true sum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .embeddings import EmbeddingSpace, cosine
from .errors import DataError

__all__ = [
    "PoleWordsets",
    "TopicWordset",
    "PermutationConfig",
    "SweatResult",
    "WeatResult",
    "single_word_association",
    "weat_score",
    "sweat_score",
    "effect_size",
    "permutation_test",
    "run_sweat",
    "run_weat",
]

# Absolute slack when comparing permuted statistics against the observed one,
# so ties are not broken by last-ulp summation noise. Association sums live
# in [-2n, 2n] with n small, so this is far below any real difference.
_TIE_EPS = 1e-10


@dataclass
class TopicWordset:
    """Named word list for the topic under study (or a WEAT target set)."""

    label: str
    words: list

    def __post_init__(self):
        self.words = list(self.words)
        if not self.words:
            raise DataError(f"topic wordset '{self.label}' is empty")
        if len(set(self.words)) != len(self.words):
            raise DataError(f"topic wordset '{self.label}' has duplicate words")


@dataclass
class PoleWordsets:
    """The two attribute wordsets of opposite valence."""

    label_a: str
    label_b: str
    words_a: list
    words_b: list

    def __post_init__(self):
        self.words_a = list(self.words_a)
        self.words_b = list(self.words_b)
        if not self.words_a or not self.words_b:
            raise DataError("pole wordsets must both be nonempty")
        if len(set(self.words_a)) != len(self.words_a):
            raise DataError(f"pole '{self.label_a}' has duplicate words")
        if len(set(self.words_b)) != len(self.words_b):
            raise DataError(f"pole '{self.label_b}' has duplicate words")
        overlap = set(self.words_a) & set(self.words_b)
        if overlap:
            raise DataError(
                "pole wordsets overlap: " + ", ".join(sorted(overlap))
            )


@dataclass
class PermutationConfig:
    """How to run the permutation test.

    ``auto`` enumerates every partition when C(2n, n) <= exact_limit and
    falls back to seeded Monte Carlo sampling otherwise.
    """

    mode: str = "auto"
    samples: int = 10_000
    seed: int = 0
    exact_limit: int = 500_000

    def validate(self):
        if self.mode not in ("exact", "montecarlo", "auto"):
            raise DataError(f"unknown permutation mode '{self.mode}'")
        if self.mode == "montecarlo" and self.samples < 100:
            raise DataError("montecarlo mode needs at least 100 samples")
        if self.exact_limit < 1:
            raise DataError("exact_limit must be >= 1")


@dataclass
class SweatResult:
    """Score, effect size and significance for one SWEAT run."""

    score: float
    effect_size: float
    p_value: float
    tail: str
    n_permutations: int
    method: str
    per_word: list  # (word, s-value in space1, s-value in space2)
    associations: list  # ["<space label> ~ <pole label>", ...]

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "effect_size": self.effect_size,
            "p_value": self.p_value,
            "tail": self.tail,
            "n_permutations": self.n_permutations,
            "method": self.method,
            "per_word": [list(t) for t in self.per_word],
            "associations": list(self.associations),
        }


@dataclass
class WeatResult:
    """Same shape as SweatResult for the single-space WEAT."""

    score: float
    effect_size: float
    p_value: float
    tail: str
    n_permutations: int
    method: str
    per_word_x: list  # (word, s-value)
    per_word_y: list
    associations: list

    def to_dict(self) -> dict:
        return {
            "score": self.score,
            "effect_size": self.effect_size,
            "p_value": self.p_value,
            "tail": self.tail,
            "n_permutations": self.n_permutations,
            "method": self.method,
            "per_word_x": [list(t) for t in self.per_word_x],
            "per_word_y": [list(t) for t in self.per_word_y],
            "associations": list(self.associations),
        }


def single_word_association(
    word: str, space: EmbeddingSpace, poles: PoleWordsets
) -> float:
    """Mean cosine of ``word`` to pole A minus mean cosine to pole B."""
    space.require([word] + poles.words_a + poles.words_b, "association inputs")
    wv = space.vector(word)
    mean_a = math.fsum(cosine(wv, space.vector(a)) for a in poles.words_a)
    mean_b = math.fsum(cosine(wv, space.vector(b)) for b in poles.words_b)
    return mean_a / len(poles.words_a) - mean_b / len(poles.words_b)


def weat_score(
    x: TopicWordset, y: TopicWordset, space: EmbeddingSpace, poles: PoleWordsets
) -> float:
    """Sum of X associations minus sum of Y associations in one space."""
    overlap = set(x.words) & set(y.words)
    if overlap:
        raise DataError(
            "target wordsets overlap: " + ", ".join(sorted(overlap))
        )
    sx = [single_word_association(w, space, poles) for w in x.words]
    sy = [single_word_association(w, space, poles) for w in y.words]
    return math.fsum(sx) - math.fsum(sy)


def sweat_score(
    topic: TopicWordset,
    space1: EmbeddingSpace,
    space2: EmbeddingSpace,
    poles: PoleWordsets,
) -> float:
    """Summed associations in space1 minus summed associations in space2.

    Positive sign: the topic leans toward pole A in space1 relative to
    space2; negative sign is the reverse.
    """
    s1 = [single_word_association(w, space1, poles) for w in topic.words]
    s2 = [single_word_association(w, space2, poles) for w in topic.words]
    return math.fsum(s1) - math.fsum(s2)


def effect_size(values_1, values_2) -> float:
    """Standardized mean difference: (mean1 - mean2) / population std of the
    pooled values."""
    values_1 = list(values_1)
    values_2 = list(values_2)
    if not values_1 or not values_2:
        raise DataError("effect size needs nonempty value lists")
    pooled = np.array(values_1 + values_2, dtype=np.float64)
    std = float(pooled.std(ddof=0))
    if std == 0.0:
        raise DataError("degenerate association distribution (zero std)")
    mean1 = math.fsum(values_1) / len(values_1)
    mean2 = math.fsum(values_2) / len(values_2)
    return (mean1 - mean2) / std


def _exact_p(pool, n, s_obs, tail):
    count = 0
    total = 0
    pool = list(pool)
    for idx in combinations(range(len(pool)), n):
        group1 = math.fsum(pool[i] for i in idx)
        group2 = math.fsum(pool[i] for i in range(len(pool)) if i not in set(idx))
        s_perm = group1 - group2
        total += 1
        if _counts(s_perm, s_obs, tail):
            count += 1
    return count / total, total


def _counts(s_perm, s_obs, tail) -> bool:
    if tail == "two_sided":
        return abs(s_perm) >= abs(s_obs) - _TIE_EPS
    if s_obs >= 0:
        return s_perm >= s_obs - _TIE_EPS
    return s_perm <= s_obs + _TIE_EPS


def _montecarlo_p(pool, n, s_obs, tail, samples, seed):
    rng = np.random.default_rng(seed)
    pool = np.asarray(pool, dtype=np.float64)
    total = pool.sum()
    # One seeded stream of partitions; result is independent of evaluation
    # order or any parallel split of the counting below.
    count = 0
    chunk = 100_000
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        order = np.argsort(rng.random((m, pool.size)), axis=1)
        group1 = pool[order[:, :n]].sum(axis=1)
        s_perm = 2.0 * group1 - total
        if tail == "two_sided":
            count += int(np.count_nonzero(np.abs(s_perm) >= abs(s_obs) - _TIE_EPS))
        elif s_obs >= 0:
            count += int(np.count_nonzero(s_perm >= s_obs - _TIE_EPS))
        else:
            count += int(np.count_nonzero(s_perm <= s_obs + _TIE_EPS))
        done += m
    return count / samples, samples


def permutation_test(
    values_1,
    values_2,
    cfg: PermutationConfig | None = None,
    tail: str = "directional",
):
    """Significance of S = sum(values_1) - sum(values_2) over equal-size
    re-partitions of the pooled values.

    Directional tail counts permuted scores at least as extreme in the
    direction of the observed score; two_sided compares absolute values.
    Returns (p_value, n_permutations, method, tail).
    """
    cfg = cfg or PermutationConfig()
    cfg.validate()
    if tail not in ("directional", "two_sided"):
        raise DataError(f"unknown tail '{tail}'")
    values_1 = list(values_1)
    values_2 = list(values_2)
    n = len(values_1)
    if n == 0 or len(values_2) == 0:
        raise DataError("permutation test needs nonempty groups")
    if len(values_2) != n:
        raise DataError(
            f"permutation test requires equal group sizes, got {n} and "
            f"{len(values_2)}"
        )
    s_obs = math.fsum(values_1) - math.fsum(values_2)
    pool = values_1 + values_2

    method = cfg.mode
    if method == "auto":
        method = "exact" if math.comb(2 * n, n) <= cfg.exact_limit else "montecarlo"
    if method == "exact":
        p, total = _exact_p(pool, n, s_obs, tail)
    else:
        p, total = _montecarlo_p(pool, n, s_obs, tail, cfg.samples, cfg.seed)
    return p, total, method, tail


def _association_labels(score: float, label_1: str, label_2: str,
                        poles: PoleWordsets) -> list:
    # Sign of exact zero reads as non-negative: first group ~ pole A.
    if score >= 0:
        return [f"{label_1} ~ {poles.label_a}", f"{label_2} ~ {poles.label_b}"]
    return [f"{label_1} ~ {poles.label_b}", f"{label_2} ~ {poles.label_a}"]


def run_sweat(
    topic: TopicWordset,
    space1: EmbeddingSpace,
    space2: EmbeddingSpace,
    poles: PoleWordsets,
    cfg: PermutationConfig | None = None,
    tail: str = "directional",
) -> SweatResult:
    """Full SWEAT: per-word values computed once and shared by the score,
    the effect size, and the permutation test."""
    s1 = [single_word_association(w, space1, poles) for w in topic.words]
    s2 = [single_word_association(w, space2, poles) for w in topic.words]
    score = math.fsum(s1) - math.fsum(s2)
    d = effect_size(s1, s2)
    p, total, method, tail = permutation_test(s1, s2, cfg, tail)
    return SweatResult(
        score=score,
        effect_size=d,
        p_value=p,
        tail=tail,
        n_permutations=total,
        method=method,
        per_word=list(zip(topic.words, s1, s2)),
        associations=_association_labels(score, space1.label, space2.label, poles),
    )


def run_weat(
    x: TopicWordset,
    y: TopicWordset,
    space: EmbeddingSpace,
    poles: PoleWordsets,
    cfg: PermutationConfig | None = None,
    tail: str = "directional",
) -> WeatResult:
    """Full WEAT within one space, reported in the same shape as SWEAT."""
    overlap = set(x.words) & set(y.words)
    if overlap:
        raise DataError("target wordsets overlap: " + ", ".join(sorted(overlap)))
    if len(x.words) != len(y.words):
        raise DataError(
            "WEAT permutation test requires equal-size target wordsets, got "
            f"{len(x.words)} and {len(y.words)}"
        )
    sx = [single_word_association(w, space, poles) for w in x.words]
    sy = [single_word_association(w, space, poles) for w in y.words]
    score = math.fsum(sx) - math.fsum(sy)
    d = effect_size(sx, sy)
    p, total, method, tail = permutation_test(sx, sy, cfg, tail)
    return WeatResult(
        score=score,
        effect_size=d,
        p_value=p,
        tail=tail,
        n_permutations=total,
        method=method,
        per_word_x=list(zip(x.words, sx)),
        per_word_y=list(zip(y.words, sy)),
        associations=_association_labels(score, x.label, y.label, poles),
    )
