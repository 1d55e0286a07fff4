"""ROC-AUC via the rank (Mann-Whitney) estimator with midrank ties.

AUC is the evaluation metric throughout: it is threshold-free and fair
under the heavy class imbalance typical of deepfake corpora.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import SingleClass

LEVELS = ("frame", "segment", "video")


@dataclass(frozen=True)
class ScoredExample:
    """One scored evaluation unit at frame, segment, or video level."""

    unit_id: str
    score: float
    label: int
    level: str

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"level must be one of {LEVELS}, got {self.level!r}")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")
        if not np.isfinite(self.score):
            raise ValueError(f"score must be finite, got {self.score}")


def midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks; tied values share the mean of their rank range."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    sv = v[order]
    n = len(v)
    ranks = np.empty(n, dtype=np.float64)
    # Boundaries of runs of equal sorted values.
    starts = np.flatnonzero(np.r_[True, sv[1:] != sv[:-1]])
    stops = np.r_[starts[1:], n]
    for a, b in zip(starts, stops):
        ranks[order[a:b]] = (a + b + 1) / 2.0
    return ranks


def roc_auc_from_arrays(scores: np.ndarray, labels: np.ndarray) -> float:
    """Probability a random positive outranks a random negative.

    Equals the trapezoidal area under the ROC curve; ties count half.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be equal-length 1-D arrays")
    if not np.isfinite(scores).all():
        raise ValueError("scores must be finite")
    n_pos = int((labels == 1).sum())
    n_neg = int((labels == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise SingleClass(
            f"AUC needs both classes; got {n_pos} positives, {n_neg} negatives"
        )
    ranks = midranks(scores)
    pos_rank_sum = float(ranks[labels == 1].sum())
    u = pos_rank_sum - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def roc_auc(examples: Sequence[ScoredExample] | Iterable[ScoredExample]) -> float:
    ex = list(examples)
    scores = np.array([e.score for e in ex], dtype=np.float64)
    labels = np.array([e.label for e in ex], dtype=np.int64)
    return roc_auc_from_arrays(scores, labels)
