"""Exact greedy split search over presorted feature columns.

Candidate thresholds are midpoints between adjacent distinct sorted
values of each feature. A split qualifies when its regularized gain,
after the gamma deduction, is non-negative and both children carry at
least min_child_hessian total hessian. Ties break toward the lower
feature index, then the lower threshold; together with the fixed
feature-block reduction order this makes training deterministic for any
worker-thread count.

The node state is one (features, samples) matrix S of row ids, row j
sorted by feature j; values and gradients are gathered through the
transposed feature matrix during the scan.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DegenerateLeaf
from ..parallel import column_blocks, map_ordered
from ._kernels import scan_features
from .loss import GradPair


def leaf_weight(G: float, H: float, reg_lambda: float) -> float:
    """Minimizer -G/(H+lambda) of the second-order leaf objective."""
    denom = H + reg_lambda
    if denom <= 0.0:
        raise DegenerateLeaf(f"H + lambda must be positive, got {denom}")
    return -G / denom


def split_gain(
    G_L: float, H_L: float, G_R: float, H_R: float,
    reg_lambda: float, gamma: float,
) -> float:
    """Loss reduction of a split, already reduced by the gamma penalty."""
    lam = reg_lambda
    parent = (G_L + G_R) ** 2 / (H_L + H_R + lam)
    return 0.5 * (G_L**2 / (H_L + lam) + G_R**2 / (H_R + lam) - parent) - gamma


@dataclass(frozen=True)
class SplitCandidate:
    """Winning split of one node: feature, sorted position, and gains."""

    feature: int
    pos: int            # left child = first pos+1 rows of the sorted column
    threshold: float
    gain: float         # gamma-deducted, the accept/reject quantity
    gain_raw: float     # before deduction, stored on the tree node


def _midpoint_threshold(lo: float, hi: float) -> float:
    """Midpoint guaranteed to route lo left and hi right."""
    t = lo + 0.5 * (hi - lo)
    if not t > lo:
        return hi
    return min(t, hi)


def presort_ids(X: np.ndarray, ids: np.ndarray) -> np.ndarray:
    """(features, samples) id matrix, each row sorted by its feature."""
    ids = np.asarray(ids, dtype=np.int64)
    order = np.argsort(X[ids], axis=0, kind="stable")
    return np.ascontiguousarray(ids[order].T.astype(np.int32))


def scan_node(
    S: np.ndarray, XT: np.ndarray, g: np.ndarray, h: np.ndarray,
    G_tot: float, H_tot: float,
    reg_lambda: float, gamma: float, min_child_hessian: float,
    allowed: np.ndarray | None = None,
    pool: ThreadPoolExecutor | None = None,
    n_blocks: int = 1,
) -> SplitCandidate | None:
    """Best qualifying split given a node's presorted id matrix.

    ``XT`` is the full feature matrix transposed (features, rows);
    ``g``/``h`` are full per-row gradient arrays. Returns None when no
    candidate has gamma-deducted gain >= 0.
    """
    d, m = S.shape
    if m < 2:
        return None
    best_gain = np.empty(d, dtype=np.float64)
    best_pos = np.empty(d, dtype=np.int64)

    def run(block: tuple[int, int]) -> None:
        c0, c1 = block
        scan_features(
            S[c0:c1], XT[c0:c1], g, h,
            G_tot, H_tot, reg_lambda, gamma, min_child_hessian,
            best_gain[c0:c1], best_pos[c0:c1],
        )

    blocks = column_blocks(d, n_blocks if pool is not None else 1)
    map_ordered(run, blocks, pool)

    feature, pos, gain = -1, -1, -np.inf
    for j in range(d):
        if allowed is not None and not allowed[j]:
            continue
        if best_pos[j] >= 0 and best_gain[j] > gain:
            feature, pos, gain = j, int(best_pos[j]), float(best_gain[j])
    if feature < 0 or gain < 0.0:
        return None
    threshold = _midpoint_threshold(
        float(XT[feature, S[feature, pos]]),
        float(XT[feature, S[feature, pos + 1]]),
    )
    return SplitCandidate(
        feature=feature, pos=pos, threshold=threshold,
        gain=gain, gain_raw=gain + gamma,
    )


@dataclass(frozen=True)
class BestSplit:
    """Public result of find_best_split, with the sample partition."""

    feature: int
    threshold: float
    gain: float
    left_indices: np.ndarray
    right_indices: np.ndarray


def _grad_arrays(
    grads: Sequence[GradPair] | tuple[np.ndarray, np.ndarray], n: int
) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(grads, tuple) and len(grads) == 2:
        g = np.asarray(grads[0], dtype=np.float64)
        h = np.asarray(grads[1], dtype=np.float64)
    else:
        g = np.array([gp.g for gp in grads], dtype=np.float64)
        h = np.array([gp.h for gp in grads], dtype=np.float64)
    if g.shape != (n,) or h.shape != (n,):
        raise ValueError(f"gradients must align with the {n} samples")
    return g, h


def find_best_split(
    sample_indices: np.ndarray,
    feature_matrix: np.ndarray,
    grads: Sequence[GradPair] | tuple[np.ndarray, np.ndarray],
    reg_lambda: float = 1.0,
    gamma: float = 0.0,
    min_child_hessian: float = 1e-3,
) -> BestSplit | None:
    """Exact-greedy search over a sample set, with the resulting partition.

    ``grads`` holds the gradient pair of every row of ``feature_matrix``
    (full-matrix alignment, indexed by sample_indices). Returns None when
    fewer than two samples are given or no split qualifies.
    """
    X = np.asarray(feature_matrix, dtype=np.float64)
    ids = np.asarray(sample_indices, dtype=np.int64)
    if ids.ndim != 1 or len(ids) < 2:
        return None
    g, h = _grad_arrays(grads, X.shape[0])
    S = presort_ids(X, ids)
    XT = np.ascontiguousarray(X.T)
    cand = scan_node(
        S, XT, g, h, float(g[ids].sum()), float(h[ids].sum()),
        reg_lambda, gamma, min_child_hessian,
    )
    if cand is None:
        return None
    left = np.sort(S[cand.feature, : cand.pos + 1])
    right = np.sort(S[cand.feature, cand.pos + 1:])
    return BestSplit(
        feature=cand.feature, threshold=cand.threshold, gain=cand.gain,
        left_indices=left.astype(np.int64), right_indices=right.astype(np.int64),
    )
