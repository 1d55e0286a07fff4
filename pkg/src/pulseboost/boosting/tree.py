"""Regression-tree growth and evaluation.

Trees route a row left iff row[feature] < threshold. Growth is greedy:
each node takes the best qualifying split or becomes a leaf holding the
regularized Newton weight -G/(H+lambda). Internal nodes record the raw
(pre-gamma) gain of their split, which is what gain attribution sums.

Children inherit per-feature sort order by a one-pass partition of the
parent's id matrix, so only the root ever pays for sorting.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from ._kernels import partition_ids
from .loss import GradPair
from .splitting import _grad_arrays, leaf_weight, presort_ids, scan_node


@dataclass(frozen=True)
class Leaf:
    weight: float


@dataclass(frozen=True)
class Internal:
    feature: int
    threshold: float
    gain: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Internal]


def iter_nodes(root: TreeNode) -> Iterator[TreeNode]:
    """Pre-order traversal."""
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Internal):
            stack.append(node.right)
            stack.append(node.left)


def tree_depth(root: TreeNode) -> int:
    if isinstance(root, Leaf):
        return 0
    return 1 + max(tree_depth(root.left), tree_depth(root.right))


def tree_predict(root: TreeNode, X: np.ndarray) -> np.ndarray:
    """Leaf weight reached by every row."""
    X = np.asarray(X, dtype=np.float64)
    out = np.empty(X.shape[0], dtype=np.float64)
    idx = np.arange(X.shape[0])
    stack: list[tuple[TreeNode, np.ndarray]] = [(root, idx)]
    while stack:
        node, rows = stack.pop()
        if isinstance(node, Leaf):
            out[rows] = node.weight
            continue
        go_left = X[rows, node.feature] < node.threshold
        stack.append((node.left, rows[go_left]))
        stack.append((node.right, rows[~go_left]))
    return out


class _Grower:
    """One tree build over a presorted id matrix."""

    def __init__(
        self, XT: np.ndarray, g: np.ndarray, h: np.ndarray,
        max_depth: int, reg_lambda: float, gamma: float,
        min_child_hessian: float,
        allowed: np.ndarray | None,
        pool: ThreadPoolExecutor | None, n_blocks: int,
    ):
        self.XT = XT
        self.g = g
        self.h = h
        self.max_depth = max_depth
        self.reg_lambda = reg_lambda
        self.gamma = gamma
        self.min_child_hessian = min_child_hessian
        self.allowed = allowed
        self.pool = pool
        self.n_blocks = n_blocks
        self._member = np.zeros(XT.shape[1], dtype=np.bool_)
        self.leaf_rows: list[tuple[np.ndarray, float]] = []

    def grow(self, S: np.ndarray, depth: int) -> TreeNode:
        ids = S[0]
        G = float(self.g[ids].sum())
        H = float(self.h[ids].sum())
        if depth >= self.max_depth or S.shape[1] < 2:
            return self._leaf(ids, G, H)
        cand = scan_node(
            S, self.XT, self.g, self.h, G, H,
            self.reg_lambda, self.gamma, self.min_child_hessian,
            self.allowed, self.pool, self.n_blocks,
        )
        if cand is None:
            return self._leaf(ids, G, H)
        SL, SR = self._partition(S, cand.feature, cand.pos)
        feature, threshold, gain = cand.feature, cand.threshold, cand.gain_raw
        del S, ids, cand  # free the parent before recursing
        left = self.grow(SL, depth + 1)
        del SL
        right = self.grow(SR, depth + 1)
        return Internal(
            feature=feature, threshold=threshold, gain=gain,
            left=left, right=right,
        )

    def _leaf(self, ids: np.ndarray, G: float, H: float) -> Leaf:
        w = leaf_weight(G, H, self.reg_lambda)
        self.leaf_rows.append((ids.copy(), w))
        return Leaf(weight=w)

    def _partition(self, S: np.ndarray, feature: int, pos: int):
        d, m = S.shape
        n_left = pos + 1
        left_ids = S[feature, :n_left]
        member = self._member
        member[left_ids] = True
        SL = np.empty((d, n_left), dtype=np.int32)
        SR = np.empty((d, m - n_left), dtype=np.int32)
        partition_ids(S, member, SL, SR)
        member[SL[0]] = False
        return SL, SR


def grow_tree(
    S_root: np.ndarray, XT: np.ndarray, g: np.ndarray, h: np.ndarray,
    max_depth: int, reg_lambda: float, gamma: float, min_child_hessian: float,
    allowed: np.ndarray | None = None,
    pool: ThreadPoolExecutor | None = None, n_blocks: int = 1,
) -> tuple[TreeNode, list[tuple[np.ndarray, float]]]:
    """Grow one tree from a root presort matrix and full gradient arrays.

    Returns the root node and the (row ids, leaf weight) pairs covering
    every row of S_root.
    """
    grower = _Grower(
        XT, g, h, max_depth, reg_lambda, gamma, min_child_hessian,
        allowed, pool, n_blocks,
    )
    root = grower.grow(S_root, 0)
    return root, grower.leaf_rows


def build_tree(
    feature_matrix: np.ndarray,
    grads: Sequence[GradPair] | tuple[np.ndarray, np.ndarray],
    max_depth: int = 8,
    reg_lambda: float = 1.0,
    gamma: float = 0.0,
    min_child_hessian: float = 1e-3,
) -> TreeNode:
    """Grow one tree over every row of the matrix."""
    X = np.asarray(feature_matrix, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError(f"feature matrix must be 2-D and non-empty, got {X.shape}")
    g, h = _grad_arrays(grads, X.shape[0])
    S = presort_ids(X, np.arange(X.shape[0]))
    XT = np.ascontiguousarray(X.T)
    root, _ = grow_tree(
        S, XT, g, h, max_depth, reg_lambda, gamma, min_child_hessian
    )
    return root
