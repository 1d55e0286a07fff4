"""Boosted-ensemble training: stage-wise Newton rounds.

Each round evaluates the loss derivatives at the current margins, grows
one tree on them, and advances the margins by learning_rate times the
tree output. Training is deterministic for a fixed config and dataset:
the only randomness (row/column bagging) is driven by the config seed,
and the split tie-break plus ordered reductions make the result
independent of the worker-thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import DegenerateLabels, SchemaMismatch
from ..parallel import get_worker_count
from ..preprocessing import StandardizationStats
from ..schema import FeatureSchema
from .config import TrainConfig
from .loss import logistic_grad_hess_batch, logistic_loss, sigmoid
from .splitting import presort_ids
from .tree import Internal, Leaf, TreeNode, grow_tree, iter_nodes, tree_predict


@dataclass
class TreeEnsemble:
    """An ordered forest plus everything needed to score raw feature rows.

    ``stats`` and ``input_schema``, when present, pin the exact
    training-time standardization and column layout; ``train_losses``
    is in-memory training metadata and is not serialized.
    """

    trees: tuple[TreeNode, ...]
    learning_rate: float
    base_score: float
    n_features: int
    config: TrainConfig
    input_schema: FeatureSchema | None = None
    stats: StandardizationStats | None = None
    train_losses: tuple[float, ...] = field(default=(), compare=False)

    @property
    def n_trees(self) -> int:
        return len(self.trees)

    def fingerprint(self) -> str:
        if self.input_schema is not None:
            return self.input_schema.fingerprint()
        return f"columns:{self.n_features}"

    def _check_rows(self, rows: np.ndarray) -> np.ndarray:
        X = np.asarray(rows, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise SchemaMismatch(
                f"model expects {self.n_features} columns, got "
                f"{X.shape[1] if X.ndim == 2 else X.shape}"
            )
        return X

    def predict_margin(self, rows: np.ndarray) -> np.ndarray:
        """base_score + learning_rate * sum of tree outputs, per row."""
        X = self._check_rows(rows)
        margins = np.full(X.shape[0], self.base_score, dtype=np.float64)
        for tree in self.trees:
            margins += self.learning_rate * tree_predict(tree, X)
        return margins

    def predict_proba(self, rows: np.ndarray) -> np.ndarray:
        return sigmoid(self.predict_margin(rows))


def predict_margin(ensemble: TreeEnsemble, rows: np.ndarray) -> np.ndarray:
    return ensemble.predict_margin(rows)


def predict_proba(ensemble: TreeEnsemble, rows: np.ndarray) -> np.ndarray:
    return ensemble.predict_proba(rows)


def _validate_training_inputs(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError(f"training matrix must be 2-D and non-empty, got {X.shape}")
    if not np.isfinite(X).all():
        raise ValueError("training matrix contains NaN or inf")
    if y.shape != (X.shape[0],):
        raise ValueError("labels must be one per row")
    uniq = np.unique(y)
    if not np.isin(uniq, (0, 1)).all():
        raise DegenerateLabels(f"labels must be binary 0/1, got values {uniq}")
    if len(uniq) < 2:
        raise DegenerateLabels("training labels contain a single class")
    return X, y.astype(np.float64)


def fit_ensemble(
    train_matrix: np.ndarray,
    labels: np.ndarray,
    config: TrainConfig,
    n_workers: int | None = None,
) -> TreeEnsemble:
    """Train an ensemble of config.n_trees trees.

    ``train_losses`` on the result holds the mean training log-loss at
    the base margin and after every round (n_trees + 1 entries).
    """
    X, y = _validate_training_inputs(train_matrix, labels)
    n, d = X.shape
    workers = get_worker_count(n_workers)
    rng = np.random.default_rng(config.seed)

    margins = np.full(n, config.base_score, dtype=np.float64)
    losses = [logistic_loss(y, margins)]
    trees: list[TreeNode] = []

    XT = np.ascontiguousarray(X.T)
    full_ids = np.arange(n, dtype=np.int64)
    shared_root = None
    if config.subsample >= 1.0:
        shared_root = presort_ids(X, full_ids)

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for _ in range(config.n_trees):
            g, h = logistic_grad_hess_batch(y, margins, config.positive_weight)

            if config.subsample < 1.0:
                k = max(2, int(np.floor(n * config.subsample)))
                row_ids = np.sort(rng.choice(n, size=k, replace=False))
                S_root = presort_ids(X, row_ids)
            else:
                S_root = shared_root

            allowed = None
            if config.colsample < 1.0:
                k = max(1, int(np.floor(d * config.colsample)))
                allowed = np.zeros(d, dtype=bool)
                allowed[rng.choice(d, size=k, replace=False)] = True

            root, leaf_rows = grow_tree(
                S_root, XT, g, h,
                config.max_depth, config.reg_lambda, config.gamma,
                config.min_child_hessian,
                allowed=allowed, pool=pool, n_blocks=workers,
            )
            trees.append(root)

            if config.subsample < 1.0:
                margins += config.learning_rate * tree_predict(root, X)
            else:
                for ids, w in leaf_rows:
                    margins[ids] += config.learning_rate * w
            losses.append(logistic_loss(y, margins))
    finally:
        if pool is not None:
            pool.shutdown(wait=True)

    return TreeEnsemble(
        trees=tuple(trees),
        learning_rate=config.learning_rate,
        base_score=config.base_score,
        n_features=d,
        config=config,
        train_losses=tuple(losses),
    )


def with_pipeline_metadata(
    ensemble: TreeEnsemble,
    stats: StandardizationStats,
    input_schema: FeatureSchema,
) -> TreeEnsemble:
    """Attach the standardization stats and input schema a model scores with."""
    if stats.n_columns != ensemble.n_features:
        raise SchemaMismatch(
            f"stats cover {stats.n_columns} columns, model has {ensemble.n_features}"
        )
    if input_schema.total_dim != ensemble.n_features:
        raise SchemaMismatch(
            f"schema covers {input_schema.total_dim} columns, model has "
            f"{ensemble.n_features}"
        )
    return replace(ensemble, stats=stats, input_schema=input_schema)


def feature_importance(
    ensemble: TreeEnsemble, schema: FeatureSchema | None = None
) -> tuple[np.ndarray, dict[str, float] | None]:
    """Total split gain per feature and, with a schema, per category."""
    per_feature = np.zeros(ensemble.n_features, dtype=np.float64)
    for tree in ensemble.trees:
        for node in iter_nodes(tree):
            if isinstance(node, Internal):
                per_feature[node.feature] += node.gain
    schema = schema if schema is not None else ensemble.input_schema
    if schema is None:
        return per_feature, None
    if schema.total_dim != ensemble.n_features:
        raise SchemaMismatch(
            f"schema covers {schema.total_dim} columns, model has {ensemble.n_features}"
        )
    per_category = {
        name: float(per_feature[start:stop].sum())
        for name, (start, stop) in schema.spans().items()
    }
    return per_feature, per_category


def count_leaves(ensemble: TreeEnsemble) -> int:
    return sum(
        1 for tree in ensemble.trees for node in iter_nodes(tree)
        if isinstance(node, Leaf)
    )
