"""Sklearn-style estimator facade over the boosting engine."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .config import TrainConfig
from .training import fit_ensemble


class GradientBoostedTreesClassifier(BaseEstimator, ClassifierMixin):
    """Binary classifier: regularized second-order boosted trees.

    Thin fit/predict wrapper so the engine composes with sklearn
    pipelines, grid search, and clone(); the trained model itself lives
    in ``ensemble_`` and can be serialized with
    :func:`pulseboost.boosting.model_io.save_model`.
    """

    def __init__(
        self,
        n_trees: int = 1500,
        learning_rate: float = 0.01,
        max_depth: int = 8,
        reg_lambda: float = 1.0,
        gamma: float = 0.0,
        min_child_hessian: float = 1e-3,
        base_score: float = 0.0,
        seed: int = 0,
        subsample: float = 1.0,
        colsample: float = 1.0,
        positive_weight: float = 1.0,
        n_workers: int | None = None,
    ):
        self.n_trees = n_trees
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.reg_lambda = reg_lambda
        self.gamma = gamma
        self.min_child_hessian = min_child_hessian
        self.base_score = base_score
        self.seed = seed
        self.subsample = subsample
        self.colsample = colsample
        self.positive_weight = positive_weight
        self.n_workers = n_workers

    def _config(self) -> TrainConfig:
        return TrainConfig(
            n_trees=self.n_trees,
            learning_rate=self.learning_rate,
            max_depth=self.max_depth,
            reg_lambda=self.reg_lambda,
            gamma=self.gamma,
            min_child_hessian=self.min_child_hessian,
            base_score=self.base_score,
            seed=self.seed,
            subsample=self.subsample,
            colsample=self.colsample,
            positive_weight=self.positive_weight,
        )

    def fit(self, X, y):
        self.ensemble_ = fit_ensemble(X, y, self._config(), self.n_workers)
        self.train_losses_ = self.ensemble_.train_losses
        self.n_features_in_ = self.ensemble_.n_features
        self.classes_ = np.array([0, 1])
        return self

    def decision_function(self, X) -> np.ndarray:
        return self.ensemble_.predict_margin(X)

    def predict_margin(self, X) -> np.ndarray:
        return self.ensemble_.predict_margin(X)

    def predict_proba(self, X) -> np.ndarray:
        pos = self.ensemble_.predict_proba(X)
        return np.column_stack([1.0 - pos, pos])

    def predict(self, X) -> np.ndarray:
        return (self.ensemble_.predict_proba(X) >= 0.5).astype(int)
