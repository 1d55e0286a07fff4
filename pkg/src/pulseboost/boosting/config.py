"""Training hyperparameters for the boosted-tree classifier."""

from __future__ import annotations

from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class TrainConfig:
    """Immutable knobs for one training run.

    Defaults follow the evaluation setup this toolkit reproduces
    (learning_rate 0.01, 1500 trees, depth 8); reg_lambda penalizes leaf
    weights (L2), gamma is the minimum loss reduction a split must clear,
    and min_child_hessian keeps leaves from collapsing onto zero-hessian
    sample sets. subsample/colsample enable optional per-tree row and
    column bagging (1.0 disables). positive_weight multiplies g and h of
    positive samples to counter class imbalance.
    """

    n_trees: int = 1500
    learning_rate: float = 0.01
    max_depth: int = 8
    reg_lambda: float = 1.0
    gamma: float = 0.0
    min_child_hessian: float = 1e-3
    base_score: float = 0.0
    seed: int = 0
    subsample: float = 1.0
    colsample: float = 1.0
    positive_weight: float = 1.0

    def __post_init__(self):
        if self.n_trees < 0:
            raise ValueError("n_trees must be >= 0")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if self.reg_lambda < 0 or self.gamma < 0 or self.min_child_hessian < 0:
            raise ValueError("reg_lambda, gamma, min_child_hessian must be >= 0")
        if not 0.0 < self.subsample <= 1.0 or not 0.0 < self.colsample <= 1.0:
            raise ValueError("subsample and colsample must be in (0, 1]")
        if self.positive_weight <= 0:
            raise ValueError("positive_weight must be > 0")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        return cls(**d)
