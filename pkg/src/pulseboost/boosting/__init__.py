from .config import TrainConfig
from .estimator import GradientBoostedTreesClassifier
from .loss import (
    GradPair,
    logistic_grad_hess,
    logistic_grad_hess_batch,
    logistic_loss,
    sigmoid,
)
from .model_io import load_model, load_model_with_header, save_model
from .splitting import BestSplit, find_best_split, leaf_weight, split_gain
from .tree import Internal, Leaf, TreeNode, build_tree, iter_nodes, tree_depth, tree_predict
from .training import (
    TreeEnsemble,
    count_leaves,
    feature_importance,
    fit_ensemble,
    predict_margin,
    predict_proba,
    with_pipeline_metadata,
)

__all__ = [
    "BestSplit",
    "GradPair",
    "GradientBoostedTreesClassifier",
    "Internal",
    "Leaf",
    "TrainConfig",
    "TreeEnsemble",
    "TreeNode",
    "build_tree",
    "count_leaves",
    "feature_importance",
    "find_best_split",
    "fit_ensemble",
    "iter_nodes",
    "leaf_weight",
    "load_model",
    "load_model_with_header",
    "logistic_grad_hess",
    "logistic_grad_hess_batch",
    "logistic_loss",
    "predict_margin",
    "predict_proba",
    "save_model",
    "sigmoid",
    "split_gain",
    "tree_depth",
    "tree_predict",
    "with_pipeline_metadata",
]
