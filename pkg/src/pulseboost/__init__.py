"""Deepfake detection toolkit: fused facial-landmark and heart-rate
chrominance features, train-only standardization, sliding-window
segmentation, a regularized second-order boosted-tree classifier, and
frame/segment/video-level AUC evaluation with an ablation harness."""

from .ablation import (
    AblationReport,
    AblationRow,
    DEFAULT_COMBINATION_SETS,
    DEFAULT_INDIVIDUAL_SETS,
    default_ablation_sets,
    fit_on_tables,
    run_ablation,
)
from .boosting import (
    GradientBoostedTreesClassifier,
    TrainConfig,
    TreeEnsemble,
    build_tree,
    feature_importance,
    find_best_split,
    fit_ensemble,
    leaf_weight,
    load_model,
    logistic_grad_hess,
    logistic_loss,
    predict_margin,
    predict_proba,
    save_model,
    split_gain,
    with_pipeline_metadata,
)
from .errors import PulseboostError
from .features import (
    DegenerateRatioCounter,
    IntensityConvention,
    assemble_frame_vector,
    heart_rate_vector,
)
from .manifest import DatasetManifest, VideoEntry, load_manifest, read_manifest
from .metrics import ScoredExample, roc_auc, roc_auc_from_arrays
from .preprocessing import (
    ColumnStandardizer,
    FeatureCategorySelector,
    SegmentSpec,
    StandardizationStats,
    aggregate_segment,
    apply_standardizer,
    fit_standardizer,
    segment_indices,
    select_feature_categories,
)
from .roi import (
    DEFAULT_ROI_POLYGONS,
    RoiChannelMeans,
    RoiId,
    RoiPolygon,
    load_roi_polygons,
    roi_channel_means,
)
from .runconfig import RunConfig, load_run_config
from .schema import CATEGORY_NAMES, HEART_RATE_DIM, FeatureSchema, FrameFeatureTable
from .scoring import auc_by_level, score_levels
from .splits import DatasetSplit, split_by_video
from .synthetic import DEFAULT_SYNTHETIC_SCHEMA, generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AblationReport",
    "AblationRow",
    "CATEGORY_NAMES",
    "ColumnStandardizer",
    "DEFAULT_COMBINATION_SETS",
    "DEFAULT_INDIVIDUAL_SETS",
    "DEFAULT_ROI_POLYGONS",
    "DEFAULT_SYNTHETIC_SCHEMA",
    "DatasetManifest",
    "DatasetSplit",
    "DegenerateRatioCounter",
    "FeatureCategorySelector",
    "FeatureSchema",
    "FrameFeatureTable",
    "GradientBoostedTreesClassifier",
    "HEART_RATE_DIM",
    "IntensityConvention",
    "PulseboostError",
    "RoiChannelMeans",
    "RoiId",
    "RoiPolygon",
    "RunConfig",
    "ScoredExample",
    "SegmentSpec",
    "StandardizationStats",
    "TrainConfig",
    "TreeEnsemble",
    "VideoEntry",
    "aggregate_segment",
    "apply_standardizer",
    "assemble_frame_vector",
    "auc_by_level",
    "build_tree",
    "default_ablation_sets",
    "feature_importance",
    "find_best_split",
    "fit_ensemble",
    "fit_on_tables",
    "fit_standardizer",
    "generate_synthetic",
    "heart_rate_vector",
    "leaf_weight",
    "load_manifest",
    "load_model",
    "load_roi_polygons",
    "load_run_config",
    "logistic_grad_hess",
    "logistic_loss",
    "predict_margin",
    "predict_proba",
    "read_manifest",
    "roc_auc",
    "roc_auc_from_arrays",
    "roi_channel_means",
    "run_ablation",
    "save_model",
    "score_levels",
    "segment_indices",
    "select_feature_categories",
    "split_by_video",
    "split_gain",
    "with_pipeline_metadata",
]
