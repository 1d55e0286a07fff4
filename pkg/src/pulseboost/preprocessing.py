"""Train-only standardization, sliding-window segmentation, and
feature-category column selection.

Standardization statistics are always fitted on the pooled training
frames and applied unchanged everywhere else; the fit API accepts only
one matrix, so validation or test rows cannot leak in by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import DimensionMismatch, EmptySegment, InsufficientData, UnknownCategory
from .schema import FeatureSchema

# Columns whose std falls below this are treated as constant and map to 0.
ZERO_VARIANCE_EPS = 1e-12

AGGREGATION_MODES = ("feature_mean", "feature_mean_std", "score_mean")


@dataclass(frozen=True)
class StandardizationStats:
    """Per-column mean and population standard deviation of the train split."""

    mean: np.ndarray
    std: np.ndarray
    n_samples: int

    def __post_init__(self):
        object.__setattr__(self, "mean", np.asarray(self.mean, dtype=np.float64))
        object.__setattr__(self, "std", np.asarray(self.std, dtype=np.float64))
        if self.mean.shape != self.std.shape or self.mean.ndim != 1:
            raise ValueError("mean and std must be 1-D arrays of equal length")
        if (self.std < 0).any():
            raise ValueError("std entries must be non-negative")

    @property
    def n_columns(self) -> int:
        return self.mean.shape[0]


def fit_standardizer(train_rows: np.ndarray) -> StandardizationStats:
    """Per-column mean and population std over the training matrix."""
    X = np.asarray(train_rows, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    if X.shape[0] < 2:
        raise InsufficientData(f"need >= 2 rows to fit statistics, got {X.shape[0]}")
    if not np.isfinite(X).all():
        raise ValueError("training matrix contains NaN or inf")
    mean = X.mean(axis=0)
    std = X.std(axis=0)  # population convention (divide by n)
    return StandardizationStats(mean=mean, std=std, n_samples=X.shape[0])


def apply_standardizer(rows: np.ndarray, stats: StandardizationStats) -> np.ndarray:
    """z = (x - mean) / std per column; constant columns map to 0."""
    X = np.asarray(rows, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != stats.n_columns:
        raise DimensionMismatch("rows", stats.n_columns, X.shape[1])
    safe = np.where(stats.std < ZERO_VARIANCE_EPS, 1.0, stats.std)
    z = (X - stats.mean) / safe
    z[:, stats.std < ZERO_VARIANCE_EPS] = 0.0
    return z


class ColumnStandardizer(BaseEstimator, TransformerMixin):
    """Sklearn-style wrapper around the train-only z-score transform."""

    def fit(self, X, y=None):
        self.stats_ = fit_standardizer(X)
        return self

    def transform(self, X):
        return apply_standardizer(X, self.stats_)


@dataclass(frozen=True)
class SegmentSpec:
    """Sliding-window geometry: window length and overlap, in frames."""

    window: int = 30
    overlap: int = 10

    def __post_init__(self):
        if not 0 <= self.overlap < self.window:
            raise ValueError(
                f"need 0 <= overlap < window, got window={self.window} overlap={self.overlap}"
            )

    @property
    def stride(self) -> int:
        return self.window - self.overlap


def segment_indices(n_frames: int, spec: SegmentSpec) -> list[tuple[int, int]]:
    """Half-open (start, end) windows; trailing partial windows are dropped."""
    if n_frames < 0:
        raise ValueError("n_frames must be >= 0")
    out = []
    start = 0
    while start + spec.window <= n_frames:
        out.append((start, start + spec.window))
        start += spec.stride
    return out


def aggregate_segment(frame_rows: np.ndarray, mode: str = "feature_mean") -> np.ndarray:
    """Collapse a window of frame rows into one segment vector.

    feature_mean keeps the frame dimensionality (per-column mean);
    feature_mean_std doubles it (mean then population std per column).
    """
    X = np.asarray(frame_rows, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1:
        raise EmptySegment(f"segment needs >= 1 frame row, got shape {X.shape}")
    if mode == "feature_mean":
        return X.mean(axis=0)
    if mode == "feature_mean_std":
        return np.concatenate([X.mean(axis=0), X.std(axis=0)])
    raise ValueError(f"unknown aggregation mode {mode!r}")


@dataclass(frozen=True)
class Segment:
    """One evaluation unit: a full window of frames from one video."""

    video_id: str
    start_frame: int
    end_frame: int
    vector: np.ndarray
    label: int


def select_feature_categories(
    rows: np.ndarray, schema: FeatureSchema, categories: Iterable[str]
) -> tuple[np.ndarray, FeatureSchema]:
    """Columns of the requested categories, concatenated in schema order.

    The request is a set: order among the requested names does not matter,
    the schema's declared order governs. Returns the submatrix and the
    re-based sub-schema.
    """
    requested = set(categories)
    known = set(schema.names)
    for name in sorted(requested):
        if name not in known:
            raise UnknownCategory(name, schema.names)
    X = np.asarray(rows, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != schema.total_dim:
        raise DimensionMismatch("rows", schema.total_dim, X.shape[1])
    spans = schema.spans()
    keep = [name for name in schema.names if name in requested]
    cols = np.concatenate(
        [np.arange(*spans[name]) for name in keep]
    ) if keep else np.empty(0, dtype=int)
    sub_schema = schema.subset(tuple(keep))
    return X[:, cols], sub_schema


class FeatureCategorySelector(BaseEstimator, TransformerMixin):
    """Sklearn-style selector for a fixed set of schema categories."""

    def __init__(self, schema: FeatureSchema, categories: Sequence[str]):
        self.schema = schema
        self.categories = categories

    def fit(self, X, y=None):
        _, self.sub_schema_ = select_feature_categories(
            np.empty((1, self.schema.total_dim)), self.schema, self.categories
        )
        return self

    def transform(self, X):
        sub, _ = select_feature_categories(X, self.schema, self.categories)
        return sub
