"""Frame-, segment-, and video-level scoring of feature tables.

A trained model carries its input schema and standardization stats, so
scoring takes raw fused rows: select the model's categories, apply the
training-time transform, then score. Segment scores come either from an
aggregated segment vector or from averaging the member frames' scores;
the video score is the mean frame probability.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .boosting.training import TreeEnsemble
from .errors import SchemaMismatch, UnknownCategory
from .metrics import ScoredExample, roc_auc
from .preprocessing import (
    AGGREGATION_MODES,
    SegmentSpec,
    aggregate_segment,
    apply_standardizer,
    segment_indices,
    select_feature_categories,
)
from .schema import FrameFeatureTable


def standardized_model_rows(ensemble: TreeEnsemble, table: FrameFeatureTable) -> np.ndarray:
    """Table rows reduced to the model's columns and standardized."""
    if ensemble.input_schema is None or ensemble.stats is None:
        raise SchemaMismatch(
            "model has no embedded schema/standardization stats; "
            "attach them before scoring tables"
        )
    try:
        sub, sub_schema = select_feature_categories(
            table.rows, table.schema, ensemble.input_schema.names
        )
    except UnknownCategory as exc:
        raise SchemaMismatch(
            f"video {table.video_id!r}: {exc}"
        ) from exc
    if sub_schema.fingerprint() != ensemble.input_schema.fingerprint():
        raise SchemaMismatch(
            f"video {table.video_id!r}: table layout "
            f"{sub_schema.categories} does not match model layout "
            f"{ensemble.input_schema.categories}"
        )
    return apply_standardizer(sub, ensemble.stats)


def score_levels(
    ensemble: TreeEnsemble,
    tables: Sequence[FrameFeatureTable],
    spec: SegmentSpec = SegmentSpec(),
    mode: str = "feature_mean",
) -> dict[str, list[ScoredExample]]:
    """Scored examples at frame, segment, and video level.

    ``mode`` picks the segment score: ``feature_mean`` /
    ``feature_mean_std`` score the aggregated segment vector (the vector
    width must match the model, so ``feature_mean_std`` requires a model
    fitted on doubled-width segment vectors); ``score_mean`` averages the
    member frames' probabilities.
    """
    if mode not in AGGREGATION_MODES:
        raise ValueError(f"mode must be one of {AGGREGATION_MODES}, got {mode!r}")
    out: dict[str, list[ScoredExample]] = {"frame": [], "segment": [], "video": []}
    for table in tables:
        z = standardized_model_rows(ensemble, table)
        frame_probas = ensemble.predict_proba(z)
        vid = table.video_id
        out["frame"] += [
            ScoredExample(f"{vid}:{i}", float(p), table.label, "frame")
            for i, p in enumerate(frame_probas)
        ]
        windows = segment_indices(table.n_frames, spec)
        if windows:
            if mode == "score_mean":
                seg_scores = [float(frame_probas[s:e].mean()) for s, e in windows]
            else:
                vecs = np.stack([aggregate_segment(z[s:e], mode) for s, e in windows])
                if vecs.shape[1] != ensemble.n_features:
                    raise SchemaMismatch(
                        f"aggregation {mode!r} yields {vecs.shape[1]}-wide segment "
                        f"vectors but the model expects {ensemble.n_features}; "
                        "fit the model on segment vectors or use "
                        "feature_mean/score_mean"
                    )
                seg_scores = [float(p) for p in ensemble.predict_proba(vecs)]
            out["segment"] += [
                ScoredExample(f"{vid}:{s}-{e}", score, table.label, "segment")
                for (s, e), score in zip(windows, seg_scores)
            ]
        out["video"].append(
            ScoredExample(vid, float(frame_probas.mean()), table.label, "video")
        )
    return out


def auc_by_level(scored: dict[str, list[ScoredExample]]) -> dict[str, float]:
    """AUC per level; levels without both classes are omitted."""
    out = {}
    for level, examples in scored.items():
        labels = {e.label for e in examples}
        if len(labels) == 2:
            out[level] = roc_auc(examples)
    return out
