"""Feature-category ablation harness.

Runs the full train/score protocol once per category combination with an
identical video split and seed, reporting held-out segment- and
frame-level AUC for each. The default sets are the seven single
categories followed by five cumulative combinations built in descending
order of effectiveness, ending with the fused landmark + heart-rate set.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .boosting.training import fit_ensemble, with_pipeline_metadata
from .errors import InsufficientVideos, SchemaMismatch
from .metrics import roc_auc
from .preprocessing import apply_standardizer, fit_standardizer, select_feature_categories
from .runconfig import RunConfig
from .schema import CATEGORY_NAMES, FrameFeatureTable
from .scoring import score_levels
from .splits import DatasetSplit, split_by_video

Combination = tuple[str, ...]

DEFAULT_INDIVIDUAL_SETS: tuple[Combination, ...] = tuple(
    (name,) for name in CATEGORY_NAMES
)

DEFAULT_COMBINATION_SETS: tuple[Combination, ...] = (
    ("landmark_2d", "landmark_3d"),
    ("eye_landmark", "landmark_2d", "landmark_3d"),
    ("eye_landmark", "head_pose", "landmark_2d", "landmark_3d"),
    ("eye_landmark", "head_pose", "landmark_2d", "landmark_3d", "heart_rate"),
    ("eye_landmark", "head_pose", "landmark_2d", "landmark_3d", "shape", "heart_rate"),
)


def default_ablation_sets() -> tuple[Combination, ...]:
    return DEFAULT_INDIVIDUAL_SETS + DEFAULT_COMBINATION_SETS


@dataclass(frozen=True)
class AblationRow:
    combination: Combination
    auc_segment: float
    auc_frame: float
    n_trees: int
    elapsed_seconds: float

    @property
    def combination_key(self) -> str:
        return "+".join(self.combination)


@dataclass(frozen=True)
class AblationReport:
    rows: tuple[AblationRow, ...]
    split: DatasetSplit

    def row(self, combination: Sequence[str]) -> AblationRow:
        key = "+".join(combination)
        for r in self.rows:
            if r.combination_key == key:
                return r
        raise KeyError(key)

    def write_csv(self, path: str | Path, config_echo: dict | None = None) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            if config_echo:
                for key in sorted(config_echo):
                    fh.write(f"# {key} = {config_echo[key]}\n")
            writer = csv.writer(fh)
            writer.writerow(
                ["combination", "auc_segment", "auc_frame", "n_trees", "elapsed_seconds"]
            )
            for r in self.rows:
                writer.writerow([
                    r.combination_key,
                    repr(float(r.auc_segment)),
                    repr(float(r.auc_frame)),
                    r.n_trees,
                    f"{r.elapsed_seconds:.3f}",
                ])

    def format_table(self) -> str:
        header = ("combination", "auc_segment", "auc_frame", "n_trees", "elapsed_s")
        body = [
            (r.combination_key, f"{r.auc_segment:.4f}", f"{r.auc_frame:.4f}",
             str(r.n_trees), f"{r.elapsed_seconds:.1f}")
            for r in self.rows
        ]
        widths = [max(len(h), *(len(row[i]) for row in body)) if body else len(h)
                  for i, h in enumerate(header)]
        lines = [
            "  ".join(h.ljust(w) for h, w in zip(header, widths)),
            "  ".join("-" * w for w in widths),
        ]
        lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in body]
        return "\n".join(lines)


def _shared_schema(tables: Sequence[FrameFeatureTable]):
    schema = tables[0].schema
    for t in tables[1:]:
        if t.schema.fingerprint() != schema.fingerprint():
            raise SchemaMismatch(
                f"video {t.video_id!r} schema differs from the corpus schema"
            )
    return schema


def fit_on_tables(
    tables: Sequence[FrameFeatureTable],
    categories: Sequence[str],
    config: RunConfig,
    n_workers: int | None = None,
):
    """Standardize-and-train on the pooled frames of the given tables.

    Stats are fitted on exactly the rows the model trains on, then
    embedded so the returned ensemble scores raw tables directly.
    """
    if not tables:
        raise InsufficientVideos("no training videos")
    schema = _shared_schema(tables)
    selected = [
        select_feature_categories(t.rows, schema, categories)[0] for t in tables
    ]
    _, sub_schema = select_feature_categories(
        np.empty((1, schema.total_dim)), schema, categories
    )
    X = np.vstack(selected)
    y = np.concatenate([np.full(t.n_frames, t.label) for t in tables])
    stats = fit_standardizer(X)
    ensemble = fit_ensemble(apply_standardizer(X, stats), y, config.train, n_workers)
    return with_pipeline_metadata(ensemble, stats, sub_schema)


def run_ablation(
    tables: Sequence[FrameFeatureTable],
    combinations: Sequence[Combination] | None,
    config: RunConfig,
    n_workers: int | None = None,
) -> AblationReport:
    """Fit and evaluate one model per combination, same split throughout.

    Rows keep the input combination order. AUCs are computed on the test
    videos of the config's seeded per-video split.
    """
    combos = tuple(
        tuple(c) for c in (combinations if combinations is not None
                           else default_ablation_sets())
    )
    if not combos:
        raise ValueError("no combinations requested")
    keys = ["+".join(c) for c in combos]
    if len(set(keys)) != len(keys):
        dupes = sorted({k for k in keys if keys.count(k) > 1})
        raise ValueError(f"duplicate combinations requested: {dupes}")
    split = split_by_video(
        [(t.video_id, t.label) for t in tables], config.ratios, config.seed
    )
    train_tables = [t for t in tables if t.video_id in split.train]
    test_tables = [t for t in tables if t.video_id in split.test]

    rows = []
    for combo in combos:
        started = time.perf_counter()
        ensemble = fit_on_tables(train_tables, combo, config, n_workers)
        scored = score_levels(ensemble, test_tables, config.segments, config.aggregation)
        rows.append(AblationRow(
            combination=combo,
            auc_segment=roc_auc(scored["segment"]),
            auc_frame=roc_auc(scored["frame"]),
            n_trees=ensemble.n_trees,
            elapsed_seconds=time.perf_counter() - started,
        ))
    return AblationReport(rows=tuple(rows), split=split)
