"""Seeded synthetic corpus generator.

Stands in for a real deepfake corpus: per-video feature CSVs plus a
manifest, deterministic per seed. Designated signal categories separate
the classes; everything else is noise.

Landmark-style signal columns get a fake-class mean shift well above the
within-class spread (>= 3 sigma). Heart-rate signal is injected the way
a blood-flow artifact would show: fake videos scale the green channel of
every region, which perturbs the ratio slots of the heart-rate block
while raw luminance stays in a realistic range.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .manifest import ROI_MEANS_COLUMNS, feature_column_names, write_features_csv
from .roi import ROI_ORDER
from .schema import FeatureSchema

DEFAULT_SYNTHETIC_SCHEMA = FeatureSchema((
    ("eye_landmark", 20),
    ("head_pose", 6),
    ("landmark_2d", 30),
    ("landmark_3d", 30),
    ("shape", 14),
    ("action_unit", 17),
    ("heart_rate", 63),
))

DEFAULT_SIGNAL_CATEGORIES = ("landmark_2d", "heart_rate")

# Per-region R/G/B reflectance profile; constant across videos so that
# channel ratios are tight within a class.
_ROI_PROFILES = {
    "right_cheek": (1.10, 1.00, 0.88),
    "left_cheek": (1.09, 1.00, 0.89),
    "chin": (1.07, 1.00, 0.90),
    "forehead": (1.12, 1.00, 0.86),
    "outer_right": (1.05, 1.00, 0.92),
    "outer_left": (1.06, 1.00, 0.91),
    "center": (1.08, 1.00, 0.90),
}

_LANDMARK_SHIFT = 1.2       # fake-class mean shift on signal columns
_VIDEO_JITTER_SD = 0.15
_FRAME_NOISE_SD = 0.25
_CHANNEL_JITTER_SD = 1.5
_CHANNEL_FRAME_SD = 2.0
_GREEN_GAIN_RANGE = (0.08, 0.15)


@dataclass(frozen=True)
class SyntheticVideo:
    video_id: str
    label: int
    landmark_rows: np.ndarray   # frames x (total_dim - 63)
    roi_triples: np.ndarray     # frames x 7 x 3
    hr_rows: np.ndarray         # frames x 63


def _hr_block_from_triples(triples: np.ndarray) -> np.ndarray:
    """Vectorized 63-wide heart-rate block; denominators are far from 0."""
    F = triples.shape[0]
    out = np.empty((F, len(ROI_ORDER) * 9), dtype=np.float64)
    for k in range(len(ROI_ORDER)):
        r, g, b = triples[:, k, 0], triples[:, k, 1], triples[:, k, 2]
        s = r + g + b
        block = out[:, k * 9:(k + 1) * 9]
        block[:, 0], block[:, 1], block[:, 2] = r, g, b
        block[:, 3], block[:, 4], block[:, 5] = r / g, r / b, g / b
        block[:, 6], block[:, 7], block[:, 8] = r / s, g / s, b / s
    return out


def _make_video(
    rng: np.random.Generator,
    video_id: str,
    label: int,
    frames: int,
    schema: FeatureSchema,
    signal: frozenset[str],
) -> SyntheticVideo:
    lm_widths = [(n, w) for n, w in schema.categories if n != "heart_rate"]
    n_lm = sum(w for _, w in lm_widths)

    shift = np.zeros(n_lm)
    offset = 0
    for name, width in lm_widths:
        if name in signal and label == 1:
            shift[offset:offset + width] = _LANDMARK_SHIFT
        offset += width
    base = shift + rng.normal(0.0, _VIDEO_JITTER_SD, n_lm)
    landmark_rows = base + rng.normal(0.0, _FRAME_NOISE_SD, (frames, n_lm))

    triples = np.empty((frames, len(ROI_ORDER), 3), dtype=np.float64)
    green_gain = 1.0 + rng.uniform(*_GREEN_GAIN_RANGE)
    for k, roi in enumerate(ROI_ORDER):
        level = rng.uniform(100.0, 160.0)
        jitter = rng.normal(0.0, _CHANNEL_JITTER_SD, 3)
        channel_base = level * np.array(_ROI_PROFILES[roi.value]) + jitter
        triples[:, k, :] = channel_base + rng.normal(
            0.0, _CHANNEL_FRAME_SD, (frames, 3)
        )
    if label == 1 and "heart_rate" in signal:
        triples[:, :, 1] *= green_gain
    triples = np.clip(triples, 0.0, 255.0)

    return SyntheticVideo(
        video_id=video_id, label=label,
        landmark_rows=landmark_rows,
        roi_triples=triples,
        hr_rows=_hr_block_from_triples(triples),
    )


def generate_synthetic(
    out_dir: str | Path,
    seed: int,
    n_videos: int,
    frames_per_video: int,
    fraction_fake: float,
    signal_categories: tuple[str, ...] = DEFAULT_SIGNAL_CATEGORIES,
    schema: FeatureSchema = DEFAULT_SYNTHETIC_SCHEMA,
    fps: float = 30.0,
    roi_means: bool = False,
) -> Path:
    """Write a complete synthetic dataset; returns the manifest path.

    With ``roi_means=True`` the heart-rate block is shipped as companion
    per-region channel-mean CSVs instead of pre-extracted columns, which
    exercises the ingestion-time feature synthesis path.
    """
    if n_videos < 4:
        raise ValueError("n_videos must be >= 4")
    if not 0.0 < fraction_fake < 1.0:
        raise ValueError("fraction_fake must be in (0, 1)")
    if frames_per_video < 1:
        raise ValueError("frames_per_video must be >= 1")
    unknown = set(signal_categories) - set(schema.names)
    if unknown:
        raise ValueError(f"signal categories not in schema: {sorted(unknown)}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    n_fake = min(max(int(round(n_videos * fraction_fake)), 1), n_videos - 1)
    fake_ids = set(rng.permutation(n_videos)[:n_fake].tolist())
    signal = frozenset(signal_categories)

    width = len(str(n_videos - 1))
    lm_columns = feature_column_names(schema, exclude=frozenset({"heart_rate"}))
    full_columns = feature_column_names(schema)
    spans = schema.spans()
    hr_start, hr_stop = spans["heart_rate"]

    entries = []
    for i in range(n_videos):
        vid = f"v{i:0{width}d}"
        label = 1 if i in fake_ids else 0
        video = _make_video(rng, vid, label, frames_per_video, schema, signal)
        entry = {
            "video_id": vid, "label": label,
            "features_csv": f"{vid}.csv", "fps": fps,
        }
        if roi_means:
            write_features_csv(out / f"{vid}.csv", lm_columns, video.landmark_rows)
            write_features_csv(
                out / f"{vid}_roi.csv", ROI_MEANS_COLUMNS,
                video.roi_triples.reshape(frames_per_video, -1),
            )
            entry["roi_means_csv"] = f"{vid}_roi.csv"
        else:
            fused = np.empty((frames_per_video, schema.total_dim))
            lm_cols = [c for c in range(schema.total_dim) if not hr_start <= c < hr_stop]
            fused[:, lm_cols] = video.landmark_rows
            fused[:, hr_start:hr_stop] = video.hr_rows
            write_features_csv(out / f"{vid}.csv", full_columns, fused)
        entries.append(entry)

    doc = {
        "schema": [list(pair) for pair in schema.categories],
        "intensity_convention": "8bit",
        "videos": entries,
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(
        json.dumps(doc, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return manifest_path
