"""Dataset manifest and per-frame CSV ingestion.

A dataset is a JSON manifest declaring the feature schema, the channel
intensity convention, and one features CSV per video. Feature CSVs carry
a header of ``<category>_<i>`` columns grouped in schema order, one row
per frame. A video may instead ship its heart-rate block as a companion
ROI-means CSV (21 columns: 7 regions x R,G,B); the 63 heart-rate columns
are then synthesized at load time.

All cells must parse as finite numbers; diagnostics name the video,
frame, and column.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import NonFiniteValue, ParseError, SchemaMismatch
from .features import (
    DegenerateRatioCounter,
    IntensityConvention,
    assemble_frame_vector,
    heart_rate_vector,
)
from .parallel import get_worker_count, map_ordered
from .roi import ROI_ORDER, RoiChannelMeans
from .schema import HEART_RATE_DIM, FeatureSchema, FrameFeatureTable

ROI_MEANS_COLUMNS = tuple(
    f"{roi.value}_{ch}" for roi in ROI_ORDER for ch in ("r", "g", "b")
)


@dataclass(frozen=True)
class VideoEntry:
    video_id: str
    label: int
    features_csv: Path
    fps: float
    intensity_convention: IntensityConvention
    roi_means_csv: Path | None = None


@dataclass(frozen=True)
class DatasetManifest:
    schema: FeatureSchema
    convention: IntensityConvention
    videos: tuple[VideoEntry, ...]
    root: Path

    def entries(self) -> list[tuple[str, int]]:
        return [(v.video_id, v.label) for v in self.videos]


def feature_column_names(
    schema: FeatureSchema, exclude: frozenset[str] = frozenset()
) -> list[str]:
    return [
        f"{name}_{i}"
        for name, width in schema.categories if name not in exclude
        for i in range(width)
    ]


def _read_numeric_csv(
    path: Path, expected_columns: list[str], video_id: str
) -> np.ndarray:
    """CSV body as a float matrix, with exact header validation."""
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise ParseError(f"file not found: {path}", path=str(path)) from exc
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", path=str(path), line=1)
    header = next(csv.reader([lines[0]]))
    if len(header) != len(expected_columns):
        raise SchemaMismatch(
            f"video {video_id!r}: manifest schema declares "
            f"{len(expected_columns)} columns vs CSV with {len(header)} columns "
            f"({path})"
        )
    if header != expected_columns:
        diff = next(
            i for i, (a, b) in enumerate(zip(header, expected_columns)) if a != b
        )
        raise SchemaMismatch(
            f"video {video_id!r}: CSV column {diff} is {header[diff]!r}, "
            f"expected {expected_columns[diff]!r} ({path})"
        )
    if len(lines) < 2:
        raise ParseError("no frame rows", path=str(path), line=1)
    try:
        rows = np.loadtxt(
            io.StringIO("\n".join(lines[1:])), delimiter=",", ndmin=2,
            dtype=np.float64,
        )
    except ValueError:
        rows = None
    if rows is None or rows.shape[1] != len(expected_columns):
        _diagnose_csv(lines, expected_columns, path)
        raise ParseError("malformed CSV", path=str(path))
    return rows


def _diagnose_csv(lines: list[str], expected_columns: list[str], path: Path) -> None:
    """Slow pass that pins a parse failure to its line and column."""
    for lineno, line in enumerate(lines[1:], start=2):
        cells = next(csv.reader([line]))
        if len(cells) != len(expected_columns):
            raise ParseError(
                f"row has {len(cells)} cells, expected {len(expected_columns)}",
                path=str(path), line=lineno,
            )
        for cell, name in zip(cells, expected_columns):
            try:
                float(cell)
            except ValueError:
                raise ParseError(
                    f"cell {cell!r} is not a number",
                    path=str(path), line=lineno, column=name,
                ) from None


def _check_finite(rows: np.ndarray, video_id: str, columns: list[str]) -> None:
    bad = ~np.isfinite(rows)
    if bad.any():
        frame, col = np.argwhere(bad)[0]
        raise NonFiniteValue(video_id, int(frame), columns[int(col)])


def _load_roi_means(
    entry: VideoEntry, n_frames: int, counter: DegenerateRatioCounter
) -> np.ndarray:
    """Heart-rate block synthesized from the companion ROI-means CSV."""
    assert entry.roi_means_csv is not None
    rows = _read_numeric_csv(
        entry.roi_means_csv, list(ROI_MEANS_COLUMNS), entry.video_id
    )
    _check_finite(rows, entry.video_id, list(ROI_MEANS_COLUMNS))
    if rows.shape[0] != n_frames:
        raise SchemaMismatch(
            f"video {entry.video_id!r}: {rows.shape[0]} ROI-means rows vs "
            f"{n_frames} feature rows"
        )
    upper = 255.0 if entry.intensity_convention is IntensityConvention.EIGHT_BIT else 1.0
    if (rows < 0).any() or (rows > upper).any():
        frame, col = np.argwhere((rows < 0) | (rows > upper))[0]
        raise ParseError(
            f"channel mean outside [0, {upper}] for the declared convention",
            path=str(entry.roi_means_csv), line=int(frame) + 2,
            column=ROI_MEANS_COLUMNS[int(col)],
        )
    hr = np.empty((n_frames, HEART_RATE_DIM), dtype=np.float64)
    for i in range(n_frames):
        means = [
            RoiChannelMeans(*rows[i, 3 * k:3 * k + 3]) for k in range(len(ROI_ORDER))
        ]
        hr[i] = heart_rate_vector(means, entry.intensity_convention, counter)
    return hr


def load_video_table(
    entry: VideoEntry, schema: FeatureSchema,
    counter: DegenerateRatioCounter | None = None,
) -> FrameFeatureTable:
    counter = counter if counter is not None else DegenerateRatioCounter()
    if entry.roi_means_csv is None:
        columns = feature_column_names(schema)
        rows = _read_numeric_csv(entry.features_csv, columns, entry.video_id)
        _check_finite(rows, entry.video_id, columns)
    else:
        if "heart_rate" not in schema.names:
            raise SchemaMismatch(
                f"video {entry.video_id!r} ships ROI means but the schema has "
                "no heart_rate category"
            )
        columns = feature_column_names(schema, exclude=frozenset({"heart_rate"}))
        lm = _read_numeric_csv(entry.features_csv, columns, entry.video_id)
        _check_finite(lm, entry.video_id, columns)
        hr = _load_roi_means(entry, lm.shape[0], counter)
        rows = np.stack([
            assemble_frame_vector(lm[i], hr[i], schema) for i in range(lm.shape[0])
        ])
    return FrameFeatureTable(
        video_id=entry.video_id, label=entry.label, rows=rows,
        fps=entry.fps, schema=schema,
    )


def _parse_manifest_json(path: Path) -> dict:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ParseError(f"manifest not found: {path}", path=str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON: {exc.msg}", path=str(path), line=exc.lineno,
            column=exc.colno,
        ) from exc


def read_manifest(path: str | Path) -> DatasetManifest:
    """Parse and validate the manifest file (without loading any CSV)."""
    path = Path(path)
    doc = _parse_manifest_json(path)
    if not isinstance(doc, dict):
        raise ParseError("manifest must be a JSON object", path=str(path))
    try:
        schema = FeatureSchema(tuple((n, w) for n, w in doc["schema"]))
        convention = IntensityConvention(doc.get("intensity_convention", "8bit"))
        raw_videos = doc["videos"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad manifest structure: {exc}", path=str(path)) from exc
    if not isinstance(raw_videos, list) or not raw_videos:
        raise ParseError("manifest lists no videos", path=str(path))

    root = path.parent
    videos, seen = [], set()
    for i, v in enumerate(raw_videos):
        try:
            vid = str(v["video_id"])
            label = int(v["label"])
            features_csv = root / v["features_csv"]
            fps = float(v.get("fps", 30.0))
            vconv = IntensityConvention(v.get("intensity_convention", convention.value))
            roi_csv = root / v["roi_means_csv"] if v.get("roi_means_csv") else None
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad video entry {i}: {exc}", path=str(path)) from exc
        if label not in (0, 1):
            raise ParseError(
                f"video {vid!r}: label must be 0 or 1, got {label}", path=str(path)
            )
        if vid in seen:
            raise ParseError(f"duplicate video_id {vid!r}", path=str(path))
        if vconv is not convention:
            raise ParseError(
                f"video {vid!r} declares convention {vconv.value!r} but the "
                f"dataset uses {convention.value!r}; conventions are never mixed",
                path=str(path),
            )
        seen.add(vid)
        videos.append(VideoEntry(vid, label, features_csv, fps, vconv, roi_csv))
        if not features_csv.is_file():
            raise ParseError(f"file not found: {features_csv}", path=str(path))
        if roi_csv is not None and not roi_csv.is_file():
            raise ParseError(f"file not found: {roi_csv}", path=str(path))
    return DatasetManifest(
        schema=schema, convention=convention, videos=tuple(videos), root=root
    )


def load_manifest(
    path: str | Path, n_workers: int | None = None,
) -> tuple[DatasetManifest, list[FrameFeatureTable]]:
    """Manifest plus all validated per-video feature tables."""
    manifest = read_manifest(path)
    workers = get_worker_count(n_workers)
    counter = DegenerateRatioCounter()
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        tables = map_ordered(
            lambda entry: load_video_table(entry, manifest.schema, counter),
            manifest.videos, pool,
        )
    finally:
        if pool is not None:
            pool.shutdown(wait=True)
    return manifest, tables


def write_features_csv(path: str | Path, columns: Sequence[str], rows: np.ndarray) -> None:
    """Deterministic CSV writer used by the synthetic generator."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in np.asarray(rows, dtype=np.float64):
            fh.write(",".join(f"{v:.10g}" for v in row) + "\n")
