"""Feature schema: named categories mapped to contiguous column spans.

A fused frame vector is the concatenation of feature categories (facial
landmark groups plus the heart-rate block). The schema records each
category's width; spans are derived from the declared order. Models carry
a fingerprint of their input schema so scoring-time data can be checked
against training-time layout.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonFiniteValue, SchemaMismatch

# Canonical category vocabulary. heart_rate is always 63 wide: 7 regions
# of interest times 9 values (raw RGB triple, 3 pairwise ratios, 3
# sum-normalized fractions).
CATEGORY_NAMES = (
    "eye_landmark",
    "head_pose",
    "landmark_2d",
    "landmark_3d",
    "shape",
    "action_unit",
    "heart_rate",
)

HEART_RATE_DIM = 63


@dataclass(frozen=True)
class FeatureSchema:
    """Ordered (category name, width) pairs covering a fused vector."""

    categories: tuple[tuple[str, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "categories",
            tuple((str(n), int(w)) for n, w in self.categories),
        )
        seen = set()
        for name, width in self.categories:
            if name not in CATEGORY_NAMES:
                raise SchemaMismatch(
                    f"unknown category name {name!r}; allowed: {list(CATEGORY_NAMES)}"
                )
            if name in seen:
                raise SchemaMismatch(f"duplicate category {name!r}")
            seen.add(name)
            if width < 1:
                raise SchemaMismatch(f"category {name!r} has non-positive width {width}")
            if name == "heart_rate" and width != HEART_RATE_DIM:
                raise SchemaMismatch(
                    f"heart_rate span must be {HEART_RATE_DIM} wide, got {width}"
                )
        if not self.categories:
            raise SchemaMismatch("schema has no categories")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.categories)

    @property
    def total_dim(self) -> int:
        return sum(w for _, w in self.categories)

    def spans(self) -> dict[str, tuple[int, int]]:
        """Category name -> half-open (start, stop) column span."""
        out, start = {}, 0
        for name, width in self.categories:
            out[name] = (start, start + width)
            start += width
        return out

    def width(self, name: str) -> int:
        for n, w in self.categories:
            if n == name:
                return w
        raise KeyError(name)

    def fingerprint(self) -> str:
        """Stable hex digest of the ordered (name, width) layout."""
        text = ";".join(f"{n}:{w}" for n, w in self.categories)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def subset(self, names: tuple[str, ...]) -> "FeatureSchema":
        """Sub-schema of the given categories, re-based, in schema order."""
        keep = [(n, w) for n, w in self.categories if n in names]
        return FeatureSchema(tuple(keep))


@dataclass
class FrameFeatureTable:
    """Per-video matrix of fused per-frame feature vectors.

    The video-level label is broadcast to every frame and segment drawn
    from the table.
    """

    video_id: str
    label: int
    rows: np.ndarray
    fps: float
    schema: FeatureSchema = field(repr=False)

    def __post_init__(self):
        self.rows = np.ascontiguousarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2 or self.rows.shape[0] < 1:
            raise SchemaMismatch(
                f"video {self.video_id!r}: rows must be a non-empty 2-D matrix"
            )
        if self.label not in (0, 1):
            raise SchemaMismatch(
                f"video {self.video_id!r}: label must be 0 or 1, got {self.label}"
            )
        if self.rows.shape[1] != self.schema.total_dim:
            raise DimensionMismatch(
                "frame_row", self.schema.total_dim, self.rows.shape[1]
            )
        bad = ~np.isfinite(self.rows)
        if bad.any():
            frame, col = np.argwhere(bad)[0]
            raise NonFiniteValue(self.video_id, int(frame), int(col))

    @property
    def n_frames(self) -> int:
        return self.rows.shape[0]
