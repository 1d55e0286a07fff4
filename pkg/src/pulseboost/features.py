"""Heart-rate feature vector and fused frame-vector assembly.

Each region of interest contributes nine values: the raw channel-mean
triple, the three pairwise channel ratios (R/G, R/B, G/B), and the three
sum-normalized fractions (R/S, G/S, B/S with S = R+G+B). Seven regions
give the 63-wide heart-rate block. Ratios with a near-zero denominator
are substituted with 0.0 and counted, so outputs never contain NaN.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .roi import ROI_ORDER, RoiChannelMeans
from .schema import HEART_RATE_DIM, FeatureSchema

VALUES_PER_ROI = 9


class IntensityConvention(enum.Enum):
    """Channel-intensity scale a dataset declares, fixed for all videos."""

    EIGHT_BIT = "8bit"          # values in [0, 255]
    NORMALIZED = "normalized"   # values in [0, 1]

    @property
    def epsilon_den(self) -> float:
        """Denominator threshold below which a ratio is degenerate."""
        return 1e-3 if self is IntensityConvention.EIGHT_BIT else 1e-6


@dataclass
class DegenerateRatioCounter:
    """Counts ratio slots replaced by the 0.0 fallback."""

    count: int = 0
    by_roi: dict[str, int] = field(default_factory=dict)

    def record(self, roi_name: str, n: int) -> None:
        self.count += n
        self.by_roi[roi_name] = self.by_roi.get(roi_name, 0) + n


def heart_rate_vector(
    means: Sequence[RoiChannelMeans],
    convention: IntensityConvention = IntensityConvention.EIGHT_BIT,
    counter: DegenerateRatioCounter | None = None,
) -> np.ndarray:
    """63-wide heart-rate block from the 7 per-region channel means.

    ``means`` must be ordered canonically (right cheek, left cheek, chin,
    forehead, outer right, outer left, center). Per region the block is
    [R, G, B, R/G, R/B, G/B, R/S, G/S, B/S].
    """
    if len(means) != len(ROI_ORDER):
        raise ValueError(f"expected {len(ROI_ORDER)} channel-mean triples, got {len(means)}")
    eps = convention.epsilon_den
    out = np.empty(HEART_RATE_DIM, dtype=np.float64)
    for k, (roi, m) in enumerate(zip(ROI_ORDER, means)):
        r, g, b = m.z_r, m.z_g, m.z_b
        s = r + g + b
        block = out[k * VALUES_PER_ROI:(k + 1) * VALUES_PER_ROI]
        block[0:3] = (r, g, b)
        n_degenerate = 0
        for slot, (num, den) in enumerate(
            ((r, g), (r, b), (g, b), (r, s), (g, s), (b, s)), start=3
        ):
            if den < eps:
                block[slot] = 0.0
                n_degenerate += 1
            else:
                block[slot] = num / den
        if n_degenerate and counter is not None:
            counter.record(roi.value, n_degenerate)
    return out


def assemble_frame_vector(
    landmark_row: np.ndarray, hr: np.ndarray, schema: FeatureSchema
) -> np.ndarray:
    """Fused frame vector with every category placed in its schema span.

    ``landmark_row`` is the concatenation of all non-heart-rate categories
    in schema order; ``hr`` fills the heart_rate span.
    """
    landmark_row = np.asarray(landmark_row, dtype=np.float64).ravel()
    hr = np.asarray(hr, dtype=np.float64).ravel()
    if "heart_rate" not in schema.names:
        raise DimensionMismatch("heart_rate", HEART_RATE_DIM, 0)
    if hr.shape[0] != HEART_RATE_DIM:
        raise DimensionMismatch("heart_rate", HEART_RATE_DIM, hr.shape[0])
    expected_lm = schema.total_dim - HEART_RATE_DIM
    if landmark_row.shape[0] != expected_lm:
        raise DimensionMismatch("landmark_row", expected_lm, landmark_row.shape[0])
    fused = np.empty(schema.total_dim, dtype=np.float64)
    spans = schema.spans()
    consumed = 0
    for name, width in schema.categories:
        start, stop = spans[name]
        if name == "heart_rate":
            fused[start:stop] = hr
        else:
            fused[start:stop] = landmark_row[consumed:consumed + width]
            consumed += width
    return fused


def extract_category(row: np.ndarray, schema: FeatureSchema, name: str) -> np.ndarray:
    """Slice one category's values out of a fused vector."""
    start, stop = schema.spans()[name]
    return np.asarray(row, dtype=np.float64)[..., start:stop]
