"""Face regions of interest and per-region RGB channel means.

Seven regions are sampled from the standard 68-point face-landmark
layout: both cheeks, chin, forehead, both outer jaw edges, and the nose
center block. Each region is a polygon over landmark points; pixel
membership uses the even-odd rule evaluated at pixel centers.

The landmark layout gives no points above the brows, so the forehead
region is a band between the brow polyline and the same polyline lifted
by one inter-ocular distance (the distance between the two eye centers).
Default polygons can be replaced per region via a plain-text override
file (``name = i, j, k, ...``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import EmptyRoi, OutOfBounds, ParseError


class RoiId(enum.Enum):
    """The seven face regions, in canonical order."""

    RIGHT_CHEEK = "right_cheek"
    LEFT_CHEEK = "left_cheek"
    CHIN = "chin"
    FOREHEAD = "forehead"
    OUTER_RIGHT = "outer_right"
    OUTER_LEFT = "outer_left"
    CENTER = "center"


ROI_ORDER: tuple[RoiId, ...] = tuple(RoiId)

N_LANDMARKS = 68


@dataclass(frozen=True)
class RoiChannelMeans:
    """Mean red/green/blue intensity over one region."""

    z_r: float
    z_g: float
    z_b: float

    def __post_init__(self):
        vals = (self.z_r, self.z_g, self.z_b)
        if not all(np.isfinite(v) and v >= 0.0 for v in vals):
            raise ValueError(f"channel means must be finite and non-negative: {vals}")

    def as_array(self) -> np.ndarray:
        return np.array([self.z_r, self.z_g, self.z_b], dtype=np.float64)


@dataclass(frozen=True)
class RoiPolygon:
    """A region as an ordered list of indices into the 68-point layout."""

    roi: RoiId
    vertex_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "vertex_indices", tuple(int(i) for i in self.vertex_indices)
        )
        if len(self.vertex_indices) < 3:
            raise ValueError(f"{self.roi.value}: polygon needs >= 3 vertices")
        bad = [i for i in self.vertex_indices if not 0 <= i < N_LANDMARKS]
        if bad:
            raise ValueError(
                f"{self.roi.value}: landmark indices out of [0, {N_LANDMARKS - 1}]: {bad}"
            )


# Subject-right appears on the image left. Jaw: 0-16, brows: 17-26,
# nose: 27-35, eyes: 36-47, outer mouth: 48-59.
DEFAULT_ROI_POLYGONS: dict[RoiId, RoiPolygon] = {
    RoiId.RIGHT_CHEEK: RoiPolygon(RoiId.RIGHT_CHEEK, (1, 2, 3, 4, 48, 31, 39)),
    RoiId.LEFT_CHEEK: RoiPolygon(RoiId.LEFT_CHEEK, (15, 14, 13, 12, 54, 35, 42)),
    RoiId.CHIN: RoiPolygon(RoiId.CHIN, (6, 7, 8, 9, 10, 55, 56, 57, 58, 59)),
    RoiId.FOREHEAD: RoiPolygon(
        RoiId.FOREHEAD, (17, 18, 19, 20, 21, 22, 23, 24, 25, 26)
    ),
    RoiId.OUTER_RIGHT: RoiPolygon(RoiId.OUTER_RIGHT, (17, 0, 1, 2, 36)),
    RoiId.OUTER_LEFT: RoiPolygon(RoiId.OUTER_LEFT, (26, 16, 15, 14, 45)),
    RoiId.CENTER: RoiPolygon(RoiId.CENTER, (27, 31, 33, 35)),
}


def inter_ocular_distance(landmarks: np.ndarray) -> float:
    """Distance between the two eye centers (means of points 36-41, 42-47)."""
    lm = np.asarray(landmarks, dtype=np.float64)
    right_eye = lm[36:42].mean(axis=0)
    left_eye = lm[42:48].mean(axis=0)
    return float(np.hypot(*(left_eye - right_eye)))


def resolve_polygon(polygon: RoiPolygon, landmarks: np.ndarray) -> np.ndarray:
    """Polygon vertex coordinates, (k, 2) float array of (x, y).

    The forehead band closes the brow polyline with a copy lifted by one
    inter-ocular distance toward smaller y (image-up).
    """
    lm = np.asarray(landmarks, dtype=np.float64)
    if lm.shape != (N_LANDMARKS, 2):
        raise ValueError(f"landmarks must be ({N_LANDMARKS}, 2), got {lm.shape}")
    base = lm[list(polygon.vertex_indices)]
    if polygon.roi is RoiId.FOREHEAD:
        lift = np.array([0.0, -inter_ocular_distance(lm)])
        return np.vstack([base, (base + lift)[::-1]])
    return base


def points_in_polygon(points_xy: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Even-odd (crossing-parity) point-in-polygon test.

    An edge contributes a parity flip for a point when it straddles the
    point's horizontal line and the crossing lies strictly to the right.
    """
    pts = np.asarray(points_xy, dtype=np.float64)
    verts = np.asarray(vertices, dtype=np.float64)
    px, py = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    n = len(verts)
    for i in range(n):
        x1, y1 = verts[i]
        x2, y2 = verts[(i + 1) % n]
        straddles = (y1 > py) != (y2 > py)
        if not straddles.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            cross_x = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        inside ^= straddles & (px < cross_x)
    return inside


def covered_pixels(
    vertices: np.ndarray, height: int, width: int
) -> tuple[np.ndarray, np.ndarray]:
    """(row, col) indices of pixels whose centers fall inside the polygon."""
    xs, ys = vertices[:, 0], vertices[:, 1]
    c0 = max(0, int(np.floor(xs.min())))
    c1 = min(width - 1, int(np.ceil(xs.max())))
    r0 = max(0, int(np.floor(ys.min())))
    r1 = min(height - 1, int(np.ceil(ys.max())))
    if c1 < c0 or r1 < r0:
        return np.empty(0, dtype=np.intp), np.empty(0, dtype=np.intp)
    cols, rows = np.meshgrid(np.arange(c0, c1 + 1), np.arange(r0, r1 + 1))
    cols = cols.ravel()
    rows = rows.ravel()
    centers = np.column_stack([cols + 0.5, rows + 0.5])
    keep = points_in_polygon(centers, vertices)
    return rows[keep], cols[keep]


def roi_channel_means(
    frame: np.ndarray, polygon: RoiPolygon, landmarks: np.ndarray
) -> RoiChannelMeans:
    """Mean RGB over the pixels strictly inside the resolved polygon.

    ``frame`` is an (H, W, 3) raster; channel order is R, G, B.
    Raises OutOfBounds if a resolved vertex leaves the raster rectangle
    and EmptyRoi if no pixel center falls inside.
    """
    img = np.asarray(frame)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"frame must be (H, W, 3), got {img.shape}")
    height, width = img.shape[0], img.shape[1]
    verts = resolve_polygon(polygon, landmarks)
    xs, ys = verts[:, 0], verts[:, 1]
    if (xs < 0).any() or (xs > width).any() or (ys < 0).any() or (ys > height).any():
        raise OutOfBounds(
            f"{polygon.roi.value}: resolved vertex outside {width}x{height} raster"
        )
    rows, cols = covered_pixels(verts, height, width)
    if len(rows) == 0:
        raise EmptyRoi(f"{polygon.roi.value}: no pixel center inside polygon")
    pix = img[rows, cols].astype(np.float64)
    means = pix.mean(axis=0)
    return RoiChannelMeans(float(means[0]), float(means[1]), float(means[2]))


def load_roi_polygons(path: str | Path) -> dict[RoiId, RoiPolygon]:
    """Default polygon table with per-region overrides from a text file.

    File format: one ``region_name = i, j, k, ...`` line per override;
    blank lines and ``#`` comments are ignored. Unknown names or bad
    indices raise ParseError.
    """
    table = dict(DEFAULT_ROI_POLYGONS)
    by_value = {r.value: r for r in RoiId}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'name = i, j, ...'", path=str(path), line=lineno)
        name, _, rest = line.partition("=")
        name = name.strip()
        if name not in by_value:
            raise ParseError(
                f"unknown region {name!r}; expected one of {sorted(by_value)}",
                path=str(path), line=lineno,
            )
        try:
            indices = tuple(int(tok) for tok in rest.replace(",", " ").split())
            table[by_value[name]] = RoiPolygon(by_value[name], indices)
        except ValueError as exc:
            raise ParseError(str(exc), path=str(path), line=lineno) from exc
    return table
