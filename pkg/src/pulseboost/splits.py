"""Leakage-safe dataset splitting.

Videos (never frames) are the unit of assignment: every frame and
segment of a video lands in exactly one of train/val/test. Assignment is
stratified by label and deterministic per seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InsufficientVideos

Ratios = tuple[float, float, float]
SPLIT_NAMES = ("train", "val", "test")


@dataclass(frozen=True)
class DatasetSplit:
    """Disjoint video-id sets for train, val, and test."""

    train: frozenset[str]
    val: frozenset[str]
    test: frozenset[str]
    ratios: Ratios
    seed: int

    def __post_init__(self):
        if self.train & self.val or self.train & self.test or self.val & self.test:
            raise ValueError("split sets must be disjoint")

    def all_ids(self) -> frozenset[str]:
        return self.train | self.val | self.test

    def of(self, name: str) -> frozenset[str]:
        return {"train": self.train, "val": self.val, "test": self.test}[name]


def _validate_ratios(ratios: Sequence[float]) -> Ratios:
    if len(ratios) != 3:
        raise ValueError(f"need exactly 3 ratios (train, val, test), got {len(ratios)}")
    r = tuple(float(x) for x in ratios)
    if any(x < 0 for x in r):
        raise ValueError(f"ratios must be non-negative, got {r}")
    if abs(sum(r) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {r} (sum {sum(r)})")
    return r  # type: ignore[return-value]


def _largest_remainder(total: int, ratios: Ratios) -> list[int]:
    """Integer sizes summing to total; ties go to the earlier split."""
    exact = [total * r for r in ratios]
    sizes = [math.floor(e) for e in exact]
    remaining = total - sum(sizes)
    order = sorted(range(3), key=lambda k: (-(exact[k] - sizes[k]), k))
    for k in order[:remaining]:
        sizes[k] += 1
    return sizes


def _allocate_cells(
    class_sizes: dict[int, int], split_sizes: list[int], ratios: Ratios
) -> dict[int, list[int]]:
    """Per-(class, split) counts matching both margins, each within one
    video of the fractional stratified ideal whenever feasible."""
    labels = sorted(class_sizes)
    ideal = {c: [class_sizes[c] * r for r in ratios] for c in labels}
    counts = {c: [math.floor(v) for v in ideal[c]] for c in labels}
    class_deficit = {c: class_sizes[c] - sum(counts[c]) for c in labels}
    split_deficit = [
        split_sizes[k] - sum(counts[c][k] for c in labels) for k in range(3)
    ]
    cells = sorted(
        ((c, k) for c in labels for k in range(3)),
        key=lambda ck: (-(ideal[ck[0]][ck[1]] - math.floor(ideal[ck[0]][ck[1]])),
                        ck[1], ck[0]),
    )
    for c, k in cells:
        if class_deficit[c] > 0 and split_deficit[k] > 0:
            counts[c][k] += 1
            class_deficit[c] -= 1
            split_deficit[k] -= 1
    # Remaining deficits (rare rounding corner): fill in split order.
    for c in labels:
        for k in range(3):
            while class_deficit[c] > 0 and split_deficit[k] > 0:
                counts[c][k] += 1
                class_deficit[c] -= 1
                split_deficit[k] -= 1
    return counts


def split_by_video(
    entries: Sequence[tuple[str, int]],
    ratios: Sequence[float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> DatasetSplit:
    """Stratified, seeded train/val/test partition of whole videos.

    ``entries`` are (video_id, label) pairs. Videos of each class are
    shuffled with the seeded generator and cut so split totals follow the
    largest-remainder apportionment of the ratios. Deterministic per seed
    and independent of the input ordering.
    """
    r = _validate_ratios(ratios)
    ids = [vid for vid, _ in entries]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate video ids in split input")
    if not entries:
        raise InsufficientVideos("no videos to split")

    by_label: dict[int, list[str]] = {}
    for vid, label in entries:
        by_label.setdefault(int(label), []).append(vid)

    split_sizes = _largest_remainder(len(entries), r)
    counts = _allocate_cells(
        {c: len(v) for c, v in by_label.items()}, split_sizes, r
    )

    rng = np.random.default_rng(seed)
    buckets: dict[str, list[str]] = {name: [] for name in SPLIT_NAMES}
    for label in sorted(by_label):
        vids = sorted(by_label[label])
        order = rng.permutation(len(vids))
        shuffled = [vids[i] for i in order]
        a, b = counts[label][0], counts[label][0] + counts[label][1]
        buckets["train"] += shuffled[:a]
        buckets["val"] += shuffled[a:b]
        buckets["test"] += shuffled[b:]

    split = DatasetSplit(
        train=frozenset(buckets["train"]),
        val=frozenset(buckets["val"]),
        test=frozenset(buckets["test"]),
        ratios=r, seed=int(seed),
    )
    if r[0] > 0 and len(by_label) == 2:
        train_labels = {lab for lab in by_label if set(by_label[lab]) & split.train}
        if len(train_labels) < 2:
            raise InsufficientVideos(
                "training split lacks one class; add videos or adjust ratios"
            )
    return split
