"""Shared fixtures: a synthetic neutral-face landmark layout and corpora."""

from __future__ import annotations

import numpy as np
import pytest

from pulseboost import FeatureSchema, load_manifest, generate_synthetic


def make_face_landmarks(scale: float = 1.0, offset=(0.0, 0.0)) -> np.ndarray:
    """A plausible neutral 68-point layout inside a ~[0, 96] square.

    Indices follow the standard convention: 0-16 jaw, 17-26 brows,
    27-35 nose, 36-47 eyes, 48-67 mouth.
    """
    pts = np.zeros((68, 2))
    # jaw: arc from viewer-left ear down around the chin and back up
    pts[0:17, 0] = 48 - 34 * np.cos(np.linspace(0, np.pi, 17))
    pts[0:17, 1] = 42 + 40 * np.sin(np.linspace(0, np.pi, 17)) ** 1.2
    # brows
    pts[17:22, 0] = np.linspace(22, 42, 5)
    pts[17:22, 1] = 34
    pts[22:27, 0] = np.linspace(54, 74, 5)
    pts[22:27, 1] = 34
    # nose bridge + base
    pts[27:31, 0] = 48
    pts[27:31, 1] = np.linspace(38, 54, 4)
    pts[31:36, 0] = np.linspace(42, 54, 5)
    pts[31:36, 1] = 58
    # eyes (hexagons)
    def eye(cx, cy, half_w=5.0, half_h=2.0):
        return np.array([
            (cx - half_w, cy), (cx - half_w / 2, cy - half_h),
            (cx + half_w / 2, cy - half_h), (cx + half_w, cy),
            (cx + half_w / 2, cy + half_h), (cx - half_w / 2, cy + half_h),
        ])
    pts[36:42] = eye(31, 41)
    pts[42:48] = eye(65, 41)
    # outer mouth ring + inner ring
    ang = np.linspace(0, 2 * np.pi, 12, endpoint=False)
    pts[48:60, 0] = 48 + 11 * np.cos(np.pi + ang)
    pts[48:60, 1] = 68 + 5 * np.sin(np.pi + ang)
    ang = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    pts[60:68, 0] = 48 + 6 * np.cos(np.pi + ang)
    pts[60:68, 1] = 68 + 2.5 * np.sin(np.pi + ang)
    return pts * scale + np.asarray(offset)


@pytest.fixture(scope="session")
def face_landmarks() -> np.ndarray:
    return make_face_landmarks()


@pytest.fixture(scope="session")
def small_schema() -> FeatureSchema:
    return FeatureSchema((
        ("eye_landmark", 3),
        ("head_pose", 2),
        ("landmark_2d", 4),
        ("landmark_3d", 4),
        ("shape", 2),
        ("action_unit", 3),
        ("heart_rate", 63),
    ))


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """40 balanced videos x 60 frames, signal in landmark_2d + heart_rate.

    Balanced classes keep every split of the default 0.8/0.1/0.1 ratios
    populated with both labels (test gets 2 fake + 2 real videos).
    """
    out = tmp_path_factory.mktemp("small_corpus")
    manifest_path = generate_synthetic(
        out, seed=101, n_videos=40, frames_per_video=60, fraction_fake=0.5,
    )
    manifest, tables = load_manifest(manifest_path)
    return manifest_path, manifest, tables


@pytest.fixture(scope="session")
def acceptance_corpus(tmp_path_factory):
    """The criterion-4 corpus: 200 videos x 120 frames, 5% fake."""
    out = tmp_path_factory.mktemp("acceptance_corpus")
    manifest_path = generate_synthetic(
        out, seed=4242, n_videos=200, frames_per_video=120, fraction_fake=0.05,
        signal_categories=("landmark_2d", "heart_rate"),
    )
    manifest, tables = load_manifest(manifest_path)
    return manifest_path, manifest, tables
