"""Logistic loss derivatives against finite-difference oracles."""

import numpy as np
import pytest

from pulseboost.boosting import logistic_grad_hess, logistic_loss, sigmoid
from pulseboost.boosting.loss import logistic_grad_hess_batch


def nll(label, margin):
    """-log P(label | margin), computed stably."""
    return np.logaddexp(0.0, margin) - label * margin


def test_label1_margin0():
    gp = logistic_grad_hess(1, 0.0)
    assert gp.g == -0.5
    assert gp.h == 0.25


def test_label0_margin0():
    gp = logistic_grad_hess(0, 0.0)
    assert gp.g == 0.5
    assert gp.h == 0.25


def test_label1_margin2_finite_difference():
    eps = 1e-5
    gp = logistic_grad_hess(1, 2.0)
    g_fd = (nll(1, 2.0 + eps) - nll(1, 2.0 - eps)) / (2 * eps)
    assert abs(gp.g - g_fd) / abs(g_fd) <= 1e-5
    h_fd = (logistic_grad_hess(1, 2.0 + eps).g - logistic_grad_hess(1, 2.0 - eps).g) / (2 * eps)
    assert abs(gp.h - h_fd) / abs(h_fd) <= 1e-5


def test_thousand_random_points_match_central_differences():
    rng = np.random.default_rng(12)
    eps = 1e-5
    labels = rng.integers(0, 2, 1000)
    margins = np.clip(rng.normal(0.0, 2.0, 1000), -6.0, 6.0)
    for y, m in zip(labels, margins):
        gp = logistic_grad_hess(int(y), float(m))
        g_fd = (nll(y, m + eps) - nll(y, m - eps)) / (2 * eps)
        assert abs(gp.g - g_fd) <= 1e-5 * abs(g_fd)
        # h against central differences of the first derivative
        gp_hi = logistic_grad_hess(int(y), float(m + eps))
        gp_lo = logistic_grad_hess(int(y), float(m - eps))
        h_fd = (gp_hi.g - gp_lo.g) / (2 * eps)
        assert abs(gp.h - h_fd) <= 1e-5 * abs(h_fd)


def test_ranges_of_g_and_h():
    rng = np.random.default_rng(13)
    margins = rng.normal(0, 4, 500)
    labels = rng.integers(0, 2, 500)
    g, h = logistic_grad_hess_batch(labels, margins)
    assert (g > -1).all() and (g < 1).all()
    assert (h > 0).all() and (h <= 0.25).all()


def test_batch_matches_scalar():
    rng = np.random.default_rng(14)
    margins = rng.normal(0, 3, 50)
    labels = rng.integers(0, 2, 50)
    g, h = logistic_grad_hess_batch(labels, margins)
    for i in range(50):
        gp = logistic_grad_hess(int(labels[i]), float(margins[i]))
        assert g[i] == gp.g and h[i] == gp.h


def test_positive_weight_scales_positive_rows():
    labels = np.array([0, 1])
    margins = np.array([0.3, 0.3])
    g1, h1 = logistic_grad_hess_batch(labels, margins, positive_weight=1.0)
    g2, h2 = logistic_grad_hess_batch(labels, margins, positive_weight=3.0)
    assert g2[0] == g1[0] and h2[0] == h1[0]
    assert g2[1] == 3.0 * g1[1] and h2[1] == 3.0 * h1[1]


def test_logistic_loss_stable_for_large_margins():
    assert np.isfinite(logistic_loss(np.array([1.0]), np.array([800.0])))
    assert np.isfinite(logistic_loss(np.array([0.0]), np.array([-800.0])))
    assert logistic_loss(np.array([1.0]), np.array([0.0])) == pytest.approx(np.log(2))


def test_sigmoid_scalar_and_array():
    assert sigmoid(0.0) == 0.5
    out = sigmoid(np.array([-800.0, 0.0, 800.0]))
    assert out[0] == 0.0 and out[1] == 0.5 and out[2] == 1.0
