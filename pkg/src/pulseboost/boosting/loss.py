"""Binary logistic loss and its first two derivatives in margin space.

The boosting engine is second-order: each round fits a tree to the
per-sample gradient g = p - y and hessian h = p(1-p) of the negative
log-likelihood, evaluated at the current margins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GradPair:
    """First and second derivative of the loss wrt one sample's margin."""

    g: float
    h: float


def sigmoid(margin: np.ndarray | float) -> np.ndarray | float:
    """Numerically stable logistic function."""
    m = np.asarray(margin, dtype=np.float64)
    out = np.empty_like(m)
    pos = m >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-m[pos]))
    em = np.exp(m[~pos])
    out[~pos] = em / (1.0 + em)
    if np.isscalar(margin):
        return float(out)
    return out


def logistic_grad_hess(label: int, margin: float) -> GradPair:
    """Derivatives of -log P(label | margin) for one sample."""
    p = sigmoid(float(margin))
    return GradPair(g=p - float(label), h=p * (1.0 - p))


def logistic_grad_hess_batch(
    labels: np.ndarray, margins: np.ndarray, positive_weight: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (g, h) arrays; positives may carry an extra weight."""
    y = np.asarray(labels, dtype=np.float64)
    p = sigmoid(np.asarray(margins, dtype=np.float64))
    g = p - y
    h = p * (1.0 - p)
    if positive_weight != 1.0:
        w = np.where(y == 1.0, positive_weight, 1.0)
        g = g * w
        h = h * w
    return g, h


def logistic_loss(labels: np.ndarray, margins: np.ndarray) -> float:
    """Mean negative log-likelihood, stable for large |margin|."""
    y = np.asarray(labels, dtype=np.float64)
    m = np.asarray(margins, dtype=np.float64)
    # -log P(y|m) = log(1 + e^m) - y*m
    return float(np.mean(np.logaddexp(0.0, m) - y * m))
