"""Hot loops of the exact-greedy trainer, jitted.

Both kernels are single sequential passes with plain float64 scalar
arithmetic, so their results are bit-reproducible and independent of how
work is split across threads (they run under nogil inside worker
threads; each call owns a disjoint block of feature rows).

The node state is one (features, samples) matrix S of row ids, each row
sorted by its feature. Values and gradients are gathered on the fly:
XT is the feature matrix transposed so that one feature's values are a
contiguous row, which keeps the id-indexed reads cache-resident.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def scan_features(
    S, XT, g, h,
    G_tot, H_tot, reg_lambda, gamma, min_child_hessian,
    best_gain, best_pos,
):
    """Best split position per feature row of S.

    S is (features, samples); row j pairs with XT row j. best_pos[j] = i
    means the left child takes sorted positions 0..i; -1 means no valid
    candidate. Gains are already gamma-deducted. Ties keep the lowest
    position.
    """
    n_features, m = S.shape
    parent = G_tot * G_tot / (H_tot + reg_lambda)
    for j in range(n_features):
        bg = -np.inf
        bp = -1
        rid = S[j, 0]
        x_prev = XT[j, rid]
        gl = g[rid]
        hl = h[rid]
        for i in range(1, m):
            rid = S[j, i]
            x = XT[j, rid]
            if x > x_prev:
                hr = H_tot - hl
                if hl >= min_child_hessian and hr >= min_child_hessian:
                    gr = G_tot - gl
                    gain = 0.5 * (
                        gl * gl / (hl + reg_lambda)
                        + gr * gr / (hr + reg_lambda)
                        - parent
                    ) - gamma
                    if gain > bg:
                        bg = gain
                        bp = i - 1
            gl += g[rid]
            hl += h[rid]
            x_prev = x
        best_gain[j] = bg
        best_pos[j] = bp


@njit(cache=True, nogil=True)
def partition_ids(S, member, SL, SR):
    """One-pass split of the id matrix into left/right children,
    preserving each feature row's sort order. ``member`` flags the row
    ids that go left."""
    n_features, m = S.shape
    for j in range(n_features):
        a = 0
        b = 0
        for i in range(m):
            rid = S[j, i]
            if member[rid]:
                SL[j, a] = rid
                a += 1
            else:
                SR[j, b] = rid
                b += 1
