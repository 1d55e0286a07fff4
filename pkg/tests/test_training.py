"""Ensemble training: convergence, determinism, importances, estimator."""

import numpy as np
import pytest
from sklearn.base import clone

from pulseboost.boosting import (
    GradientBoostedTreesClassifier,
    TrainConfig,
    TreeEnsemble,
    count_leaves,
    feature_importance,
    fit_ensemble,
    predict_margin,
    predict_proba,
    sigmoid,
)
from pulseboost.boosting.tree import Internal, Leaf, iter_nodes, tree_predict
from pulseboost.errors import DegenerateLabels, SchemaMismatch
from pulseboost.metrics import roc_auc_from_arrays
from pulseboost.schema import FeatureSchema


def blob_data(seed=40, n=200, margin=2.5):
    """Two linearly separable 2-D blobs; separability is asserted by a
    direct scan for a separating threshold on the discriminating axis."""
    rng = np.random.default_rng(seed)
    n_pos = n // 2
    X = np.vstack([
        rng.normal(-margin, 0.5, (n - n_pos, 2)),
        rng.normal(+margin, 0.5, (n_pos, 2)),
    ])
    y = np.r_[np.zeros(n - n_pos, int), np.ones(n_pos, int)]
    assert X[y == 0, 0].max() < X[y == 1, 0].min()  # linear-scan oracle
    return X, y


class TestFitEnsemble:
    def test_separable_blobs_reach_training_auc_1(self):
        X, y = blob_data()
        cfg = TrainConfig(n_trees=50, learning_rate=0.1, max_depth=3, seed=1)
        ens = fit_ensemble(X, y, cfg)
        auc = roc_auc_from_arrays(ens.predict_proba(X), y)
        assert auc == 1.0

    def test_zero_trees_predicts_base_score(self):
        X, y = blob_data()
        cfg = TrainConfig(n_trees=0, base_score=0.3)
        ens = fit_ensemble(X, y, cfg)
        np.testing.assert_array_equal(ens.predict_margin(X), np.full(len(X), 0.3))
        np.testing.assert_allclose(ens.predict_proba(X), sigmoid(0.3))
        # default base score: probability is exactly one half everywhere
        neutral = fit_ensemble(X, y, TrainConfig(n_trees=0))
        assert (neutral.predict_proba(X) == 0.5).all()

    def test_single_leaf_tree_probability(self):
        from pulseboost.boosting.tree import Leaf
        ens = TreeEnsemble(
            trees=(Leaf(weight=0.8),), learning_rate=0.05, base_score=0.0,
            n_features=2, config=TrainConfig(n_trees=1, learning_rate=0.05),
        )
        out = ens.predict_proba(np.zeros((3, 2)))
        np.testing.assert_allclose(out, sigmoid(0.05 * 0.8))

    def test_single_class_rejected(self):
        X = np.random.default_rng(0).normal(size=(10, 2))
        with pytest.raises(DegenerateLabels):
            fit_ensemble(X, np.zeros(10, int), TrainConfig(n_trees=1))
        with pytest.raises(DegenerateLabels):
            fit_ensemble(X, np.full(10, 2), TrainConfig(n_trees=1))

    def test_loss_history_monotone_nonincreasing(self):
        X, y = blob_data(seed=41)
        cfg = TrainConfig(n_trees=60, learning_rate=0.1, max_depth=3)
        ens = fit_ensemble(X, y, cfg)
        losses = ens.train_losses
        assert len(losses) == 61
        assert all(b <= a + 1e-9 for a, b in zip(losses, losses[1:]))

    def test_margin_matches_manual_tree_walk(self):
        X, y = blob_data(seed=42, n=80)
        cfg = TrainConfig(n_trees=10, learning_rate=0.07, max_depth=3, base_score=0.1)
        ens = fit_ensemble(X, y, cfg)
        rng = np.random.default_rng(5)
        rows = rng.normal(0, 3, (5, 2))
        expected = np.full(5, 0.1)
        for tree in ens.trees:
            expected = expected + 0.07 * tree_predict(tree, rows)
        np.testing.assert_allclose(ens.predict_margin(rows), expected, rtol=0, atol=0)

    def test_deterministic_across_runs_and_workers(self):
        X, y = blob_data(seed=43)
        cfg = TrainConfig(n_trees=15, learning_rate=0.1, max_depth=4, seed=7)
        a = fit_ensemble(X, y, cfg, n_workers=1)
        b = fit_ensemble(X, y, cfg, n_workers=1)
        c = fit_ensemble(X, y, cfg, n_workers=4)
        assert a.trees == b.trees == c.trees

    def test_bagging_is_seeded(self):
        X, y = blob_data(seed=44)
        base = dict(n_trees=8, learning_rate=0.2, max_depth=3,
                    subsample=0.6, colsample=0.5)
        a = fit_ensemble(X, y, TrainConfig(seed=1, **base))
        b = fit_ensemble(X, y, TrainConfig(seed=1, **base))
        c = fit_ensemble(X, y, TrainConfig(seed=2, **base))
        assert a.trees == b.trees
        assert a.trees != c.trees
        # bagged run still ranks the training data well
        assert roc_auc_from_arrays(a.predict_proba(X), y) > 0.99

    def test_wrong_width_rejected_at_predict(self):
        X, y = blob_data(seed=45, n=60)
        ens = fit_ensemble(X, y, TrainConfig(n_trees=2, max_depth=2))
        with pytest.raises(SchemaMismatch):
            ens.predict_margin(np.ones((3, 5)))

    def test_module_level_predict_helpers(self):
        X, y = blob_data(seed=46, n=60)
        ens = fit_ensemble(X, y, TrainConfig(n_trees=3, max_depth=2))
        np.testing.assert_array_equal(predict_margin(ens, X), ens.predict_margin(X))
        np.testing.assert_array_equal(predict_proba(ens, X), ens.predict_proba(X))


class TestFeatureImportance:
    def test_leaf_only_ensemble_has_zero_importance(self):
        X, y = blob_data(seed=47, n=60)
        ens = fit_ensemble(X, y, TrainConfig(n_trees=4, max_depth=0))
        per_feature, per_cat = feature_importance(ens)
        assert (per_feature == 0.0).all()
        assert per_cat is None

    def test_single_split_attribution(self):
        tree = Internal(feature=1, threshold=0.0, gain=2.0,
                        left=Leaf(-0.1), right=Leaf(0.1))
        ens = TreeEnsemble(
            trees=(tree,), learning_rate=0.1, base_score=0.0,
            n_features=3, config=TrainConfig(n_trees=1),
        )
        per_feature, _ = feature_importance(ens)
        np.testing.assert_array_equal(per_feature, [0.0, 2.0, 0.0])

    def test_signal_category_dominates(self):
        rng = np.random.default_rng(48)
        schema = FeatureSchema((("head_pose", 4), ("heart_rate", 63)))
        n = 400
        X = rng.normal(size=(n, schema.total_dim))
        hr0 = schema.spans()["heart_rate"][0]
        y = (X[:, hr0 + 5] + 0.5 * X[:, hr0 + 20] > 0).astype(int)
        ens = fit_ensemble(X, y, TrainConfig(n_trees=20, learning_rate=0.3, max_depth=3))
        _, per_cat = feature_importance(ens, schema)
        total = sum(per_cat.values())
        assert per_cat["heart_rate"] >= 0.9 * total

    def test_importances_nonnegative(self):
        X, y = blob_data(seed=49, n=100)
        ens = fit_ensemble(X, y, TrainConfig(n_trees=10, max_depth=3))
        per_feature, _ = feature_importance(ens)
        assert (per_feature >= 0.0).all()

    def test_every_stored_gain_clears_gamma_after_training(self):
        X, y = blob_data(seed=53, n=150)
        gamma = 0.02
        ens = fit_ensemble(
            X, y, TrainConfig(n_trees=12, learning_rate=0.2, max_depth=4,
                              gamma=gamma)
        )
        gains = [
            node.gain for tree in ens.trees for node in iter_nodes(tree)
            if isinstance(node, Internal)
        ]
        assert gains and min(gains) >= gamma


class TestEstimatorFacade:
    def test_fit_predict_shapes_and_params(self):
        X, y = blob_data(seed=50, n=120)
        clf = GradientBoostedTreesClassifier(
            n_trees=20, learning_rate=0.2, max_depth=3, seed=3
        )
        assert clone(clf).get_params()["n_trees"] == 20
        clf.fit(X, y)
        proba = clf.predict_proba(X)
        assert proba.shape == (len(X), 2)
        np.testing.assert_allclose(proba.sum(axis=1), 1.0)
        assert set(clf.predict(X)) <= {0, 1}
        assert clf.score(X, y) == 1.0
        assert clf.n_features_in_ == 2
        assert len(clf.train_losses_) == 21

    def test_decision_function_is_margin(self):
        X, y = blob_data(seed=51, n=80)
        clf = GradientBoostedTreesClassifier(n_trees=5, max_depth=2).fit(X, y)
        np.testing.assert_array_equal(
            clf.decision_function(X), clf.ensemble_.predict_margin(X)
        )


def test_count_leaves_matches_structure():
    X, y = blob_data(seed=52, n=60)
    ens = fit_ensemble(X, y, TrainConfig(n_trees=3, max_depth=2))
    manual = sum(
        1 for t in ens.trees for n in iter_nodes(t) if isinstance(n, Leaf)
    )
    assert count_leaves(ens) == manual
