"""Isolation forest construction, path-length normalization, scoring."""

import math

import numpy as np
import pytest

from labelbudget.isoforest import average_path_length, fit_iforest

EULER = 0.5772156649015329


class TestAveragePathLength:
    def test_degenerate_sizes(self):
        assert average_path_length(0) == 0.0
        assert average_path_length(1) == 0.0
        assert average_path_length(2) == 1.0

    def test_harmonic_formula(self):
        """c(m) = 2 * (ln(m - 1) + Euler) - 2 * (m - 1) / m for m > 2."""
        for m in (3, 10, 256, 1000):
            expect = 2.0 * (math.log(m - 1) + EULER) - 2.0 * (m - 1) / m
            assert average_path_length(m) == pytest.approx(expect, rel=0, abs=1e-12)

    def test_monotone_in_m(self):
        vals = [average_path_length(m) for m in range(2, 200)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestFitIsolationForest:
    def test_scores_in_open_unit_interval(self):
        rng = np.random.default_rng(0)
        X = rng.standard_normal((300, 4))
        model = fit_iforest(X, 50, 128, seed=1)
        s = model.score(X)
        assert np.all(s > 0) and np.all(s < 1)

    def test_same_seed_same_scores(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((200, 3))
        a = fit_iforest(X, 30, 64, seed=9).score(X)
        b = fit_iforest(X, 30, 64, seed=9).score(X)
        assert np.array_equal(a, b)

    def test_different_seed_differs(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((200, 3))
        a = fit_iforest(X, 30, 64, seed=9).score(X)
        b = fit_iforest(X, 30, 64, seed=10).score(X)
        assert not np.array_equal(a, b)

    def test_outliers_score_above_inliers(self):
        """Tight Gaussian bulk vs far uniform points: means separate."""
        rng = np.random.default_rng(7)
        inliers = rng.standard_normal((1000, 3)) * 0.5
        outliers = rng.uniform(6.0, 10.0, (50, 3)) * rng.choice([-1.0, 1.0], (50, 3))
        model = fit_iforest(np.vstack([inliers, outliers]), 100, 256, seed=0)
        margin = model.score(outliers).mean() - model.score(inliers).mean()
        assert margin > 0.15

    def test_single_point_scores_half(self):
        # c(1) = 0 makes the normalizer vanish; the score pins to 0.5.
        X = np.array([[1.0, 2.0]])
        model = fit_iforest(X, 1, 256, seed=0)
        np.testing.assert_allclose(model.score(X), [0.5])

    def test_constant_data_scores_half(self):
        X = np.ones((50, 3))
        model = fit_iforest(X, 10, 32, seed=0)
        np.testing.assert_allclose(model.score(X), np.full(50, 0.5))

    def test_subsample_larger_than_n_is_clipped(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((40, 2))
        model = fit_iforest(X, 10, 256, seed=0)
        assert np.all(np.isfinite(model.score(X)))

    def test_preconditions(self):
        X = np.random.default_rng(0).standard_normal((20, 2))
        with pytest.raises(ValueError):
            fit_iforest(X, 0, 16, seed=0)
        with pytest.raises(ValueError):
            fit_iforest(X, 10, 0, seed=0)

    def test_constant_feature_ignored_for_splits(self):
        """A constant column never becomes a split feature."""
        rng = np.random.default_rng(5)
        X = np.column_stack([rng.standard_normal(100), np.full(100, 3.0)])
        model = fit_iforest(X, 20, 64, seed=3)
        for tree in model.trees:
            internal = tree.feature >= 0
            assert not np.any(tree.feature[internal] == 1)
