"""Score calibration and the label-aware semi-supervised detector.

Raw isolation scores become probabilities through a squashing function
centered on a contamination quantile of the training scores: a score
equal to the threshold maps to 0.5, so roughly a gamma fraction of
training points starts out on the anomalous side.

Purchased labels then bend those probabilities locally.  Each labeled
point casts a Gaussian-kernel vote in standardized feature space, and
the calibrated prior keeps a weight of (1 - eta), where eta is the
strongest single vote:

    p(x) = ((1 - eta(x)) * p_prior(x) + sum_z K(x, z) * y_z)
           / ((1 - eta(x)) + sum_z K(x, z))

At a labeled point itself eta = 1 and the label wins outright; far from
every label the posterior collapses back to the calibrated prior.  With
no labels at all the two are identical, bit for bit.  The bandwidth is
a nearest-neighbor scale, so a vote carries a few neighborhoods rather
than the whole dataset.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from .isoforest import DEFAULT_SUBSAMPLE, DEFAULT_TREES, IsolationForestModel, fit_iforest

logger = logging.getLogger(__name__)

POSTERIOR_EPS = 1e-6
BANDWIDTH_SAMPLE = 500


def squash(s, lam: float):
    """1 - 2 ** (-s^2 / lam^2): [0, inf) -> [0, 1), with squash(lam) = 0.5.

    Accepts scalars or arrays.  Scores must be nonnegative and ``lam``
    strictly positive.
    """
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 0):
        raise ValueError("squash is defined for nonnegative scores only")
    lam = float(lam)
    if not lam > 0:
        raise ValueError(f"squashing scale must be positive, got {lam}")
    out = 1.0 - np.power(2.0, -(arr * arr) / (lam * lam))
    # Saturated scores would round to exactly 1.0; the range stays open.
    out = np.minimum(out, np.nextafter(1.0, 0.0))
    if np.ndim(s) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class DecisionThreshold:
    """A calibrated score threshold: scores above t lean anomalous."""

    t: float


def quantile_threshold(scores, gamma: float) -> DecisionThreshold:
    """The (1 - gamma) quantile of scores, linearly interpolated."""
    scores = np.asarray(scores, dtype=float)
    if scores.size == 0:
        raise ValueError("cannot take a quantile of an empty score vector")
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    if np.all(scores == scores.flat[0]):
        logger.warning(
            "all %d scores are identical (%g); the threshold is degenerate and "
            "calibrated probabilities will sit at 0.5 everywhere",
            scores.size,
            scores.flat[0],
        )
    return DecisionThreshold(float(np.quantile(scores, 1.0 - gamma)))


@dataclass(frozen=True)
class Standardizer:
    """Per-feature z-scoring; zero-variance features are dropped."""

    mean: np.ndarray
    scale: np.ndarray
    keep: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Standardizer":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        keep = std > 0
        return cls(mean, np.where(keep, std, 1.0), keep)

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return ((X - self.mean) / self.scale)[:, self.keep]


def _bandwidth(Z: np.ndarray) -> float:
    # Mean distance to the nearest neighbor, not the mean pairwise
    # distance: the kernel must stay local.  At the global scale a few
    # dozen labels reach every point at K ~ 0.5 and the label average
    # (roughly the contamination rate) drags all posteriors below 0.5.
    if Z.shape[0] < 2:
        return 1.0
    D = squareform(pdist(Z))
    np.fill_diagonal(D, np.inf)
    m = float(D.min(axis=1).mean())
    if m > 0:
        return m
    # Heavy duplication can zero out the neighbor distances.
    d = pdist(Z)
    m = float(d.mean()) if d.size else 0.0
    return m if m > 0 else 1.0


@dataclass(frozen=True)
class DetectorConfig:
    n_trees: int = DEFAULT_TREES
    subsample: int = DEFAULT_SUBSAMPLE


@dataclass(frozen=True)
class SemiSupervisedModel:
    """Calibrated prior plus kernel-weighted label influence.

    ``train_index`` maps label-store keys (dataset indices) onto rows of
    ``train_X``; when None, label keys are taken as row positions.
    """

    prior: IsolationForestModel
    t_prior: float
    train_X: np.ndarray
    standardizer: Standardizer
    sigma: float
    labeled_X: np.ndarray
    labeled_y: np.ndarray
    train_index: np.ndarray | None = None

    @property
    def n_labeled(self) -> int:
        return int(self.labeled_y.size)

    def prior_probability(self, X: np.ndarray, prior_scores=None) -> np.ndarray:
        """The calibrated prior: squashed isolation scores, clamped."""
        s = self.prior.score(X) if prior_scores is None else np.asarray(prior_scores, float)
        return np.clip(squash(s, self.t_prior), POSTERIOR_EPS, 1.0 - POSTERIOR_EPS)

    def posterior_many(self, X: np.ndarray, prior_scores=None) -> np.ndarray:
        """P(anomaly) for each row of X; clamped to [1e-6, 1 - 1e-6]."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        pp = self.prior_probability(X, prior_scores)
        if self.n_labeled == 0:
            return pp
        Zx = self.standardizer.transform(X)
        Zl = self.standardizer.transform(self.labeled_X)
        if Zx.shape[1] == 0:
            d2 = np.zeros((Zx.shape[0], Zl.shape[0]))
        else:
            d2 = cdist(Zx, Zl, "sqeuclidean")
        K = np.exp(-d2 / (2.0 * self.sigma * self.sigma))
        eta = K.max(axis=1)
        post = ((1.0 - eta) * pp + K @ self.labeled_y) / ((1.0 - eta) + K.sum(axis=1))
        return np.clip(post, POSTERIOR_EPS, 1.0 - POSTERIOR_EPS)

    def posterior(self, x: np.ndarray) -> float:
        return float(self.posterior_many(np.atleast_2d(x))[0])


def fit_detector(
    X_train: np.ndarray,
    gamma: float,
    config: DetectorConfig = DetectorConfig(),
    seed=0,
    train_index: np.ndarray | None = None,
) -> SemiSupervisedModel:
    """Fit the unsupervised prior and calibrate it; starts with no labels.

    The kernel bandwidth is the mean nearest-neighbor distance over the
    first ``BANDWIDTH_SAMPLE`` standardized training rows, fixed at fit
    time.
    """
    X_train = np.atleast_2d(np.asarray(X_train, dtype=float))
    prior = fit_iforest(X_train, config.n_trees, config.subsample, seed)
    t = quantile_threshold(prior.score(X_train), gamma).t
    std = Standardizer.fit(X_train)
    sigma = _bandwidth(std.transform(X_train[:BANDWIDTH_SAMPLE]))
    d = X_train.shape[1]
    return SemiSupervisedModel(
        prior=prior,
        t_prior=t,
        train_X=X_train,
        standardizer=std,
        sigma=sigma,
        labeled_X=np.empty((0, d)),
        labeled_y=np.empty(0),
        train_index=None if train_index is None else np.asarray(train_index, dtype=np.int64),
    )


def refit_semi_supervised(model: SemiSupervisedModel, label_store) -> SemiSupervisedModel:
    """Return a model folding in the store's training labels.

    Accepts a LabelStore or any mapping from training index to label.
    Refitting twice with the same labels gives an identical model; an
    empty store reproduces the calibrated prior exactly.
    """
    labels: Mapping[int, int] = getattr(label_store, "train_labels", label_store)
    keys = sorted(int(k) for k in labels)
    if not keys:
        d = model.train_X.shape[1]
        return replace(model, labeled_X=np.empty((0, d)), labeled_y=np.empty(0))
    if model.train_index is not None:
        rows = np.searchsorted(model.train_index, np.asarray(keys, dtype=np.int64))
        if np.any(rows >= model.train_index.size) or np.any(
            model.train_index[rows] != np.asarray(keys, dtype=np.int64)
        ):
            raise KeyError("label store refers to indices outside the training split")
    else:
        rows = np.asarray(keys, dtype=np.int64)
        if np.any(rows < 0) or np.any(rows >= model.train_X.shape[0]):
            raise KeyError("label store refers to rows outside the training matrix")
    y = np.asarray([float(labels[k]) for k in keys])
    return replace(model, labeled_X=model.train_X[rows], labeled_y=y)
