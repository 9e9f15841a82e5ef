"""Synthetic benchmark generators.

Two difficulty regimes.  ``generate_synthetic`` puts box-uniform
anomalies around a single Gaussian bulk; an isolation forest separates
them almost perfectly, which is handy for calibration checks.
``generate_clustered`` is the benchmark-like one: multi-cluster inliers
with half the anomalies hiding near cluster edges, so the unsupervised
prior starts imperfect and purchased labels actually matter.
"""

from __future__ import annotations

import numpy as np

from .data import Dataset


def _check_shape(n: int, d: int, gamma: float) -> int:
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    if d < 1:
        raise ValueError("need at least one feature")
    n_anom = round(n * gamma)
    if n_anom < 3:
        raise ValueError(f"n * gamma must be at least 3, got {n * gamma:.3g}")
    if n - n_anom < 3:
        raise ValueError("too few inliers")
    return n_anom


def generate_synthetic(n: int, d: int, gamma: float, seed: int = 0, name: str = "synthetic") -> Dataset:
    """n points in d dimensions with a round(n * gamma) anomaly count.

    Inliers are standard normal; anomalies are uniform over a box
    scaled to five times the inlier spread, so most land well outside
    the bulk.  Rows are shuffled.  Requires n * gamma >= 3 so a
    stratified split stays meaningful.
    """
    n_anom = _check_shape(n, d, gamma)
    rng = np.random.default_rng(seed)
    inliers = rng.standard_normal((n - n_anom, d))
    center = inliers.mean(axis=0)
    spread = inliers.std(axis=0)
    anomalies = rng.uniform(center - 5.0 * spread, center + 5.0 * spread, size=(n_anom, d))
    X = np.vstack([inliers, anomalies])
    y = np.concatenate([np.zeros(n - n_anom, dtype=int), np.ones(n_anom, dtype=int)])
    perm = rng.permutation(n)
    return Dataset(X[perm], y[perm], n_anom / n, name=name)


def generate_clustered(
    n: int,
    d: int,
    gamma: float,
    seed: int = 0,
    name: str = "clustered",
    n_clusters: int = 3,
) -> Dataset:
    """Multi-cluster inliers with a mix of global and local anomalies.

    Inliers sit in ``n_clusters`` unit-variance Gaussian blobs with
    centers drawn from U(-4, 4) per coordinate.  Half the anomalies are
    global (uniform over the inlier bounding box inflated by 50% per
    side); the rest are cluster points pushed 2.5 to 4 z-units out in a
    random direction, close enough to fool a score-only prior.
    """
    n_anom = _check_shape(n, d, gamma)
    if n_clusters < 1:
        raise ValueError("need at least one cluster")
    rng = np.random.default_rng(seed)
    n_in = n - n_anom
    centers = rng.uniform(-4.0, 4.0, (n_clusters, d))
    member = rng.integers(n_clusters, size=n_in)
    inliers = centers[member] + rng.standard_normal((n_in, d))

    n_local = n_anom // 2
    n_global = n_anom - n_local
    lo = inliers.min(axis=0)
    hi = inliers.max(axis=0)
    span = hi - lo
    globals_ = rng.uniform(lo - 0.5 * span, hi + 0.5 * span, (n_global, d))
    base = centers[rng.integers(n_clusters, size=n_local)]
    direction = rng.standard_normal((n_local, d))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    locals_ = base + direction * rng.uniform(2.5, 4.0, (n_local, 1))

    X = np.vstack([inliers, globals_, locals_])
    y = np.concatenate([np.zeros(n_in, dtype=int), np.ones(n_anom, dtype=int)])
    perm = rng.permutation(n)
    return Dataset(X[perm], y[perm], n_anom / n, name=name)
