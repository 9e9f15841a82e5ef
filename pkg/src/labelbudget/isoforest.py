"""Isolation forest, grown from scratch with seeded construction.

Scores land in (0, 1) via 2 ** (-E[path length] / c(m)), where c(m) is
the expected unsuccessful-search depth of a binary search tree over m
points.  Higher means easier to isolate, i.e. more anomalous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_EULER = 0.5772156649015329

DEFAULT_TREES = 100
DEFAULT_SUBSAMPLE = 256


def average_path_length(m: int) -> float:
    """c(m): expected remaining depth below a node holding m points."""
    if m <= 1:
        return 0.0
    if m == 2:
        return 1.0
    return 2.0 * (math.log(m - 1.0) + _EULER) - 2.0 * (m - 1.0) / m


@dataclass
class _Tree:
    feature: np.ndarray     # -1 marks a leaf
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    path_value: np.ndarray  # leaf depth + c(leaf size)
    depth: np.ndarray


def _build_tree(Xs: np.ndarray, limit: int, rng: np.random.Generator) -> _Tree:
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    path_value: list[float] = []
    depth: list[int] = []

    def new_node(d: int) -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        path_value.append(0.0)
        depth.append(d)
        return len(feature) - 1

    def grow(rows: np.ndarray, d: int) -> int:
        node = new_node(d)
        m = rows.size
        if d >= limit or m <= 1:
            path_value[node] = d + average_path_length(m)
            return node
        sub = Xs[rows]
        lo = sub.min(axis=0)
        hi = sub.max(axis=0)
        splittable = np.flatnonzero(lo < hi)
        if splittable.size == 0:
            # all remaining points identical; nothing left to isolate
            path_value[node] = d + average_path_length(m)
            return node
        q = int(splittable[rng.integers(splittable.size)])
        p = float(rng.uniform(lo[q], hi[q]))
        mask = sub[:, q] < p
        feature[node] = q
        threshold[node] = p
        left[node] = grow(rows[mask], d + 1)
        right[node] = grow(rows[~mask], d + 1)
        return node

    grow(np.arange(Xs.shape[0]), 0)
    return _Tree(
        np.asarray(feature, dtype=np.intp),
        np.asarray(threshold, dtype=float),
        np.asarray(left, dtype=np.intp),
        np.asarray(right, dtype=np.intp),
        np.asarray(path_value, dtype=float),
        np.asarray(depth, dtype=np.intp),
    )


def _tree_paths(tree: _Tree, X: np.ndarray) -> np.ndarray:
    node = np.zeros(X.shape[0], dtype=np.intp)
    active = np.flatnonzero(tree.feature[node] >= 0)
    while active.size:
        cur = node[active]
        f = tree.feature[cur]
        go_left = X[active, f] < tree.threshold[cur]
        node[active] = np.where(go_left, tree.left[cur], tree.right[cur])
        active = active[tree.feature[node[active]] >= 0]
    return tree.path_value[node]


@dataclass
class IsolationForestModel:
    """A fitted forest; ``score`` maps rows to anomaly scores in (0, 1)."""

    trees: list[_Tree]
    subsample_size: int
    n_trees: int
    normalizer: float

    def score(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=float)))
        if self.normalizer <= 0.0:
            # c(1) = 0: a single-point model carries no depth signal
            return np.full(X.shape[0], 0.5)
        total = np.zeros(X.shape[0])
        for tree in self.trees:
            total += _tree_paths(tree, X)
        return np.power(2.0, -(total / self.n_trees) / self.normalizer)


def fit_iforest(
    X: np.ndarray,
    n_trees: int = DEFAULT_TREES,
    subsample: int = DEFAULT_SUBSAMPLE,
    seed=0,
) -> IsolationForestModel:
    """Fit ``n_trees`` isolation trees on per-tree subsamples of X.

    Deterministic for a fixed seed.  Each tree is depth-capped at
    ceil(log2(subsample size)); nodes whose points are all identical
    terminate early and contribute c(size) to the path.
    """
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=float)))
    n = X.shape[0]
    if n < 1:
        raise ValueError("need at least one row to fit")
    if n_trees < 1:
        raise ValueError("n_trees must be positive")
    if subsample < 1:
        raise ValueError("subsample must be positive")
    psi = min(int(subsample), n)
    limit = math.ceil(math.log2(psi)) if psi > 1 else 0
    rng = np.random.default_rng(seed)
    trees = []
    for _ in range(n_trees):
        rows = rng.choice(n, size=psi, replace=False)
        trees.append(_build_tree(X[rows], limit, rng))
    return IsolationForestModel(trees, psi, int(n_trees), average_path_length(psi))
