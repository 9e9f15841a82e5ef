"""Dataset ingestion, stratified splitting, label bookkeeping, and costs.

Datasets are plain CSV: numeric feature columns followed by a final
``label`` column over {0, 1}, where 1 marks an anomaly.  Ground-truth
labels ride along for evaluation and for simulated oracles, but the
allocation loop only ever sees the ones it has paid for.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Mapping

import numpy as np

MIN_EXAMPLES = 10
TRAIN_FRAC, VAL_FRAC, TEST_FRAC = 0.4, 0.4, 0.2


class DatasetFormatError(ValueError):
    """A dataset file that cannot be parsed into the expected CSV layout."""


class CostInequalityError(ValueError):
    """Rejection cost so high that always committing would be cheaper."""


class DegenerateStratificationWarning(UserWarning):
    """Too few anomalies to stratify; the split falls back to plain shuffling."""


@dataclass(frozen=True)
class Dataset:
    """Feature matrix, hidden ground-truth labels, and contamination rate.

    ``gamma`` is the anomaly fraction.  It is computed from the labels by
    the loaders unless explicitly overridden, and must lie strictly
    inside (0, 1).
    """

    features: np.ndarray
    truth_labels: np.ndarray
    gamma: float
    name: str = "dataset"

    def __post_init__(self) -> None:
        X = np.ascontiguousarray(np.asarray(self.features, dtype=float))
        y = np.asarray(self.truth_labels, dtype=int)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "truth_labels", y)
        if X.ndim != 2 or X.shape[1] < 1:
            raise ValueError("features must be a 2-d matrix with at least one column")
        if X.shape[0] < MIN_EXAMPLES:
            raise ValueError(
                f"dataset needs at least {MIN_EXAMPLES} examples, got {X.shape[0]}"
            )
        if not np.isfinite(X).all():
            raise ValueError("features must be finite")
        if y.shape != (X.shape[0],) or not np.isin(y, (0, 1)).all():
            raise ValueError("labels must be a {0,1} vector matching the feature rows")
        if not 0.0 < float(self.gamma) < 1.0:
            raise ValueError(f"contamination gamma must lie in (0, 1), got {self.gamma}")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @classmethod
    def from_arrays(cls, X, y, name: str = "dataset", gamma: float | None = None) -> "Dataset":
        y = np.asarray(y, dtype=int)
        if gamma is None:
            if y.sum() in (0, len(y)):
                raise ValueError("labels are one-class; pass gamma explicitly")
            gamma = float(y.mean())
        return cls(np.asarray(X, dtype=float), y, float(gamma), name)


def read_dataset(fh: IO[str], name: str, gamma_override: float | None = None) -> Dataset:
    """Parse an open CSV stream; errors name the offending line."""
    reader = csv.reader(fh)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DatasetFormatError(f"{name}: empty file") from None
    if len(header) < 2 or header[-1] != "label":
        raise DatasetFormatError(
            f"{name}: expected numeric feature columns followed by a final 'label' column"
        )
    d = len(header) - 1
    rows: list[list[float]] = []
    labels: list[int] = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != d + 1:
            raise DatasetFormatError(
                f"{name}: line {lineno}: expected {d + 1} fields, got {len(row)}"
            )
        try:
            rows.append([float(v) for v in row[:-1]])
        except ValueError:
            raise DatasetFormatError(
                f"{name}: line {lineno}: non-numeric feature value"
            ) from None
        raw = row[-1].strip()
        try:
            lab = float(raw)
        except ValueError:
            raise DatasetFormatError(
                f"{name}: line {lineno}: label {raw!r} is not numeric"
            ) from None
        if lab not in (0.0, 1.0):
            raise DatasetFormatError(f"{name}: line {lineno}: label must be 0 or 1, got {raw}")
        labels.append(int(lab))
    X = np.asarray(rows, dtype=float)
    y = np.asarray(labels, dtype=int)
    if len(X) < MIN_EXAMPLES:
        raise DatasetFormatError(f"{name}: need at least {MIN_EXAMPLES} data rows, got {len(X)}")
    if gamma_override is None:
        if y.sum() in (0, len(y)):
            raise ValueError(f"{name}: labels are one-class; pass a gamma override")
        gamma = float(y.mean())
    else:
        gamma = float(gamma_override)
    return Dataset(X, y, gamma, name=name)


def load_dataset(path: str | Path, gamma_override: float | None = None) -> Dataset:
    """Load a CSV dataset from disk.  UTF-8, comma separated, dot decimals."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        return read_dataset(fh, path.stem, gamma_override)


def write_dataset_csv(ds: Dataset, path: str | Path) -> Path:
    """Write a dataset in the loadable format; floats round-trip exactly."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"f{j + 1}" for j in range(ds.d)] + ["label"])
        for x, y in zip(ds.features, ds.truth_labels):
            writer.writerow([repr(float(v)) for v in x] + [str(int(y))])
    return path


@dataclass(frozen=True)
class SplitView:
    """Disjoint train/validation/test index sets over one dataset."""

    train_idx: np.ndarray
    val_idx: np.ndarray
    test_idx: np.ndarray
    seed: int


def _largest_remainder(quotas: list[float], total: int) -> list[int]:
    # Floor everything, then hand the leftover seats to the largest
    # fractional parts; equal parts resolve in list order.
    floors = [math.floor(q) for q in quotas]
    leftover = total - sum(floors)
    order = sorted(range(len(quotas)), key=lambda i: (-(quotas[i] - floors[i]), i))
    for i in order[:leftover]:
        floors[i] += 1
    return floors


def _fit_within(alloc: list[int], sizes: list[int]) -> list[int]:
    # Guard for extreme contamination: no class allocation may exceed its
    # split size.  Excess moves to the split with the most headroom.
    alloc = list(alloc)
    while True:
        over = [i for i in range(len(alloc)) if alloc[i] > sizes[i]]
        if not over:
            return alloc
        i = over[0]
        j = max(range(len(alloc)), key=lambda k: sizes[k] - alloc[k])
        alloc[i] -= 1
        alloc[j] += 1


def stratified_split(ds: Dataset, seed: int = 0) -> SplitView:
    """Split 40/40/20 into train/validation/test, stratified by truth.

    Sizes follow largest-remainder rounding (ties favor train, then
    validation), so each part is within one example of its exact quota.
    With fewer than 3 anomalies stratification is meaningless; a warning
    is issued and a plain shuffled split is returned.
    """
    n = ds.n
    sizes = _largest_remainder([TRAIN_FRAC * n, VAL_FRAC * n, TEST_FRAC * n], n)
    rng = np.random.default_rng(seed)
    pos = np.flatnonzero(ds.truth_labels == 1)
    neg = np.flatnonzero(ds.truth_labels == 0)

    if pos.size < 3:
        warnings.warn(
            f"{ds.name}: only {pos.size} anomalies; falling back to an unstratified split",
            DegenerateStratificationWarning,
        )
        perm = rng.permutation(n)
        parts = np.split(perm, [sizes[0], sizes[0] + sizes[1]])
    else:
        pos_alloc = _largest_remainder([s * pos.size / n for s in sizes], pos.size)
        pos_alloc = _fit_within(pos_alloc, sizes)
        pos_perm = rng.permutation(pos)
        neg_perm = rng.permutation(neg)
        parts = []
        p0 = n0 = 0
        for size, a in zip(sizes, pos_alloc):
            part = np.concatenate([pos_perm[p0:p0 + a], neg_perm[n0:n0 + size - a]])
            parts.append(part)
            p0 += a
            n0 += size - a
    train, val, test = (np.sort(p).astype(np.int64) for p in parts)
    return SplitView(train, val, test, seed=int(seed))


class LabelStore:
    """Purchased labels over the train and validation pools.

    Keys are dataset indices.  A key can be inserted at most once and
    must belong to the matching split; the label value must be 0 or 1.
    """

    def __init__(self, split: SplitView):
        self._pools = {
            "train": frozenset(int(i) for i in split.train_idx),
            "val": frozenset(int(i) for i in split.val_idx),
        }
        self._sorted = {
            "train": np.asarray(split.train_idx, dtype=np.int64),
            "val": np.asarray(split.val_idx, dtype=np.int64),
        }
        self.train_labels: dict[int, int] = {}
        self.val_labels: dict[int, int] = {}

    def _add(self, kind: str, store: dict[int, int], index: int, label: int) -> None:
        index = int(index)
        if index not in self._pools[kind]:
            raise KeyError(f"index {index} is not in the {kind} split")
        if index in store:
            raise KeyError(f"{kind} index {index} already labeled")
        if label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {label!r}")
        store[index] = int(label)

    def add_train(self, index: int, label: int) -> None:
        self._add("train", self.train_labels, index, label)

    def add_val(self, index: int, label: int) -> None:
        self._add("val", self.val_labels, index, label)

    @property
    def total_purchased(self) -> int:
        return len(self.train_labels) + len(self.val_labels)

    def _unlabeled(self, kind: str, labeled: Mapping[int, int]) -> np.ndarray:
        pool = self._sorted[kind]
        if not labeled:
            return pool.copy()
        mask = ~np.isin(pool, np.fromiter(labeled.keys(), dtype=np.int64))
        return pool[mask]

    def unlabeled_train(self) -> np.ndarray:
        return self._unlabeled("train", self.train_labels)

    def unlabeled_val(self) -> np.ndarray:
        return self._unlabeled("val", self.val_labels)


@dataclass(frozen=True)
class CostParams:
    """Unit costs for false positives, false negatives, and rejections."""

    c_fp: float = 1.0
    c_fn: float = 1.0
    c_r: float = 0.0

    def __post_init__(self) -> None:
        for field_name in ("c_fp", "c_fn", "c_r"):
            v = float(getattr(self, field_name))
            object.__setattr__(self, field_name, v)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{field_name} must be finite and nonnegative, got {v}")


def validate_costs(costs: CostParams, gamma: float) -> float:
    """Check c_r <= min(c_fp * (1 - gamma), c_fn * gamma); return the bound.

    Above that bound a constant always-normal or always-anomaly predictor
    has lower expected cost than rejecting, so rejection would never be
    worth buying labels for.
    """
    fp_bound = costs.c_fp * (1.0 - gamma)
    fn_bound = costs.c_fn * gamma
    bound = min(fp_bound, fn_bound)
    if costs.c_r > bound:
        raise CostInequalityError(
            f"c_r={costs.c_r} exceeds min(c_fp*(1-gamma)={fp_bound}, "
            f"c_fn*gamma={fn_bound}) = {bound}; a constant predictor would beat rejection"
        )
    return bound
