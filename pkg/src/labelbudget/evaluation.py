"""Cost metrics over trinary predictions, ranking AUC, run aggregation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .data import CostParams
from .rejection import Trinary

PER_EXAMPLE = "per-example"
CONDITIONAL = "conditional"
_VARIANTS = (PER_EXAMPLE, CONDITIONAL)


@dataclass(frozen=True)
class CostReport:
    cost: float
    variant: str
    reject_fraction: float
    fp_count: int
    fn_count: int
    n: int


def empirical_cost(preds, labels, costs: CostParams, variant: str = PER_EXAMPLE) -> CostReport:
    """Cost of trinary predictions against ground truth.

    per-example: (c_r * #rejects + c_fp * #FP + c_fn * #FN) / n.
    conditional: c_r * reject rate + c_fp * FP rate among negatives
    + c_fn * FN rate among positives (needs both classes present).
    Errors count only among committed (non-rejected) predictions.
    """
    preds = np.atleast_1d(np.asarray(preds, dtype=int))
    labels = np.atleast_1d(np.asarray(labels, dtype=int))
    if preds.shape != labels.shape or preds.ndim != 1:
        raise ValueError("predictions and labels must be 1-d and equal length")
    n = preds.size
    if n == 0:
        raise ValueError("cost is undefined for an empty prediction vector")
    n_rej = int(np.sum(preds == Trinary.REJECT))
    n_fp = int(np.sum((preds == Trinary.ANOMALY) & (labels == 0)))
    n_fn = int(np.sum((preds == Trinary.NORMAL) & (labels == 1)))
    if variant == PER_EXAMPLE:
        value = (costs.c_r * n_rej + costs.c_fp * n_fp + costs.c_fn * n_fn) / n
    elif variant == CONDITIONAL:
        n_pos = int(np.sum(labels == 1))
        n_neg = n - n_pos
        if n_pos == 0 or n_neg == 0:
            raise ValueError("conditional cost is undefined without both classes present")
        value = costs.c_r * (n_rej / n) + costs.c_fp * (n_fp / n_neg) + costs.c_fn * (n_fn / n_pos)
    else:
        raise ValueError(f"unknown cost variant {variant!r}; expected one of {_VARIANTS}")
    return CostReport(float(value), variant, n_rej / n, n_fp, n_fn, n)


def auc(scores, labels) -> float:
    """P(random positive outranks random negative); ties count one half."""
    scores = np.atleast_1d(np.asarray(scores, dtype=float))
    labels = np.atleast_1d(np.asarray(labels, dtype=int))
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must align")
    n_pos = int(np.sum(labels == 1))
    n_neg = int(np.sum(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC is undefined without both classes present")
    ranks = rankdata(scores)
    return float((ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def aggregate(rows, round_frac: float = 0.02) -> list[dict]:
    """Per-round cost summaries grouped by (strategy, reward_kind, round).

    ``rows`` are per-round report mappings carrying at least strategy,
    reward_kind, round, and test_cost.  Standard deviation is the
    population one, so a single history aggregates to std 0.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to aggregate")
    groups: dict[tuple, list[float]] = {}
    for row in rows:
        key = (str(row["strategy"]), str(row["reward_kind"]), int(row["round"]))
        groups.setdefault(key, []).append(float(row["test_cost"]))
    out = []
    for (strategy, reward_kind, rnd) in sorted(groups):
        costs = np.asarray(groups[(strategy, reward_kind, rnd)])
        out.append(
            {
                "strategy": strategy,
                "reward_kind": reward_kind,
                "round": rnd,
                "budget_pct": 100.0 * round_frac * rnd,
                "mean_cost": float(costs.mean()),
                "std_cost": float(costs.std()),
            }
        )
    return out
