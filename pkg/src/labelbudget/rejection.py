"""Confidence, rejection probabilities, trinary decisions, and tau search.

A prediction is rejected when its confidence is too low for the current
threshold tau.  The default rule is the squashing-consistent one:
reject iff reject_probability(confidence, tau) >= 0.5, equivalently
confidence <= 1 - tau.  The historical variant "confidence < tau" stays
available behind the ``rule`` switch for sensitivity studies.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .detector import squash

TAU_DEFAULT = 0.1
TAU_GRID = tuple(i * 0.005 for i in range(1, 201))
REJECTION_CAP = 0.5

RULE_CENTERED = "centered"    # reject iff confidence <= 1 - tau
RULE_BELOW_TAU = "below-tau"  # reject iff confidence < tau
_RULES = (RULE_CENTERED, RULE_BELOW_TAU)


class Trinary(IntEnum):
    NORMAL = 0
    ANOMALY = 1
    REJECT = 2


@dataclass(frozen=True)
class RejectState:
    """Current rejection threshold and where it came from."""

    tau: float
    source: str = "default"  # default | optimized-on-validation | optimized-on-train

    def __post_init__(self) -> None:
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must lie in (0, 1], got {self.tau}")


def confidence(p):
    """2 * |p - 0.5|: 0 at a coin flip, 1 at a certain prediction."""
    arr = np.asarray(p, dtype=float)
    if np.any((arr < 0) | (arr > 1)):
        raise ValueError("probabilities must lie in [0, 1]")
    out = 2.0 * np.abs(arr - 0.5)
    if np.ndim(p) == 0:
        return float(out)
    return out


def reject_probability(conf, tau: float):
    """squash(1 - confidence, tau): crosses 0.5 where confidence = 1 - tau."""
    arr = np.asarray(conf, dtype=float)
    if np.any((arr < 0) | (arr > 1)):
        raise ValueError("confidence must lie in [0, 1]")
    return squash(1.0 - arr if np.ndim(conf) else 1.0 - float(arr), tau)


def _reject_mask(probs: np.ndarray, tau: float, rule: str) -> np.ndarray:
    conf = confidence(probs)
    if rule == RULE_CENTERED:
        # evaluated through the probability so the two formulations can
        # never disagree, even on the boundary
        return np.asarray(reject_probability(conf, tau)) >= 0.5
    if rule == RULE_BELOW_TAU:
        return conf < tau
    raise ValueError(f"unknown rejection rule {rule!r}; expected one of {_RULES}")


def predict_many(probs, tau: float, rule: str = RULE_CENTERED) -> np.ndarray:
    """Trinary codes for a probability vector."""
    arr = np.atleast_1d(np.asarray(probs, dtype=float))
    rej = _reject_mask(arr, tau, rule)
    anom = arr > 0.5
    return np.where(rej, int(Trinary.REJECT), np.where(anom, int(Trinary.ANOMALY), int(Trinary.NORMAL)))


def predict_trinary(p: float, tau: float, rule: str = RULE_CENTERED) -> Trinary:
    """Anomaly iff p > 0.5, normal iff p < 0.5, unless rejected first."""
    return Trinary(int(predict_many(np.asarray([p], dtype=float), tau, rule)[0]))


def rejection_rate(posteriors, tau: float, rule: str = RULE_CENTERED) -> float:
    """Fraction of predictions that would be rejected at this tau."""
    arr = np.atleast_1d(np.asarray(posteriors, dtype=float))
    if arr.size == 0:
        raise ValueError("rejection rate is undefined for an empty vector")
    return float(_reject_mask(arr, tau, rule).mean())


def optimize_tau(
    val_posteriors,
    labeled_subset,
    costs,
    cap: float = REJECTION_CAP,
    *,
    subset_posteriors=None,
    current: RejectState | None = None,
    rule: str = RULE_CENTERED,
    source: str = "optimized-on-validation",
) -> RejectState:
    """Grid-search tau over {0.005 * i : i = 1..200}.

    Feasibility first: any tau whose rejection rate over the *full*
    validation posterior vector exceeds ``cap`` is discarded.  Among the
    rest, minimize the per-example empirical cost on the labeled subset
    (pairs of (index into val_posteriors, label), or explicit posteriors
    via ``subset_posteriors``).  Ties resolve toward the larger tau.
    With no labeled examples the current state is kept, with a warning;
    with no feasible grid point at all, tau pins to 1.
    """
    from .evaluation import empirical_cost  # local import; evaluation imports Trinary

    val = np.atleast_1d(np.asarray(val_posteriors, dtype=float))
    pairs = list(labeled_subset)
    if not pairs:
        warnings.warn("no labeled examples to tune the rejection threshold; keeping it unchanged")
        return current if current is not None else RejectState(TAU_DEFAULT, "default")
    labels = np.asarray([y for _, y in pairs], dtype=int)
    if subset_posteriors is None:
        probs = val[np.asarray([i for i, _ in pairs], dtype=np.int64)]
    else:
        probs = np.atleast_1d(np.asarray(subset_posteriors, dtype=float))
        if probs.shape != labels.shape:
            raise ValueError("subset posteriors must align with the labeled pairs")

    best_tau = None
    best_cost = np.inf
    for tau in TAU_GRID:
        if rejection_rate(val, tau, rule) > cap:
            continue
        preds = predict_many(probs, tau, rule)
        cost = empirical_cost(preds, labels, costs, "per-example").cost
        if cost <= best_cost:  # <=: later (larger) tau wins ties
            best_cost = cost
            best_tau = tau
    if best_tau is None:
        return RejectState(1.0, source)
    return RejectState(float(best_tau), source)
