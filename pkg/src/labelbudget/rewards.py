"""Reward signals: how much a label batch moved the detector's outputs.

Two interchangeable measures over a probability trace (the detector's
outputs on a fixed reference index set, before vs after an update):

* entropy: mean absolute change of the single-term entropy -p*log2(p),
* cosine: cosine distance between the binarized output vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Side(str, Enum):
    AL = "AL"
    LR = "LR"


@dataclass(frozen=True)
class RewardSnapshot:
    side: Side
    kind: str
    value: float
    round: int


@dataclass(frozen=True)
class ProbabilityTrace:
    """Probabilities over a fixed reference index set at one round."""

    side: Side
    probs: np.ndarray
    round: int
    indices: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=float))
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=np.int64))
        if self.probs.shape != self.indices.shape:
            raise ValueError("trace probabilities and indices must align")


def entropy_term(p, full_binary: bool = False):
    """-p*log2(p), zero at both ends; optionally the full binary entropy."""
    arr = np.asarray(p, dtype=float)
    if np.any((arr < 0) | (arr > 1)):
        raise ValueError("probabilities must lie in [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(arr > 0, -arr * np.log2(np.where(arr > 0, arr, 1.0)), 0.0)
        if full_binary:
            q = 1.0 - arr
            out = out + np.where(q > 0, -q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    if np.ndim(p) == 0:
        return float(out)
    return out


def _check_pair(prev: ProbabilityTrace, curr: ProbabilityTrace) -> None:
    if prev.side != curr.side:
        raise ValueError(f"traces compare different sides: {prev.side} vs {curr.side}")
    if prev.indices.shape != curr.indices.shape or np.any(prev.indices != curr.indices):
        raise ValueError("traces cover different index sets")


def entropy_reward(
    prev: ProbabilityTrace, curr: ProbabilityTrace, full_binary: bool = False
) -> RewardSnapshot:
    """Mean |H(curr) - H(prev)| over the shared index set."""
    _check_pair(prev, curr)
    value = float(
        np.mean(np.abs(entropy_term(curr.probs, full_binary) - entropy_term(prev.probs, full_binary)))
    )
    return RewardSnapshot(curr.side, "entropy", value, curr.round)


def binarize(probs) -> np.ndarray:
    """Probabilities to hard {0, 1} votes at the 0.5 line (strictly above)."""
    return (np.asarray(probs, dtype=float) > 0.5).astype(np.int64)


def cosine_reward_value(prev_bits, curr_bits) -> float:
    """Cosine distance between binary vectors, with all-zero conventions.

    Both all-zero -> 0 (nothing changed); exactly one all-zero -> 1
    (maximal change); identical nonzero vectors -> exactly 0.
    """
    a = np.asarray(prev_bits, dtype=np.int64)
    b = np.asarray(curr_bits, dtype=np.int64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("bit vectors must be 1-d and equal length")
    if not (np.isin(a, (0, 1)).all() and np.isin(b, (0, 1)).all()):
        raise ValueError("bit vectors must be over {0, 1}")
    sa = int(a.sum())
    sb = int(b.sum())
    if sa == 0 and sb == 0:
        return 0.0
    if sa == 0 or sb == 0:
        return 1.0
    dot = int(a @ b)
    if dot * dot == sa * sb:
        # exactly parallel; avoids returning -0.0-sized float dust
        return 0.0
    val = 1.0 - dot / (np.sqrt(sa) * np.sqrt(sb))
    return float(min(1.0, max(0.0, val)))


def cosine_reward(prev_bits, curr_bits, side: Side, round: int) -> RewardSnapshot:
    return RewardSnapshot(Side(side), "cosine", cosine_reward_value(prev_bits, curr_bits), round)


def trace_reward(
    prev: ProbabilityTrace, curr: ProbabilityTrace, kind: str, full_binary: bool = False
) -> RewardSnapshot:
    """Dispatch on the configured reward kind."""
    if kind == "entropy":
        return entropy_reward(prev, curr, full_binary)
    if kind == "cosine":
        _check_pair(prev, curr)
        return cosine_reward(binarize(prev.probs), binarize(curr.probs), curr.side, curr.round)
    raise ValueError(f"unknown reward kind {kind!r}")
