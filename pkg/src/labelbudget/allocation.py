"""The round-by-round label budget allocation loop and its baselines.

Every round spends the same batch of b labels.  The full strategy buys
its first batch as random validation labels (tuning the rejection
threshold) and its second as random training labels (updating the
detector); each adaptive round after that goes to whichever side showed
the larger reward last time it was refreshed, ties favoring the
detector side.  The two all-in baselines spend every batch on a single
side from round 1: all-in-al ranks unlabeled training points by
uncertainty and re-tunes tau on its own (biased) training labels, while
all-in-lr never touches the detector at all.

The loop is driven through a propose/commit pair so the same engine can
answer an HTTP session one batch at a time or burn through a simulated
oracle in one call.  ``pending_query`` is idempotent: the pending batch
is computed once and cached until labels for exactly that index set are
committed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Mapping

import numpy as np

from .data import CostParams, Dataset, LabelStore, SplitView, stratified_split, validate_costs
from .detector import DetectorConfig, fit_detector, refit_semi_supervised
from .evaluation import PER_EXAMPLE, empirical_cost
from .rejection import (
    REJECTION_CAP,
    RULE_CENTERED,
    RejectState,
    TAU_DEFAULT,
    confidence,
    optimize_tau,
    predict_many,
    reject_probability,
)
from .rewards import ProbabilityTrace, RewardSnapshot, Side, trace_reward


class BudgetError(ValueError):
    """Budget and batch sizes that cannot form a valid schedule."""


class Strategy(str, Enum):
    BALLAD = "ballad"
    ALL_IN_AL = "all-in-al"
    ALL_IN_LR = "all-in-lr"


class RewardKind(str, Enum):
    ENTROPY = "entropy"
    COSINE = "cosine"


@dataclass
class BudgetLedger:
    """Spend tracking: ``total`` labels overall, ``per_round`` per batch."""

    total: int
    per_round: int
    spent: int = 0
    rounds_done: int = 0


@dataclass(frozen=True)
class RoundQuery:
    round: int
    side: Side
    indices: tuple[int, ...]


@dataclass(frozen=True)
class RoundRecord:
    """One committed round.  Rewards are the values at choice time."""

    round: int
    side: str
    queried_indices: tuple[int, ...]
    reward_al: float
    reward_lr: float
    tau: float
    test_cost: float
    cumulative_labels: int


def plan_budget(n_train: int, budget_frac: float, round_frac: float) -> tuple[int, int]:
    """Per-round batch b and total budget B from the training pool size.

    b = max(1, round(round_frac * n_train)); B rounds the budget target
    down to a whole number of batches and must cover at least the two
    initialization rounds.
    """
    if not 0.0 < round_frac <= 1.0 or not 0.0 < budget_frac <= 1.0:
        raise BudgetError("budget and round fractions must lie in (0, 1]")
    b = max(1, round(round_frac * n_train))
    target = round(budget_frac * n_train)
    total = b * (target // b)
    if total < 2 * b:
        raise BudgetError(
            f"budget {total} cannot cover two initialization batches of {b}"
        )
    return b, total


class AllocationLoop:
    """Stateful engine: propose a labeled batch, commit labels, repeat."""

    def __init__(
        self,
        dataset: Dataset,
        split: SplitView,
        costs: CostParams,
        *,
        b: int,
        total_budget: int,
        strategy: Strategy | str = Strategy.BALLAD,
        reward_kind: RewardKind | str = RewardKind.ENTROPY,
        seed=0,
        cost_variant: str = PER_EXAMPLE,
        detector: DetectorConfig | None = None,
        rejection_rule: str = RULE_CENTERED,
        full_binary_entropy: bool = False,
        cap: float = REJECTION_CAP,
    ):
        validate_costs(costs, dataset.gamma)
        self.dataset = dataset
        self.split = split
        self.costs = costs
        self.strategy = Strategy(strategy)
        self.reward_kind = RewardKind(reward_kind)
        self.cost_variant = cost_variant
        self.rule = rejection_rule
        self.full_binary = bool(full_binary_entropy)
        self.cap = float(cap)

        n_train = int(split.train_idx.size)
        n_val = int(split.val_idx.size)
        if b < 1:
            raise BudgetError("per-round batch must be at least 1")
        if total_budget < 2 * b:
            raise BudgetError("budget must cover the two initialization batches")
        if total_budget % b:
            raise BudgetError("budget must be a whole number of rounds")
        if b > n_train // 2 or b > n_val // 2:
            raise BudgetError("per-round batch larger than half a label pool")
        self.ledger = BudgetLedger(int(total_budget), int(b))
        self.store = LabelStore(split)

        ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        forest_ss, query_ss = ss.spawn(2)
        self._rng = np.random.default_rng(query_ss)

        X = dataset.features
        self.model = fit_detector(
            X[split.train_idx], dataset.gamma, detector or DetectorConfig(),
            seed=forest_ss, train_index=split.train_idx,
        )
        self._prior_train = self.model.prior.score(X[split.train_idx])
        self._prior_val = self.model.prior.score(X[split.val_idx])
        self._prior_test = self.model.prior.score(X[split.test_idx])
        self._refresh_posteriors()

        self.tau_state = RejectState(TAU_DEFAULT, "default")
        self.reward_al = RewardSnapshot(Side.AL, self.reward_kind.value, 0.0, 0)
        self.reward_lr = RewardSnapshot(Side.LR, self.reward_kind.value, 0.0, 0)
        self.history: list[RoundRecord] = []
        self._pending: RoundQuery | None = None
        self._exhausted = False

    # -- read-only views -------------------------------------------------

    @property
    def rounds_total(self) -> int:
        return self.ledger.total // self.ledger.per_round

    @property
    def is_complete(self) -> bool:
        return (
            self._exhausted
            or self.ledger.rounds_done >= self.rounds_total
            or self.ledger.spent >= self.ledger.total
        )

    # -- internals -------------------------------------------------------

    def _refresh_posteriors(self) -> None:
        X = self.dataset.features
        self._post_train = self.model.posterior_many(
            X[self.split.train_idx], prior_scores=self._prior_train
        )
        self._post_val = self.model.posterior_many(
            X[self.split.val_idx], prior_scores=self._prior_val
        )
        self._post_test = self.model.posterior_many(
            X[self.split.test_idx], prior_scores=self._prior_test
        )

    def choose_side(self) -> Side:
        """Adaptive pick: the side with the larger reward, ties to AL."""
        return Side.AL if self.reward_al.value >= self.reward_lr.value else Side.LR

    def _side_for_round(self, rnd: int) -> Side:
        if self.strategy is Strategy.ALL_IN_AL:
            return Side.AL
        if self.strategy is Strategy.ALL_IN_LR:
            return Side.LR
        if rnd == 1:
            return Side.LR
        if rnd == 2:
            return Side.AL
        return self.choose_side()

    def _draw_random(self, pool: np.ndarray, b: int) -> tuple[int, ...]:
        take = min(b, int(pool.size))
        if take == 0:
            raise BudgetError("label pool exhausted before the budget")
        chosen = self._rng.choice(pool, size=take, replace=False)
        return tuple(sorted(int(i) for i in chosen))

    def _query_al_uncertainty(self, b: int) -> tuple[int, ...]:
        pool = self.store.unlabeled_train()
        if pool.size == 0:
            raise BudgetError("label pool exhausted before the budget")
        rows = np.searchsorted(self.split.train_idx, pool)
        conf = confidence(self._post_train[rows])
        order = np.lexsort((pool, conf))  # least confident first, then index
        take = pool[order[: min(b, pool.size)]]
        return tuple(sorted(int(i) for i in take))

    def _propose(self) -> RoundQuery:
        rnd = self.ledger.rounds_done + 1
        side = self._side_for_round(rnd)
        b = self.ledger.per_round
        if side is Side.LR:
            indices = self._draw_random(self.store.unlabeled_val(), b)
        elif self.strategy is Strategy.BALLAD and rnd == 2:
            # initialization batch: random, not uncertainty-driven
            indices = self._draw_random(self.store.unlabeled_train(), b)
        else:
            indices = self._query_al_uncertainty(b)
        return RoundQuery(rnd, side, indices)

    def _test_cost(self) -> float:
        preds = predict_many(self._post_test, self.tau_state.tau, self.rule)
        truth = self.dataset.truth_labels[self.split.test_idx]
        return empirical_cost(preds, truth, self.costs, self.cost_variant).cost

    def _labeled_val_pairs(self) -> list[tuple[int, int]]:
        keys = sorted(self.store.val_labels)
        rows = np.searchsorted(self.split.val_idx, np.asarray(keys, dtype=np.int64))
        return [(int(r), self.store.val_labels[k]) for r, k in zip(rows, keys)]

    # -- the drive cycle -------------------------------------------------

    def pending_query(self) -> RoundQuery | None:
        if self.is_complete:
            return None
        if self._pending is None:
            self._pending = self._propose()
        return self._pending

    def commit_labels(self, labels: Mapping[int, int]) -> RoundRecord | None:
        """Purchase the pending batch, update one side, record the round."""
        query = self.pending_query()
        if query is None:
            warnings.warn("budget exhausted; label submission ignored")
            return None
        given = {int(k): v for k, v in labels.items()}
        if set(given) != set(query.indices):
            raise KeyError(f"expected labels for exactly these indices: {sorted(query.indices)}")
        for v in given.values():
            if v not in (0, 1):
                raise ValueError(f"label must be 0 or 1, got {v!r}")

        rnd = query.round
        before_al = self.reward_al.value
        before_lr = self.reward_lr.value

        if query.side is Side.AL:
            for i in query.indices:
                self.store.add_train(i, given[i])
            prev = ProbabilityTrace(Side.AL, self._post_train, rnd - 1, self.split.train_idx)
            self.model = refit_semi_supervised(self.model, self.store)
            self._refresh_posteriors()
            curr = ProbabilityTrace(Side.AL, self._post_train, rnd, self.split.train_idx)
            self.reward_al = trace_reward(prev, curr, self.reward_kind.value, self.full_binary)
            if self.strategy is Strategy.ALL_IN_AL:
                # this strategy has no validation labels; tau is tuned on
                # its own training labels, cap still on full validation
                keys = sorted(self.store.train_labels)
                rows = np.searchsorted(self.split.train_idx, np.asarray(keys, dtype=np.int64))
                self.tau_state = optimize_tau(
                    self._post_val,
                    [(k, self.store.train_labels[k]) for k in keys],
                    self.costs,
                    self.cap,
                    subset_posteriors=self._post_train[rows],
                    current=self.tau_state,
                    rule=self.rule,
                    source="optimized-on-train",
                )
        else:
            for i in query.indices:
                self.store.add_val(i, given[i])
            conf_val = confidence(self._post_val)
            prev = ProbabilityTrace(
                Side.LR, reject_probability(conf_val, self.tau_state.tau), rnd - 1, self.split.val_idx
            )
            self.tau_state = optimize_tau(
                self._post_val,
                self._labeled_val_pairs(),
                self.costs,
                self.cap,
                current=self.tau_state,
                rule=self.rule,
                source="optimized-on-validation",
            )
            curr = ProbabilityTrace(
                Side.LR, reject_probability(conf_val, self.tau_state.tau), rnd, self.split.val_idx
            )
            self.reward_lr = trace_reward(prev, curr, self.reward_kind.value, self.full_binary)

        self.ledger.spent += len(query.indices)
        self.ledger.rounds_done = rnd
        if len(query.indices) < self.ledger.per_round:
            self._exhausted = True
        record = RoundRecord(
            round=rnd,
            side=query.side.value,
            queried_indices=query.indices,
            reward_al=before_al,
            reward_lr=before_lr,
            tau=self.tau_state.tau,
            test_cost=self._test_cost(),
            cumulative_labels=self.ledger.spent,
        )
        self.history.append(record)
        self._pending = None
        return record

    def run_with_oracle(self, oracle: Callable[[int], int]) -> list[RoundRecord]:
        """Drive to completion, answering every query through ``oracle``."""
        while (query := self.pending_query()) is not None:
            self.commit_labels({i: int(oracle(i)) for i in query.indices})
        return self.history


def run_allocation(
    dataset: Dataset,
    *,
    strategy: Strategy | str = Strategy.BALLAD,
    reward_kind: RewardKind | str = RewardKind.ENTROPY,
    budget_frac: float = 0.30,
    round_frac: float = 0.02,
    costs: CostParams | None = None,
    seed: int = 0,
    cost_variant: str = PER_EXAMPLE,
    detector: DetectorConfig | None = None,
    rejection_rule: str = RULE_CENTERED,
    full_binary_entropy: bool = False,
    oracle: Callable[[int], int] | None = None,
) -> AllocationLoop:
    """Split, run one full allocation, and return the finished loop.

    The oracle defaults to the dataset's hidden ground truth.
    """
    if costs is None:
        costs = CostParams(1.0, 1.0, dataset.gamma)
    split = stratified_split(dataset, seed)
    b, total = plan_budget(int(split.train_idx.size), budget_frac, round_frac)
    loop = AllocationLoop(
        dataset,
        split,
        costs,
        b=b,
        total_budget=total,
        strategy=strategy,
        reward_kind=reward_kind,
        seed=seed,
        cost_variant=cost_variant,
        detector=detector,
        rejection_rule=rejection_rule,
        full_binary_entropy=full_binary_entropy,
    )
    truth = dataset.truth_labels
    loop.run_with_oracle(oracle or (lambda i: int(truth[i])))
    return loop
