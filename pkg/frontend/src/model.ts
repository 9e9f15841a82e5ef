/**
 * View model assembly. Pure projection of server payloads: every value
 * here is copied from a summary or queries response, never derived with
 * client-side arithmetic, so each dashboard number stays traceable to an
 * API field.
 */

import type { QueryBatch, RoundRecord, SessionSummary, Side } from "./types.js";

export interface CostPoint {
  round: number;
  cost: number;
}

export interface RewardPoint {
  round: number;
  reward_AL: number;
  reward_LR: number;
}

export interface SideChoice {
  round: number;
  side: Side;
}

export interface PendingRow {
  index: number;
  features: number[];
}

export interface SessionViewModel {
  id: string;
  mode: string;
  status: string;
  strategy: string;
  rewardKind: string;
  round: number;
  roundsTotal: number;
  spent: number;
  totalBudget: number;
  perRoundB: number;
  rewardAL: number;
  rewardLR: number;
  tau: number;
  datasetName: string;
  datasetSize: number;
  costCurve: CostPoint[];
  rewardPairs: RewardPoint[];
  sideHistory: SideChoice[];
  cumulativeLabels: number[];
  pendingBatch: PendingRow[];
  pendingSide: Side | null;
  complete: boolean;
}

function costPoint(rec: RoundRecord): CostPoint {
  return { round: rec.round, cost: rec.test_cost };
}

function rewardPoint(rec: RoundRecord): RewardPoint {
  return { round: rec.round, reward_AL: rec.reward_AL, reward_LR: rec.reward_LR };
}

export function buildViewModel(
  summary: SessionSummary,
  queries: QueryBatch | null
): SessionViewModel {
  const pending: PendingRow[] =
    queries && queries.status === "awaiting-labels"
      ? queries.indices.map((index, i) => ({ index, features: queries.rows[i] ?? [] }))
      : [];
  return {
    id: summary.id,
    mode: summary.mode,
    status: summary.status,
    strategy: summary.strategy,
    rewardKind: summary.reward_kind,
    round: summary.round,
    roundsTotal: summary.rounds_total,
    spent: summary.spent,
    totalBudget: summary.total_B,
    perRoundB: summary.per_round_b,
    rewardAL: summary.reward_AL,
    rewardLR: summary.reward_LR,
    tau: summary.tau,
    datasetName: summary.dataset.name,
    datasetSize: summary.dataset.n,
    costCurve: summary.history.map(costPoint),
    rewardPairs: summary.history.map(rewardPoint),
    sideHistory: summary.history.map((r) => ({ round: r.round, side: r.side })),
    cumulativeLabels: summary.history.map((r) => r.cumulative_labels),
    pendingBatch: pending,
    pendingSide: queries?.side ?? null,
    complete: summary.status === "complete",
  };
}
