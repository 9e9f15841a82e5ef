/**
 * Wire types for the session service.
 *
 * Field names match the server payloads verbatim; the UI never renames,
 * rounds, or recomputes them.
 */

export type Side = "AL" | "LR";

export type SessionStatus = "awaiting-labels" | "complete";

export type Mode = "simulated-oracle" | "human-oracle";

export interface RoundRecord {
  round: number;
  side: Side;
  queried_indices: number[];
  reward_AL: number;
  reward_LR: number;
  tau: number;
  test_cost: number;
  cumulative_labels: number;
}

export interface DatasetInfo {
  name: string;
  n: number;
  d: number;
  gamma: number;
}

export interface SessionSummary {
  id: string;
  mode: Mode;
  status: SessionStatus;
  strategy: string;
  reward_kind: string;
  round: number;
  rounds_total: number;
  spent: number;
  total_B: number;
  per_round_b: number;
  reward_AL: number;
  reward_LR: number;
  tau: number;
  dataset: DatasetInfo;
  history: RoundRecord[];
}

export interface QueryBatch {
  status: SessionStatus;
  round: number;
  side: Side | null;
  indices: number[];
  rows: number[][];
  reward_AL: number;
  reward_LR: number;
  tau: number;
}

/** Body for POST /sessions. Exactly one dataset source may be set. */
export interface CreateSessionRequest {
  dataset: {
    path?: string;
    csv?: string;
    synthetic?: { n: number; d: number; gamma: number; seed?: number };
  };
  mode?: Mode;
  config?: {
    strategy?: string;
    reward?: string;
    seed?: number;
    budget_frac?: number;
    round_frac?: number;
    c_fp?: number;
    c_fn?: number;
    c_r?: number | "auto";
  };
}

export interface CreateSessionResponse {
  id: string;
  summary: SessionSummary;
}

export interface SubmitLabelsResponse {
  summary: SessionSummary;
  queries: QueryBatch;
}

export type AnomalyLabel = 0 | 1;
