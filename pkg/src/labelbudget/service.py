"""HTTP session service: drive the allocation loop one batch at a time.

Sessions live in memory.  A human-oracle session surfaces each pending
batch (starting with the two initialization batches) and waits for
labels; a simulated-oracle session can also be advanced server-side
with ground truth via /autostep.  The /report CSV uses the exact same
writer as the command-line harness, so a simulated session reproduces
the corresponding harness rows byte for byte.
"""

from __future__ import annotations

import io
import threading
import uuid
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from .allocation import AllocationLoop, plan_budget
from .data import CostParams, Dataset, read_dataset, stratified_split, validate_costs
from .harness import dataset_header_line, per_round_csv_text, record_row
from .synthetic import generate_synthetic

MODE_HUMAN = "human-oracle"
MODE_SIMULATED = "simulated-oracle"


class SyntheticSpec(BaseModel):
    n: int
    d: int
    gamma: float
    seed: int = 0


class DatasetSpec(BaseModel):
    path: str | None = None
    csv: str | None = None
    synthetic: SyntheticSpec | None = None
    gamma: float | None = None


class SessionConfig(BaseModel):
    strategy: str = "ballad"
    reward: str = "entropy"
    budget_frac: float = 0.30
    round_frac: float = 0.02
    seed: int = 0
    c_fp: float = 1.0
    c_fn: float = 1.0
    c_r: float | str = "auto"
    cost_variant: str = "per-example"


class CreateSessionRequest(BaseModel):
    dataset: DatasetSpec
    mode: str = MODE_SIMULATED
    config: SessionConfig = SessionConfig()


class SubmitLabelsRequest(BaseModel):
    labels: dict[int, int]


class AutostepRequest(BaseModel):
    rounds: int = Field(default=1, ge=0)


@dataclass
class _Session:
    id: str
    loop: AllocationLoop
    mode: str
    dataset: Dataset
    costs: CostParams
    reward_kind: str
    strategy: str
    lock: threading.Lock


def _build_dataset(spec: DatasetSpec) -> Dataset:
    given = [spec.path is not None, spec.csv is not None, spec.synthetic is not None]
    if sum(given) != 1:
        raise ValueError("dataset spec needs exactly one of path, csv, or synthetic")
    if spec.synthetic is not None:
        s = spec.synthetic
        return generate_synthetic(s.n, s.d, s.gamma, s.seed)
    if spec.csv is not None:
        return read_dataset(io.StringIO(spec.csv), "inline", spec.gamma)
    with open(spec.path, newline="", encoding="utf-8") as fh:
        from pathlib import Path

        return read_dataset(fh, Path(spec.path).stem, spec.gamma)


def _record_json(rec) -> dict:
    return {
        "round": rec.round,
        "side": rec.side,
        "queried_indices": list(rec.queried_indices),
        "reward_AL": rec.reward_al,
        "reward_LR": rec.reward_lr,
        "tau": rec.tau,
        "test_cost": rec.test_cost,
        "cumulative_labels": rec.cumulative_labels,
    }


def _summary(sess: _Session) -> dict:
    loop = sess.loop
    return {
        "id": sess.id,
        "mode": sess.mode,
        "status": "complete" if loop.is_complete else "awaiting-labels",
        "strategy": sess.strategy,
        "reward_kind": sess.reward_kind,
        "round": loop.ledger.rounds_done,
        "rounds_total": loop.rounds_total,
        "spent": loop.ledger.spent,
        "total_B": loop.ledger.total,
        "per_round_b": loop.ledger.per_round,
        "reward_AL": loop.reward_al.value,
        "reward_LR": loop.reward_lr.value,
        "tau": loop.tau_state.tau,
        "dataset": {
            "name": sess.dataset.name,
            "n": sess.dataset.n,
            "d": sess.dataset.d,
            "gamma": sess.dataset.gamma,
        },
        "history": [_record_json(r) for r in loop.history],
    }


def _queries(sess: _Session) -> dict:
    loop = sess.loop
    query = loop.pending_query()
    base = {
        "reward_AL": loop.reward_al.value,
        "reward_LR": loop.reward_lr.value,
        "tau": loop.tau_state.tau,
    }
    if query is None:
        return {"status": "complete", "round": loop.ledger.rounds_done, "side": None,
                "indices": [], "rows": [], **base}
    rows = sess.dataset.features[np.asarray(query.indices, dtype=np.int64)].tolist()
    return {"status": "awaiting-labels", "round": query.round, "side": query.side.value,
            "indices": list(query.indices), "rows": rows, **base}


def create_app(ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="labelbudget session service")
    sessions: dict[str, _Session] = {}

    def get_session(session_id: str) -> _Session:
        sess = sessions.get(session_id)
        if sess is None:
            raise HTTPException(404, f"no such session {session_id}")
        return sess

    @app.post("/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        if req.mode not in (MODE_HUMAN, MODE_SIMULATED):
            raise HTTPException(422, f"mode must be {MODE_HUMAN} or {MODE_SIMULATED}")
        cfg = req.config
        try:
            ds = _build_dataset(req.dataset)
            c_r = ds.gamma if cfg.c_r == "auto" else float(cfg.c_r)
            costs = CostParams(cfg.c_fp, cfg.c_fn, c_r)
            validate_costs(costs, ds.gamma)
            split = stratified_split(ds, cfg.seed)
            b, total = plan_budget(int(split.train_idx.size), cfg.budget_frac, cfg.round_frac)
            loop = AllocationLoop(
                ds, split, costs,
                b=b, total_budget=total,
                strategy=cfg.strategy, reward_kind=cfg.reward,
                seed=cfg.seed, cost_variant=cfg.cost_variant,
            )
        except FileNotFoundError as exc:
            raise HTTPException(404, str(exc)) from exc
        except (ValueError, KeyError) as exc:
            raise HTTPException(422, str(exc)) from exc
        sess = _Session(
            id=uuid.uuid4().hex,
            loop=loop,
            mode=req.mode,
            dataset=ds,
            costs=costs,
            reward_kind=cfg.reward,
            strategy=cfg.strategy,
            lock=threading.Lock(),
        )
        sessions[sess.id] = sess
        return {"id": sess.id, "summary": _summary(sess)}

    @app.get("/sessions/{session_id}")
    def get_summary(session_id: str):
        return _summary(get_session(session_id))

    @app.get("/sessions/{session_id}/queries")
    def get_queries(session_id: str):
        return _queries(get_session(session_id))

    @app.post("/sessions/{session_id}/labels")
    def submit_labels(session_id: str, req: SubmitLabelsRequest):
        sess = get_session(session_id)
        if not sess.lock.acquire(blocking=False):
            raise HTTPException(409, "another mutation is in flight for this session")
        try:
            query = sess.loop.pending_query()
            if query is None:
                raise HTTPException(409, "session is complete; no batch is awaiting labels")
            expected = sorted(query.indices)
            if set(req.labels) != set(query.indices):
                raise HTTPException(
                    409,
                    {"message": "labels must cover exactly the pending batch", "expected": expected},
                )
            bad = {i: v for i, v in req.labels.items() if v not in (0, 1)}
            if bad:
                raise HTTPException(422, f"labels must be 0 or 1, got {bad}")
            sess.loop.commit_labels(req.labels)
        finally:
            sess.lock.release()
        return {"summary": _summary(sess), "queries": _queries(sess)}

    @app.post("/sessions/{session_id}/autostep")
    def autostep(session_id: str, req: AutostepRequest):
        sess = get_session(session_id)
        if sess.mode != MODE_SIMULATED:
            raise HTTPException(409, "autostep is only available in simulated-oracle mode")
        if not sess.lock.acquire(blocking=False):
            raise HTTPException(409, "another mutation is in flight for this session")
        try:
            truth = sess.dataset.truth_labels
            done = 0
            while done < req.rounds:
                query = sess.loop.pending_query()
                if query is None:
                    break
                sess.loop.commit_labels({i: int(truth[i]) for i in query.indices})
                done += 1
        finally:
            sess.lock.release()
        return {"rounds_advanced": done, "summary": _summary(sess)}

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str):
        sess = get_session(session_id)
        rows = [
            record_row(sess.dataset.name, sess.strategy, sess.reward_kind, 0, rec)
            for rec in sess.loop.history
        ]
        text = per_round_csv_text(rows, [dataset_header_line(sess.dataset, sess.costs)])
        return PlainTextResponse(text, media_type="text/csv")

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
