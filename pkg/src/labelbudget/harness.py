"""Experiment harness: configs, repeated seeded runs, report emission.

Reports are deterministic byte for byte for a fixed seed: rows are
emitted in (dataset, strategy, repetition, round) order and floats are
written with shortest round-trip repr.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from pathlib import Path

from .allocation import RoundRecord, Strategy, run_allocation
from .data import CostParams, Dataset, load_dataset, validate_costs
from .evaluation import PER_EXAMPLE, aggregate
from .rejection import RULE_CENTERED

PER_ROUND_COLUMNS = (
    "dataset",
    "strategy",
    "reward_kind",
    "rep",
    "round",
    "side",
    "reward_AL",
    "reward_LR",
    "tau",
    "test_cost",
    "cumulative_labels",
)
SUMMARY_COLUMNS = ("strategy", "reward_kind", "round", "budget_pct", "mean_cost", "std_cost")

ALL_STRATEGIES = tuple(s.value for s in Strategy)


@dataclass(frozen=True)
class ExperimentConfig:
    data: tuple[str, ...]
    strategies: tuple[str, ...] = ALL_STRATEGIES
    reward: str = "entropy"
    budget_frac: float = 0.30
    round_frac: float = 0.02
    reps: int = 10
    seed: int = 0
    c_fp: float = 1.0
    c_fn: float = 1.0
    c_r: float | str = "auto"
    cost_variant: str = PER_EXAMPLE
    out: str = "reports"
    plots: bool = True
    rejection_rule: str = RULE_CENTERED

    def __post_init__(self) -> None:
        if not self.data:
            raise ValueError("at least one dataset path is required")
        if self.reps < 1:
            raise ValueError("repetitions must be at least 1")
        for s in self.strategies:
            Strategy(s)
        if self.c_r != "auto":
            float(self.c_r)


@dataclass
class ExperimentResult:
    rows: list[dict]
    summary: list[dict]
    per_round_path: Path | None
    summary_path: Path | None
    figure_paths: list[Path] = field(default_factory=list)
    failures: list[tuple[str, str]] = field(default_factory=list)


def resolve_costs(cfg: ExperimentConfig, ds: Dataset) -> CostParams:
    c_r = ds.gamma if cfg.c_r == "auto" else float(cfg.c_r)
    costs = CostParams(cfg.c_fp, cfg.c_fn, c_r)
    validate_costs(costs, ds.gamma)
    return costs


def record_row(dataset: str, strategy: str, reward_kind: str, rep: int, rec: RoundRecord) -> dict:
    return {
        "dataset": dataset,
        "strategy": strategy,
        "reward_kind": reward_kind,
        "rep": rep,
        "round": rec.round,
        "side": rec.side,
        "reward_AL": rec.reward_al,
        "reward_LR": rec.reward_lr,
        "tau": rec.tau,
        "test_cost": rec.test_cost,
        "cumulative_labels": rec.cumulative_labels,
    }


def dataset_header_line(ds: Dataset, costs: CostParams) -> str:
    return (
        f"# dataset={ds.name} n={ds.n} d={ds.d} gamma={ds.gamma!r}"
        f" c_fp={costs.c_fp!r} c_fn={costs.c_fn!r} c_r={costs.c_r!r}"
    )


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def per_round_csv_text(rows: list[dict], header_lines=()) -> str:
    buf = io.StringIO()
    for line in header_lines:
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PER_ROUND_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in PER_ROUND_COLUMNS])
    return buf.getvalue()


def summary_csv_text(summary: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for row in summary:
        writer.writerow(
            [
                row["strategy"],
                row["reward_kind"],
                str(row["round"]),
                f"{row['budget_pct']:g}",
                repr(row["mean_cost"]),
                repr(row["std_cost"]),
            ]
        )
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentResult:
    """Run every (dataset, strategy, repetition); emit reports and figures.

    A failing dataset is skipped and recorded, leaving the others
    untouched; callers turn a nonempty failure list into a nonzero exit.
    """
    rows: list[dict] = []
    header_lines: list[str] = []
    failures: list[tuple[str, str]] = []
    for path in cfg.data:
        try:
            ds = load_dataset(path)
            costs = resolve_costs(cfg, ds)
            header_lines.append(dataset_header_line(ds, costs))
            for strategy in cfg.strategies:
                for rep in range(cfg.reps):
                    loop = run_allocation(
                        ds,
                        strategy=strategy,
                        reward_kind=cfg.reward,
                        budget_frac=cfg.budget_frac,
                        round_frac=cfg.round_frac,
                        costs=costs,
                        seed=cfg.seed + rep,
                        cost_variant=cfg.cost_variant,
                        rejection_rule=cfg.rejection_rule,
                    )
                    rows.extend(
                        record_row(ds.name, strategy, cfg.reward, rep, rec) for rec in loop.history
                    )
        except Exception as exc:  # keep other datasets alive
            failures.append((str(path), f"{type(exc).__name__}: {exc}"))

    summary = aggregate(rows, cfg.round_frac) if rows else []
    result = ExperimentResult(rows, summary, None, None, failures=failures)
    if write and rows:
        out_dir = Path(cfg.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        per_round = out_dir / "per_round.csv"
        per_round.write_text(per_round_csv_text(rows, header_lines), encoding="utf-8")
        summary_path = out_dir / "summary.csv"
        summary_path.write_text(summary_csv_text(summary), encoding="utf-8")
        result = replace_paths(result, per_round, summary_path)
        if cfg.plots:
            from .figures import render_report_figures

            result.figure_paths = render_report_figures(rows, out_dir, cfg.round_frac)
    return result


def replace_paths(result: ExperimentResult, per_round: Path, summary: Path) -> ExperimentResult:
    result.per_round_path = per_round
    result.summary_path = summary
    return result


def parse_config_file(path: str | Path) -> dict:
    """Plain key=value config; '#' comments; lists are comma separated."""
    out: dict = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out
