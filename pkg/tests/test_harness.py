"""Experiment harness: report rows, CSV rendering, config, end-to-end runs."""

import numpy as np
import pytest

from labelbudget.allocation import run_allocation
from labelbudget.data import CostParams
from labelbudget.harness import (
    PER_ROUND_COLUMNS,
    SUMMARY_COLUMNS,
    ExperimentConfig,
    dataset_header_line,
    parse_config_file,
    per_round_csv_text,
    record_row,
    resolve_costs,
    run_experiment,
    summary_csv_text,
)
from labelbudget.synthetic import generate_synthetic
from labelbudget.data import write_dataset_csv


@pytest.fixture(scope="module")
def small_csv(tmp_path_factory):
    ds = generate_synthetic(80, 3, 0.1, seed=5, name="tiny")
    path = tmp_path_factory.mktemp("data") / "tiny.csv"
    write_dataset_csv(ds, path)
    return path


class TestRows:
    def test_record_row_columns(self):
        ds = generate_synthetic(80, 3, 0.1, seed=5)
        loop = run_allocation(ds, strategy="ballad", seed=0)
        row = record_row("tiny", "ballad", "entropy", 3, loop.history[0])
        assert tuple(row) == PER_ROUND_COLUMNS
        assert row["rep"] == 3
        assert row["round"] == 1
        assert row["side"] in ("AL", "LR")

    def test_header_line_contents(self):
        ds = generate_synthetic(80, 3, 0.1, seed=5, name="tiny")
        line = dataset_header_line(ds, CostParams(1.0, 2.0, 0.05))
        assert line.startswith("# dataset=tiny ")
        for token in ("n=80", "d=3", "c_fp=1.0", "c_fn=2.0", "c_r=0.05"):
            assert token in line

    def test_per_round_csv_repr_floats(self):
        """Float cells use repr, so parsing the text back is lossless."""
        rows = [dict.fromkeys(PER_ROUND_COLUMNS, 0)]
        rows[0].update(test_cost=0.1 + 0.2, tau=0.375, dataset="x", strategy="ballad",
                       reward_kind="entropy", side="AL")
        text = per_round_csv_text(rows)
        assert "0.30000000000000004" in text
        lines = text.strip().split("\n")
        assert lines[0] == ",".join(PER_ROUND_COLUMNS)

    def test_header_lines_prepended(self):
        rows = [dict.fromkeys(PER_ROUND_COLUMNS, 0)]
        text = per_round_csv_text(rows, header_lines=["# a", "# b"])
        assert text.startswith("# a\n# b\n")

    def test_summary_csv_columns(self):
        text = summary_csv_text(
            [{"strategy": "ballad", "reward_kind": "entropy", "round": 1,
              "budget_pct": 2.0, "mean_cost": 0.5, "std_cost": 0.0}]
        )
        lines = text.strip().split("\n")
        assert lines[0] == ",".join(SUMMARY_COLUMNS)
        assert lines[1].startswith("ballad,entropy,1,2,")


class TestConfig:
    def test_resolve_costs_auto_uses_gamma(self):
        ds = generate_synthetic(80, 3, 0.1, seed=5)
        cfg = ExperimentConfig(data=("x.csv",), c_r="auto")
        costs = resolve_costs(cfg, ds)
        assert costs.c_r == pytest.approx(ds.gamma)

    def test_resolve_costs_explicit(self):
        ds = generate_synthetic(80, 3, 0.1, seed=5)
        cfg = ExperimentConfig(data=("x.csv",), c_r=0.03, c_fp=2.0)
        costs = resolve_costs(cfg, ds)
        assert (costs.c_fp, costs.c_r) == (2.0, 0.03)

    def test_validation(self):
        with pytest.raises(ValueError):
            ExperimentConfig(data=())
        with pytest.raises(ValueError):
            ExperimentConfig(data=("x",), reps=0)
        with pytest.raises(ValueError):
            ExperimentConfig(data=("x",), strategies=("bandit",))

    def test_parse_config_file(self, tmp_path):
        p = tmp_path / "exp.cfg"
        p.write_text(
            "# comment line\n"
            "reps = 3\n"
            "seed=9\n"
            "reward = cosine\n"
            "\n"
            "out = /tmp/somewhere\n"
        )
        got = parse_config_file(p)
        assert got == {"reps": "3", "seed": "9", "reward": "cosine", "out": "/tmp/somewhere"}


class TestRunExperiment:
    def test_writes_reports_and_figures(self, small_csv, tmp_path):
        cfg = ExperimentConfig(data=(str(small_csv),), reps=2, out=str(tmp_path / "rep"))
        result = run_experiment(cfg)
        assert result.per_round_path.exists()
        assert result.summary_path.exists()
        assert result.failures == []
        names = {p.name for p in result.figure_paths}
        assert "fig_cost_tiny.png" in names
        assert "fig_reward_balance.png" in names
        for p in result.figure_paths:
            assert p.exists() and p.stat().st_size > 0

    def test_no_plots_flag(self, small_csv, tmp_path):
        cfg = ExperimentConfig(
            data=(str(small_csv),), reps=1, out=str(tmp_path / "rep2"), plots=False
        )
        result = run_experiment(cfg)
        assert result.figure_paths == []

    def test_row_counts(self, small_csv, tmp_path):
        cfg = ExperimentConfig(
            data=(str(small_csv),), strategies=("ballad",), reps=2,
            out=str(tmp_path / "rep3"), plots=False,
        )
        result = run_experiment(cfg)
        rounds = {r["round"] for r in result.rows}
        reps = {r["rep"] for r in result.rows}
        assert reps == {0, 1}
        assert len(result.rows) == 2 * len(rounds)
        assert len(result.summary) == len(rounds)

    def test_failures_isolated_per_dataset(self, small_csv, tmp_path):
        cfg = ExperimentConfig(
            data=("/nonexistent/nope.csv", str(small_csv)), reps=1,
            out=str(tmp_path / "rep4"), plots=False,
        )
        result = run_experiment(cfg)
        assert len(result.failures) == 1
        assert result.failures[0][0] == "/nonexistent/nope.csv"
        assert any(r["dataset"] == "tiny" for r in result.rows)

    def test_in_memory_run_skips_writing(self, small_csv):
        cfg = ExperimentConfig(data=(str(small_csv),), reps=1, plots=False)
        result = run_experiment(cfg, write=False)
        assert result.per_round_path is None
        assert result.rows
