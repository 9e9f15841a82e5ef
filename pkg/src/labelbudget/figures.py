"""Figure rendering for experiment reports: cost curves and reward balance."""

from __future__ import annotations

import re
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_SAVE_OPTS = {"dpi": 150, "metadata": {"Software": None}}  # keep bytes seed-stable


def _slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", name)


def render_report_figures(rows: list[dict], out_dir: str | Path, round_frac: float) -> list[Path]:
    """Write one cost-curve PNG per dataset plus a reward-balance histogram."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []

    datasets = sorted({row["dataset"] for row in rows})
    for ds_name in datasets:
        fig, ax = plt.subplots(figsize=(6, 4))
        strategies = sorted({row["strategy"] for row in rows if row["dataset"] == ds_name})
        for strategy in strategies:
            by_round: dict[int, list[float]] = {}
            for row in rows:
                if row["dataset"] == ds_name and row["strategy"] == strategy:
                    by_round.setdefault(int(row["round"]), []).append(float(row["test_cost"]))
            rounds = sorted(by_round)
            means = [sum(by_round[r]) / len(by_round[r]) for r in rounds]
            ax.plot(rounds, means, marker="o", markersize=3, label=strategy)
        ax.set_xlabel(f"round ({100 * round_frac:g}% of training labels each)")
        ax.set_ylabel("mean test cost")
        ax.set_title(ds_name)
        ax.legend()
        fig.tight_layout()
        path = out_dir / f"fig_cost_{_slug(ds_name)}.png"
        fig.savefig(path, **_SAVE_OPTS)
        plt.close(fig)
        paths.append(path)

    diffs = [
        float(row["reward_AL"]) - float(row["reward_LR"])
        for row in rows
        if row["strategy"] == "ballad" and int(row["round"]) >= 3
    ]
    if diffs:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist(diffs, bins=30, color="#4878a8", edgecolor="white")
        ax.axvline(0.0, color="black", linewidth=1)
        ax.set_xlabel("reward_AL - reward_LR at choice time")
        ax.set_ylabel("adaptive rounds")
        fig.tight_layout()
        path = out_dir / "fig_reward_balance.png"
        fig.savefig(path, **_SAVE_OPTS)
        plt.close(fig)
        paths.append(path)
    return paths
