"""Command-line entry points: synth, run, serve."""

from __future__ import annotations

import argparse
import sys

from .allocation import Strategy
from .data import write_dataset_csv
from .evaluation import CONDITIONAL, PER_EXAMPLE
from .harness import ALL_STRATEGIES, ExperimentConfig, parse_config_file, run_experiment
from .synthetic import generate_synthetic

_STRATEGY_CHOICES = list(ALL_STRATEGIES) + ["all"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="labelbudget",
        description="Budgeted label allocation between a detector and its reject option.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="generate a synthetic benchmark CSV")
    synth.add_argument("--n", type=int, required=True)
    synth.add_argument("--d", type=int, required=True)
    synth.add_argument("--gamma", type=float, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True)

    run = sub.add_parser("run", help="run allocation experiments over CSV datasets")
    run.add_argument("--config", help="key=value config file; flags override it")
    run.add_argument("--data", action="append", help="dataset CSV path (repeatable)")
    run.add_argument("--strategy", choices=_STRATEGY_CHOICES)
    run.add_argument("--reward", choices=["entropy", "cosine"])
    run.add_argument("--budget-frac", type=float)
    run.add_argument("--round-frac", type=float)
    run.add_argument("--reps", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--cfp", type=float)
    run.add_argument("--cfn", type=float)
    run.add_argument("--cr", help="rejection cost, or 'auto' for gamma")
    run.add_argument("--cost-variant", choices=[PER_EXAMPLE, CONDITIONAL])
    run.add_argument("--out")
    run.add_argument("--no-plots", action="store_true", help="skip figure rendering")

    serve = sub.add_parser("serve", help="start the labeling session service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--ui-dir", help="static frontend directory to mount at /")
    return parser


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    file_cfg = parse_config_file(args.config) if args.config else {}

    def pick(flag, key, cast, default):
        if flag is not None:
            return flag
        if key in file_cfg:
            return cast(file_cfg[key])
        return default

    data = args.data or (
        tuple(s.strip() for s in file_cfg["data"].split(",") if s.strip()) if "data" in file_cfg else ()
    )
    strategy = pick(args.strategy, "strategy", str, "all")
    strategies = ALL_STRATEGIES if strategy == "all" else (strategy,)
    if args.no_plots:
        plots = False
    else:
        plots = pick(None, "plots", lambda s: s.lower() != "false", True)
    cr = args.cr if args.cr is not None else file_cfg.get("c_r", "auto")
    return ExperimentConfig(
        data=tuple(data),
        strategies=tuple(Strategy(s).value for s in strategies),
        reward=pick(args.reward, "reward", str, "entropy"),
        budget_frac=pick(args.budget_frac, "budget_frac", float, 0.30),
        round_frac=pick(args.round_frac, "round_frac", float, 0.02),
        reps=pick(args.reps, "reps", int, 10),
        seed=pick(args.seed, "seed", int, 0),
        c_fp=pick(args.cfp, "c_fp", float, 1.0),
        c_fn=pick(args.cfn, "c_fn", float, 1.0),
        c_r=cr if cr == "auto" else float(cr),
        cost_variant=pick(args.cost_variant, "cost_variant", str, PER_EXAMPLE),
        out=pick(args.out, "out", str, "reports"),
        plots=bool(plots),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "synth":
        ds = generate_synthetic(args.n, args.d, args.gamma, args.seed)
        path = write_dataset_csv(ds, args.out)
        print(f"wrote {ds.n} x {ds.d} dataset (gamma={ds.gamma:.4g}) to {path}")
        return 0

    if args.command == "run":
        cfg = _experiment_config(args)
        result = run_experiment(cfg)
        if result.per_round_path:
            print(f"per-round report: {result.per_round_path}")
            print(f"summary report:   {result.summary_path}")
        for fig in result.figure_paths:
            print(f"figure:           {fig}")
        if result.failures:
            for path, message in result.failures:
                print(f"FAILED {path}: {message}", file=sys.stderr)
            return 1
        return 0

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(ui_dir=args.ui_dir), host=args.host, port=args.port)
        return 0

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
