"""Command line front end: generate instances, run experiments, evaluate budgets.

Exit codes: 0 on success, 1 on internal errors, 2 on usage or
configuration errors.  Guarantee-range warnings (e.g. k too small for the
one-round vote guarantee) go to standard error and do not fail the run.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

from .harness import (
    ConfigError,
    ExperimentConfig,
    budget_calculator,
    generator,
    run_sweep,
    run_trials,
    write_sweep_csv,
    write_trials_csv,
)
from .instances import REWARD_KINDS, load_instance, save_instance
from .rng import generator_stream


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("instance", nargs="?", help="path to an instance JSON file")
    p.add_argument("--gen", metavar="SPEC", help="generator spec instead of a file, "
                   'e.g. "one-good(50,0.7,0.5)" or "lower-bound(64)"')
    p.add_argument("--reward", choices=REWARD_KINDS, default="bernoulli",
                   help="reward kind for generated instances (default: bernoulli)")


def _add_run_args(p: argparse.ArgumentParser) -> None:
    _add_instance_args(p)
    p.add_argument("--algo", required=True, help="algorithm selector")
    p.add_argument("--k", type=int, default=1, help="number of players (default: 1)")
    p.add_argument("--budget", type=int, help="per-player pull budget T")
    p.add_argument("--epsilon", type=float, default=0.0, help="accuracy (default: 0)")
    p.add_argument("--delta", type=float, default=0.1, help="failure probability (default: 0.1)")
    p.add_argument("--rounds", type=int, help="round count R for r-round")
    p.add_argument("--base", default="one-round-best",
                   choices=("one-round-best", "one-round-pac"),
                   help="base strategy for amplified runs")
    p.add_argument("--trials", type=int, default=100, help="Monte-Carlo trials (default: 100)")
    p.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    p.add_argument("--success", choices=("best-arm", "eps-best"), default="",
                   help="success criterion (default: the algorithm's natural one)")
    p.add_argument("--success-eps", type=float,
                   help="accuracy for eps-best success (default: 2*epsilon for "
                        "one-round-pac, epsilon otherwise)")
    p.add_argument("--jobs", type=int, default=0,
                   help="parallel trial workers; 0 = one per CPU (default)")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="write one CSV row per trial here")
    p.add_argument("--trace", help="write a JSON-lines broadcast trace here (forces --jobs 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distbandit",
        description="Simulate collaborative best-arm identification under limited communication.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    p_gen.add_argument("spec", help='generator spec, e.g. "uniform-grid(10,0.9,0.1)"')
    p_gen.add_argument("--seed", type=int, default=0, help="seed for randomized generators")
    p_gen.add_argument("--reward", choices=REWARD_KINDS, default="bernoulli")
    p_gen.add_argument("--out", required=True, help="output path")

    p_run = sub.add_parser("run", help="run a Monte-Carlo experiment")
    _add_run_args(p_run)

    p_sweep = sub.add_parser("sweep", help="run an experiment per value of one axis")
    _add_run_args(p_sweep)
    p_sweep.add_argument("--axis", required=True, choices=("k", "budget", "epsilon", "R"))
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated axis values, e.g. 36,64,144")

    p_budget = sub.add_parser("budget", help="evaluate a sufficient-budget formula")
    _add_instance_args(p_budget)
    p_budget.add_argument("--k", type=int, default=1)
    p_budget.add_argument("--epsilon", type=float, default=0.0)
    p_budget.add_argument("--mode", required=True, choices=("eq3", "eq4", "hardness"))
    p_budget.add_argument("--c-a", type=float, default=1.0, dest="c_a",
                          help="serial guarantee constant (default: 1)")
    p_budget.add_argument("--seed", type=int, default=0)

    return parser


def _config_from_args(args) -> ExperimentConfig:
    if bool(args.instance) == bool(args.gen):
        raise ConfigError("give exactly one of an instance file or --gen SPEC")
    return ExperimentConfig(
        algorithm=args.algo,
        trials=args.trials,
        seed=args.seed,
        k=args.k,
        budget=args.budget,
        epsilon=args.epsilon,
        delta=args.delta,
        rounds=args.rounds,
        base=args.base,
        instance_file=args.instance,
        instance_spec=args.gen,
        reward=args.reward,
        success=args.success,
        success_eps=args.success_eps,
        jobs=1 if args.trace else args.jobs,
        keep_records=bool(args.csv),
    )


def _print_warnings(warnings) -> None:
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)


def _summary_line(report) -> str:
    cfg = report.config
    return (
        f"algo={cfg['algorithm']} k={cfg['k']} trials={report.trials} "
        f"success={report.success_count}/{report.trials} rate={report.success_rate:.4f} "
        f"se={report.success_se:.4f} pulls_mean={report.pulls_mean:.1f} "
        f"pulls_max={report.pulls_max} rounds_mean={report.rounds_mean:.2f} "
        f"values_mean={report.values_sent_mean:.1f} fallbacks={report.fallback_count} "
        f"wall={report.wall_clock_s:.2f}s"
    )


def _cmd_gen(args) -> int:
    instance = generator(args.spec, reward=args.reward, rng=generator_stream(args.seed))
    save_instance(instance, args.out)
    print(f"wrote {args.out} (n={instance.n}, reward={instance.reward_kind})")
    return 0


def _open_trace(path):
    fh = open(path, "w", encoding="utf-8")

    def write(trial, msg):
        fh.write(json.dumps({
            "trial": trial,
            "round": msg.round,
            "player": msg.player,
            "payload": [list(pair) for pair in msg.payload],
        }, sort_keys=True))
        fh.write("\n")

    return fh, write


def _cmd_run(args) -> int:
    config = _config_from_args(args)
    trace_fh = trace_cb = None
    if args.trace:
        trace_fh, trace_cb = _open_trace(args.trace)
    try:
        report = run_trials(config, trace=trace_cb)
    finally:
        if trace_fh:
            trace_fh.close()
    _print_warnings(report.warnings)
    if args.out:
        report.save(args.out)
    if args.csv:
        write_trials_csv(report, args.csv)
    print(_summary_line(report))
    return 0


def _cmd_sweep(args) -> int:
    config = _config_from_args(args)
    raw_values = [v for v in (s.strip() for s in args.values.split(",")) if v]
    rows = run_sweep(config, args.axis, raw_values)
    if args.csv:
        write_sweep_csv(args.axis, rows, args.csv)
    for value, report in rows:
        _print_warnings(report.warnings)
        print(f"{args.axis}={value} {_summary_line(report)}")
    return 0


def _cmd_budget(args) -> int:
    if bool(args.instance) == bool(args.gen):
        raise ConfigError("give exactly one of an instance file or --gen SPEC")
    if args.instance:
        instance = load_instance(args.instance)
    else:
        instance = generator(args.gen, reward=args.reward, rng=generator_stream(args.seed))
    value = budget_calculator(instance, args.k, args.epsilon, args.mode, args.c_a)
    print(value)
    return 0


_COMMANDS = {"gen": _cmd_gen, "run": _cmd_run, "sweep": _cmd_sweep, "budget": _cmd_budget}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        return 1


def entry() -> None:
    sys.exit(main())
