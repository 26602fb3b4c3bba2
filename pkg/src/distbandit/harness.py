"""Monte-Carlo experiment harness: generators, trial loops, reports.

A run is fully described by an :class:`ExperimentConfig`; trial t of a run
with master seed s draws player j's rewards from stream (s, t, j), so the
same config always produces the same report, byte for byte, regardless of
how many worker processes execute the trials.
"""

from __future__ import annotations

import csv
import json
import math
import re
import time
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from joblib import Parallel, delayed

from .algorithms import ALGORITHM_NAMES, RunOutcome, run_algorithm
from .instances import (
    BanditInstance,
    gaps,
    hardness,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    require_unique_best,
)
from .rng import RngStream, TrialStreams, generator_stream


class ConfigError(ValueError):
    """The experiment configuration is unusable; nothing was run."""


# ---------------------------------------------------------------------------
# Instance generation

GENERATOR_SPECS = ("one-good", "uniform-grid", "lower-bound")


def lower_bound_instance(n: int, rng: RngStream) -> BanditInstance:
    """The hard instance for single-round collaboration: a random
    permutation of means 1/2 + 1/sqrt(n), 1/2 - 1/sqrt(n), and n-2 zeros.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    spread = 1.0 / math.sqrt(n)
    if 0.5 + spread > 1.0:
        raise ValueError(
            f"n={n} is too small: mean 1/2 + 1/sqrt(n) = {0.5 + spread} exceeds 1"
        )
    means = [0.5 + spread, 0.5 - spread] + [0.0] * (n - 2)
    return BanditInstance.from_means(rng.permuted(means), "bernoulli")


def generator(spec: str, *, reward: str = "bernoulli", rng: Optional[RngStream] = None) -> BanditInstance:
    """Build an instance from a generator spec string.

    Specs: ``one-good(n, p1, rest)``, ``uniform-grid(n, p_max, step)``,
    ``lower-bound(n)``.  Only lower-bound is randomized (it permutes the
    means with `rng`).
    """
    m = re.fullmatch(r"\s*([a-z-]+)\s*\(([^()]*)\)\s*", spec)
    if not m:
        raise ConfigError(f"malformed generator spec {spec!r}")
    name = m.group(1)
    args = [a.strip() for a in m.group(2).split(",")] if m.group(2).strip() else []
    try:
        if name == "one-good":
            n, p1, rest = int(args[0]), float(args[1]), float(args[2])
            return BanditInstance.from_means([p1] + [rest] * (n - 1), reward)
        if name == "uniform-grid":
            n, p_max, step = int(args[0]), float(args[1]), float(args[2])
            return BanditInstance.from_means([p_max - i * step for i in range(n)], reward)
        if name == "lower-bound":
            if rng is None:
                raise ConfigError("lower-bound generation needs a random stream")
            if reward != "bernoulli":
                raise ConfigError("lower-bound instances are bernoulli")
            return lower_bound_instance(int(args[0]), rng)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad generator spec {spec!r}: {exc}") from exc
    raise ConfigError(f"unknown generator {name!r}; choose from {', '.join(GENERATOR_SPECS)}")


# ---------------------------------------------------------------------------
# Budget formulas

BUDGET_MODES = ("eq3", "eq4", "hardness")


def budget_calculator(
    instance: BanditInstance, k: int, epsilon: float, mode: str, c_a: float = 1.0
) -> float:
    """Evaluate one of the sufficient-budget formulas for this instance.

    ``eq3`` is the per-player budget bound for exact best-arm runs,
    ``eq4`` the bound for accuracy `epsilon`, and ``hardness`` the plain
    hardness index.  Natural logarithms throughout; `c_a` is the serial
    explorer's guarantee constant.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if mode not in BUDGET_MODES:
        raise ValueError(f"unknown mode {mode!r}; choose from {', '.join(BUDGET_MODES)}")
    if mode == "hardness":
        return hardness(instance, epsilon)

    means = instance.means
    n = instance.n
    top = means.max()
    if mode == "eq3" or epsilon == 0:
        require_unique_best(instance)
    best = int(means.argmax())
    total = 0.0
    for i in range(n):
        if i == best:
            continue
        gap = top - means[i]
        if mode == "eq3":
            total += (1.0 / gap**2) * math.log(n / gap)
        else:
            g = max(gap, epsilon)
            total += (1.0 / g**2) * math.log(24.0 * n / g)
    scale = 24.0 if mode == "eq3" else 400.0
    return scale * c_a / math.sqrt(k) * total


# ---------------------------------------------------------------------------
# Experiment configuration


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a Monte-Carlo run.

    The instance may be given directly, as a file path, or as a generator
    spec (resolved once, with the reserved generator stream of the master
    seed).  `success` picks the per-trial criterion: "best-arm", or
    "eps-best" judged at `success_eps`.  Left empty, it defaults to the
    natural criterion of the algorithm: eps-best at twice the accuracy for
    one-round-pac, eps-best at the accuracy for the multi-round runs with
    epsilon > 0, best-arm otherwise.

    `jobs` and `keep_records` steer execution only and are not part of the
    config echo.
    """

    algorithm: str
    trials: int
    seed: int
    k: int = 1
    budget: Optional[int] = None
    epsilon: float = 0.0
    delta: float = 0.1
    rounds: Optional[int] = None
    base: str = "one-round-best"
    copies: Optional[int] = None
    instance: Optional[BanditInstance] = None
    instance_file: Optional[str] = None
    instance_spec: Optional[str] = None
    reward: str = "bernoulli"
    success: str = ""
    success_eps: Optional[float] = None
    jobs: int = 1
    keep_records: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        """Rebuild a config from a report's config echo; running it
        reproduces the report."""
        data = dict(data)
        instance = instance_from_dict(data.pop("instance"))
        source = data.pop("instance_source", None)
        cfg = cls(instance=instance, **data)
        cfg._source = source
        return cfg


@dataclass(frozen=True)
class _ResolvedRun:
    """Validated, picklable core of one experiment."""

    algorithm: str
    trials: int
    seed: int
    k: int
    budget: Optional[int]
    epsilon: float
    delta: float
    rounds: Optional[int]
    base: str
    copies: Optional[int]
    instance: BanditInstance
    instance_source: str
    success: str
    success_eps: Optional[float]

    def echo(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "trials": self.trials,
            "seed": self.seed,
            "k": self.k,
            "budget": self.budget,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "rounds": self.rounds,
            "base": self.base,
            "copies": self.copies,
            "instance": instance_to_dict(self.instance),
            "instance_source": self.instance_source,
            "success": self.success,
            "success_eps": self.success_eps,
        }


def _resolve_instance(config: ExperimentConfig) -> tuple[BanditInstance, str]:
    explicit = getattr(config, "_source", None)
    if config.instance is not None:
        return config.instance, explicit or "inline"
    if config.instance_file is not None:
        try:
            return load_instance(config.instance_file), str(config.instance_file)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot load instance file {config.instance_file}: {exc}") from exc
    if config.instance_spec is not None:
        inst = generator(
            config.instance_spec, reward=config.reward, rng=generator_stream(config.seed)
        )
        return inst, config.instance_spec
    raise ConfigError("no instance given (need instance, instance_file, or instance_spec)")


def _resolve(config: ExperimentConfig) -> tuple[_ResolvedRun, list[str]]:
    """Validate the whole configuration before any trial runs."""
    if config.algorithm not in ALGORITHM_NAMES:
        raise ConfigError(
            f"unknown algorithm {config.algorithm!r}; choose from {', '.join(ALGORITHM_NAMES)}"
        )
    if config.trials < 1:
        raise ConfigError("trials must be at least 1")
    if config.seed < 0:
        raise ConfigError("seed must be nonnegative")
    if config.k < 1:
        raise ConfigError("k must be at least 1")

    instance, source = _resolve_instance(config)
    algo = config.algorithm
    eps = config.epsilon
    warnings: list[str] = []

    def need_budget(minimum: int):
        if config.budget is None or config.budget < minimum:
            raise ConfigError(f"{algo} needs a per-player budget of at least {minimum}")

    if algo in ("one-round-best", "one-round-pac", "amplified"):
        need_budget(2)
    if algo in ("no-comm", "majority-vote", "full-comm"):
        need_budget(0)
    if algo == "one-round-pac" and not 0 < eps < 1:
        raise ConfigError("one-round-pac needs epsilon in (0, 1)")
    if algo in ("multi-round", "r-round") and not 0 < config.delta < 1:
        raise ConfigError(f"{algo} needs delta in (0, 1)")
    if algo == "multi-round" and eps < 0:
        raise ConfigError("multi-round needs epsilon >= 0")
    if algo == "r-round":
        if config.rounds is None or config.rounds < 1:
            raise ConfigError("r-round needs a round count of at least 1")
        if not 0 < eps < 1:
            raise ConfigError("r-round needs epsilon in (0, 1)")
    if algo == "amplified":
        if not 0 < config.delta < 1.0 / 3.0:
            raise ConfigError("amplified needs delta in (0, 1/3)")
        if config.base not in ("one-round-best", "one-round-pac"):
            raise ConfigError(f"unknown amplification base {config.base!r}")
        if config.base == "one-round-pac" and not 0 < eps < 1:
            raise ConfigError("amplified one-round-pac needs epsilon in (0, 1)")

    pac_like = algo == "one-round-pac" or (algo == "amplified" and config.base == "one-round-pac")
    success = config.success
    success_eps = config.success_eps
    if not success:
        if pac_like:
            success = "eps-best"
        elif algo in ("multi-round", "r-round") and eps > 0:
            success = "eps-best"
        else:
            success = "best-arm"
    if success == "eps-best" and success_eps is None:
        success_eps = 2.0 * eps if pac_like else eps
    if success == "best-arm":
        success_eps = None
        try:
            require_unique_best(instance)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    elif success == "eps-best":
        if success_eps is None or success_eps < 0:
            raise ConfigError("eps-best success needs a nonnegative accuracy")
    else:
        raise ConfigError(f"unknown success criterion {success!r}")

    needs_unique = algo in ("one-round-best",) or (algo == "multi-round" and eps == 0)
    if algo == "amplified" and config.base == "one-round-best":
        needs_unique = True
    if needs_unique:
        try:
            require_unique_best(instance)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    sqrt_k = math.sqrt(config.k)
    if algo in ("one-round-best",) or (algo == "amplified" and config.base == "one-round-best"):
        if not 6 <= sqrt_k <= instance.n:
            warnings.append(
                f"one-round-best guarantees assume 36 <= k <= n^2 (got k={config.k}, n={instance.n})"
            )
    if pac_like and not 24 <= sqrt_k <= instance.n:
        warnings.append(
            f"one-round-pac guarantees assume 576 <= k <= n^2 (got k={config.k}, n={instance.n})"
        )

    run = _ResolvedRun(
        algorithm=algo,
        trials=config.trials,
        seed=config.seed,
        k=config.k,
        budget=config.budget,
        epsilon=eps,
        delta=config.delta,
        rounds=config.rounds,
        base=config.base,
        copies=config.copies,
        instance=instance,
        instance_source=source,
        success=success,
        success_eps=success_eps,
    )
    return run, warnings


# ---------------------------------------------------------------------------
# Trial execution

#: Gap slack when judging eps-best success, so decimal means sitting exactly
#: on the accuracy boundary are not misjudged by float rounding.
_SUCCESS_SLACK = 1e-9

TRIAL_CSV_COLUMNS = ("trial", "chosen", "success", "pulls_max", "rounds", "values_sent")


def _trial_succeeded(run: _ResolvedRun, chosen: int, deltas: tuple[float, ...], best: int) -> bool:
    if run.success == "best-arm":
        return chosen == best
    return deltas[chosen - 1] <= run.success_eps + _SUCCESS_SLACK


def _execute_trial(run: _ResolvedRun, deltas, best, trial: int, trace=None):
    out = run_algorithm(
        run.algorithm,
        run.instance,
        TrialStreams(run.seed, trial),
        k=run.k,
        budget=run.budget,
        epsilon=run.epsilon,
        delta=run.delta,
        rounds=run.rounds,
        base=run.base,
        copies=run.copies,
        trace=trace,
    )
    return (
        trial,
        out.chosen,
        int(_trial_succeeded(run, out.chosen, deltas, best)),
        max(out.per_player_pulls),
        sum(out.per_player_pulls),
        out.comm.rounds,
        out.comm.values_sent,
        out.metadata.get("fallback_events", 0),
    )


@dataclass
class ExperimentReport:
    """Aggregated statistics of one Monte-Carlo run.

    The canonical JSON form (:meth:`to_json`) contains everything needed to
    reproduce the run and is byte-identical across repeats with the same
    seed; wall-clock time is therefore reported only on this object and in
    the human summary, never in the JSON document.
    """

    config: dict
    trials: int
    success_count: int
    success_rate: float
    success_se: float
    pulls_mean: float
    pulls_max: int
    rounds_mean: float
    values_sent_mean: float
    fallback_count: int
    warnings: list[str]
    records: Optional[list[tuple]] = None
    wall_clock_s: float = 0.0

    def to_json_dict(self) -> dict:
        doc = {
            "config": self.config,
            "trials": self.trials,
            "success_count": self.success_count,
            "success_rate": self.success_rate,
            "success_se": self.success_se,
            "pulls_mean": self.pulls_mean,
            "pulls_max": self.pulls_max,
            "rounds_mean": self.rounds_mean,
            "values_sent_mean": self.values_sent_mean,
            "fallback_count": self.fallback_count,
            "warnings": list(self.warnings),
        }
        if self.records is not None:
            doc["records"] = [list(r[:6]) for r in self.records]
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())


def run_trials(config: ExperimentConfig, *, trace=None) -> ExperimentReport:
    """Execute the configured trials and aggregate them into a report.

    Trials are independent given their derived streams, so they may run in
    parallel (`config.jobs`; 0 means one worker per CPU) with results
    identical to the sequential order.  `trace`, when given, receives every
    broadcast as (trial, broadcast) and forces sequential execution.
    """
    run, warnings = _resolve(config)
    profile = gaps(run.instance)
    deltas = profile.deltas
    best = run.instance.best_arm()

    start = time.perf_counter()
    jobs = config.jobs if config.jobs and config.jobs > 0 else None
    trials = range(1, run.trials + 1)
    if trace is not None or jobs == 1:
        rows = []
        for t in trials:
            cb = (lambda msg, _t=t: trace(_t, msg)) if trace is not None else None
            rows.append(_execute_trial(run, deltas, best, t, trace=cb))
    else:
        rows = Parallel(n_jobs=jobs or -1)(
            delayed(_execute_trial)(run, deltas, best, t) for t in trials
        )
    elapsed = time.perf_counter() - start

    rows.sort(key=lambda r: r[0])
    success_count = sum(r[2] for r in rows)
    rate = success_count / run.trials
    return ExperimentReport(
        config=run.echo(),
        trials=run.trials,
        success_count=success_count,
        success_rate=rate,
        success_se=math.sqrt(rate * (1.0 - rate) / run.trials),
        pulls_mean=sum(r[4] for r in rows) / (run.trials * run.k),
        pulls_max=max(r[3] for r in rows),
        rounds_mean=sum(r[5] for r in rows) / run.trials,
        values_sent_mean=sum(r[6] for r in rows) / run.trials,
        fallback_count=sum(r[7] for r in rows),
        warnings=warnings,
        records=rows if config.keep_records else None,
        wall_clock_s=elapsed,
    )


# ---------------------------------------------------------------------------
# CSV output

SWEEP_CSV_COLUMNS = (
    "axis",
    "value",
    "trials",
    "success_count",
    "success_rate",
    "success_se",
    "pulls_mean",
    "pulls_max",
    "rounds_mean",
    "values_sent_mean",
    "fallback_count",
)

SWEEP_AXES = ("k", "budget", "epsilon", "R")


def write_trials_csv(report: ExperimentReport, path) -> None:
    """One row per trial; requires the report to have kept its records."""
    if report.records is None:
        raise ConfigError("per-trial CSV needs a report with keep_records enabled")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIAL_CSV_COLUMNS)
        for row in report.records:
            writer.writerow(row[:6])


def run_sweep(
    config: ExperimentConfig, axis: str, values: Sequence, *, trace=None
) -> list[tuple[object, ExperimentReport]]:
    """Run one report per axis value, validating every value up front."""
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; choose from {', '.join(SWEEP_AXES)}")
    if not values:
        raise ConfigError("sweep needs at least one value")
    variants = []
    for value in values:
        variant = _with_axis(config, axis, value)
        _resolve(variant)
        variants.append((value, variant))
    return [(value, run_trials(variant, trace=trace)) for value, variant in variants]


def _with_axis(config: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    try:
        if axis == "k":
            return replace(config, k=int(value))
        if axis == "budget":
            return replace(config, budget=int(value))
        if axis == "epsilon":
            return replace(config, epsilon=float(value))
        return replace(config, rounds=int(value))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value {value!r} for sweep axis {axis}: {exc}") from exc


def write_sweep_csv(axis: str, rows: Sequence[tuple[object, ExperimentReport]], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_CSV_COLUMNS)
        for value, report in rows:
            writer.writerow(
                (
                    axis,
                    value,
                    report.trials,
                    report.success_count,
                    report.success_rate,
                    report.success_se,
                    report.pulls_mean,
                    report.pulls_max,
                    report.rounds_mean,
                    report.values_sent_mean,
                    report.fallback_count,
                )
            )
