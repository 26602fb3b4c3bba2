"""Serial exploration with a hard pull budget, via successive elimination.

The explorer sweeps the surviving arms, pulling each once per sweep, and
after sweep t discards every arm whose running mean sits more than twice
the confidence radius below the running leader.  It stops on its own
(gracefully) once a single arm survives, or once the radius is below half
the requested accuracy; if the pull cap is hit first it returns the
current empirical leader and reports the halt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .instances import BanditInstance, draw_reward_block0
from .rng import RngStream

#: Failure probability the elimination radius is tuned for.
ELIMINATION_CONFIDENCE = 1.0 / 3.0


def confidence_radius(sweep: int, subset_size: int) -> float:
    """Deviation radius after `sweep` pulls per arm of a `subset_size` set."""
    return math.sqrt(
        math.log(8.0 * subset_size * sweep * sweep / ELIMINATION_CONFIDENCE) / (2.0 * sweep)
    )


@dataclass(frozen=True)
class SerialBudget:
    """A hard cap on total pulls, plus the guarantee constant (reporting only)."""

    cap: int
    c_a: float = 2.0

    def __post_init__(self):
        if self.cap < 0:
            raise ValueError("budget cap must be nonnegative")
        if not self.c_a > 1.0:
            raise ValueError("guarantee constant must exceed 1")


@dataclass(frozen=True)
class ExploreOutcome:
    """Result of one exploration run.

    `graceful` distinguishes the explorer's own stopping rule from a halt
    forced by the budget cap.  `survivors` is the set still standing when
    the run ended; `chosen` is its empirical leader.
    """

    chosen: int
    graceful: bool
    pulls_used: int
    per_arm_pulls: dict[int, int]
    per_arm_means: dict[int, float]
    survivors: tuple[int, ...]
    sweeps: int


class _StreamSampler:
    """Direct sampling from an instance, outside any protocol run."""

    def __init__(self, instance: BanditInstance, rng: RngStream):
        self._instance = instance
        self._rng = rng

    def validate_arms(self, arms: np.ndarray) -> None:
        if arms[0] < 1 or arms[-1] > self._instance.n:
            raise ValueError("arm index out of range")

    def draw_block0(self, idx0: np.ndarray) -> np.ndarray:
        return draw_reward_block0(self._instance, idx0, self._rng)

    def commit(self, arms, counts, sums) -> None:
        pass


def run_elimination(sampler, arm_subset: Iterable[int], epsilon: float, cap: int) -> ExploreOutcome:
    """Core elimination loop over `arm_subset`, pulling through `sampler`.

    `sampler` must expose ``validate_arms`` (called once), ``draw_block0``
    (one reward per 0-based arm position), and ``commit`` (final per-arm
    accounting); the protocol's player context satisfies this, so the same
    loop runs standalone or inside a multi-player run with full pull
    accounting.  Within a sweep, arms are pulled in ascending index order;
    a sweep that would overshoot the cap is truncated and triggers no
    elimination.
    """
    arms = np.unique(np.asarray(list(arm_subset), dtype=int))
    if arms.size == 0:
        raise ValueError("arm subset must be nonempty")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if cap < 0:
        raise ValueError("budget cap must be nonnegative")
    sampler.validate_arms(arms)

    m = arms.size
    counts = np.zeros(m, dtype=np.int64)  # final per-arm pulls, written on exit from the live set
    sums = np.zeros(m, dtype=float)
    live = np.arange(m)  # positions into `arms`, always ascending
    live_idx0 = arms - 1  # 0-based positions of the live arms, kept in sync
    live_sums = np.zeros(m, dtype=float)  # compact: live arms all share the sweep count
    live_n = m
    half_eps = epsilon / 2.0
    log_const = math.log(8.0 * m / ELIMINATION_CONFIDENCE)
    pulls_used = 0
    sweep = 0
    partial = 0
    graceful = m == 1
    draw = sampler.draw_block0

    while not graceful:
        remaining = cap - pulls_used
        if remaining <= 0:
            break
        if remaining < live_n:
            live_sums[:remaining] += draw(live_idx0[:remaining])
            pulls_used += remaining
            partial = remaining
            break

        sweep += 1
        live_sums += draw(live_idx0)
        pulls_used += live_n

        radius = math.sqrt((log_const + 2.0 * math.log(sweep)) / (2.0 * sweep))
        # Elimination threshold on sums: identical to comparing means
        # against the leader mean minus twice the radius.
        cut = live_sums.max() - 2.0 * radius * sweep
        if live_sums.min() < cut:
            keep = live_sums >= cut
            dropped = live[~keep]
            counts[dropped] = sweep
            sums[dropped] = live_sums[~keep]
            live = live[keep]
            live_idx0 = live_idx0[keep]
            live_sums = live_sums[keep]
            live_n = live.size
        if live_n == 1:
            graceful = True
        elif epsilon > 0 and radius < half_eps:
            graceful = True

    counts[live] = sweep
    if partial:
        counts[live[:partial]] += 1
    sums[live] = live_sums[:live_n]

    chosen = _empirical_leader(arms, live, counts, sums)
    sampler.commit(arms, counts, sums)
    pulled = counts > 0
    return ExploreOutcome(
        chosen=chosen,
        graceful=graceful,
        pulls_used=pulls_used,
        per_arm_pulls=dict(zip(arms.tolist(), counts.tolist())),
        per_arm_means={
            a: s / c
            for a, c, s in zip(arms[pulled].tolist(), counts[pulled].tolist(), sums[pulled].tolist())
        },
        survivors=tuple(arms[live].tolist()),
        sweeps=sweep,
    )


def _empirical_leader(arms, live, counts, sums) -> int:
    """Highest running mean among surviving pulled arms, ties to the lowest
    index; with no pulls at all, the lowest-indexed survivor."""
    pulled = live[counts[live] > 0]
    if pulled.size == 0:
        return int(arms[live[0]])
    means = sums[pulled] / counts[pulled]
    return int(arms[pulled[int(np.argmax(means))]])


def successive_elimination(
    instance: BanditInstance,
    arm_subset: Iterable[int],
    epsilon: float,
    budget: SerialBudget | int,
    rng: RngStream,
) -> ExploreOutcome:
    """Explore `arm_subset` of `instance` under a hard pull cap.

    Returns the identified arm along with full pull accounting; see
    :func:`run_elimination` for the stopping rules.
    """
    cap = budget.cap if isinstance(budget, SerialBudget) else int(budget)
    if cap < 0:
        raise ValueError("budget cap must be nonnegative")
    return run_elimination(_StreamSampler(instance, rng), arm_subset, epsilon, cap)
