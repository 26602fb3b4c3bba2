"""Bandit instances: arm means, reward sampling, gaps, and the hardness index.

Arms are numbered 1..n.  Means are never assumed sorted; anything that
needs "the best arm" computes it, and tasks that require a unique best arm
(accuracy 0) validate that explicitly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import isfinite
from typing import Iterable, Sequence

import numpy as np

from .rng import RngStream

REWARD_KINDS = ("bernoulli", "deterministic")


@dataclass(frozen=True)
class ArmSpec:
    """One arm, described by its mean reward in [0, 1]."""

    mean: float

    def __post_init__(self):
        if not (isfinite(self.mean) and 0.0 <= self.mean <= 1.0):
            raise ValueError(f"arm mean must lie in [0, 1], got {self.mean}")


@dataclass(frozen=True)
class BanditInstance:
    """An immutable set of at least two arms with a common reward kind.

    ``bernoulli`` arms pay 1 with probability equal to their mean, else 0.
    ``deterministic`` arms always pay their mean exactly; they exist so
    that tests can force outcomes with zero variance.
    """

    arms: tuple[ArmSpec, ...]
    reward_kind: str = "bernoulli"

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(self.arms))
        if len(self.arms) < 2:
            raise ValueError("an instance needs at least 2 arms")
        if self.reward_kind not in REWARD_KINDS:
            raise ValueError(f"unknown reward kind {self.reward_kind!r}")

    @classmethod
    def from_means(cls, means: Iterable[float], reward_kind: str = "bernoulli") -> "BanditInstance":
        return cls(tuple(ArmSpec(float(m)) for m in means), reward_kind)

    @cached_property
    def means(self) -> np.ndarray:
        arr = np.array([a.mean for a in self.arms], dtype=float)
        arr.flags.writeable = False
        return arr

    @property
    def n(self) -> int:
        return len(self.arms)

    def mean(self, arm: int) -> float:
        self._check_arm(arm)
        return self.arms[arm - 1].mean

    def best_arm(self) -> int:
        """Lowest-indexed arm with the maximal mean."""
        return int(np.argmax(self.means)) + 1

    def _check_arm(self, arm: int) -> None:
        if not 1 <= arm <= self.n:
            raise ValueError(f"arm index {arm} out of range 1..{self.n}")


@dataclass(frozen=True)
class GapProfile:
    """Per-arm suboptimality gaps of one instance.

    ``deltas[i-1]`` is the distance from arm i's mean to the maximal mean;
    it is zero exactly for maximal-mean arms.
    """

    deltas: tuple[float, ...]

    def truncated(self, epsilon: float) -> tuple[float, ...]:
        """Gaps floored at `epsilon` (every entry is at least epsilon)."""
        if epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        return tuple(max(d, epsilon) for d in self.deltas)

    @property
    def min_gap(self) -> float:
        """The smallest strictly positive gap."""
        positive = [d for d in self.deltas if d > 0.0]
        if not positive:
            raise ValueError("all arms share the maximal mean; no positive gap exists")
        return min(positive)


def gaps(instance: BanditInstance) -> GapProfile:
    """Gap of every arm against the maximal mean (arms need not be sorted)."""
    top = float(instance.means.max())
    return GapProfile(tuple(top - m for m in instance.means.tolist()))


def require_unique_best(instance: BanditInstance) -> int:
    """Validate that the maximal mean is held by exactly one arm.

    Best-arm tasks (accuracy 0) are undefined under ties; callers that are
    configured with epsilon = 0 run this check before sampling anything.
    Returns the best arm index.
    """
    means = instance.means
    top = means.max()
    if int((means == top).sum()) != 1:
        raise ValueError(
            f"H_0 undefined (best arm is tied): {int((means == top).sum())} arms share the maximal mean {top}"
        )
    return int(np.argmax(means)) + 1


def hardness(instance: BanditInstance, epsilon: float) -> float:
    """Sample-complexity index H_eps: sum of 1/gap^2 over all non-best arms.

    Gaps are truncated below at `epsilon`.  Exactly one maximal-mean arm is
    excluded from the sum; for epsilon = 0 the maximum must be unique.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    means = instance.means
    top = means.max()
    if epsilon == 0:
        require_unique_best(instance)
    best = int(np.argmax(means))
    trunc = np.maximum(top - means, epsilon)
    others = np.arange(instance.n) != best
    return float(np.sum(1.0 / trunc[others] ** 2))


# ---------------------------------------------------------------------------
# Reward sampling


def draw_reward(instance: BanditInstance, arm: int, rng: RngStream) -> float:
    """One reward sample for `arm`; advances the stream by exactly one step."""
    instance._check_arm(arm)
    u = rng.uniform()
    p = instance.arms[arm - 1].mean
    if instance.reward_kind == "deterministic":
        return p
    return 1.0 if u < p else 0.0


def draw_reward_block(
    instance: BanditInstance, arms: np.ndarray, rng: RngStream, *, checked: bool = False
) -> np.ndarray:
    """One reward per listed arm.

    For bernoulli instances this consumes exactly ``len(arms)`` uniform
    steps, matching a sequence of single draws; deterministic instances
    consume no randomness.  `checked` skips the index validation for
    callers that already validated the arm set.
    """
    arms = np.asarray(arms, dtype=int)
    if not checked and arms.size and (arms.min() < 1 or arms.max() > instance.n):
        raise ValueError("arm index out of range")
    p = instance.means[arms - 1]
    if instance.reward_kind == "deterministic":
        return p.copy()
    return (rng.uniform_block(arms.size) < p).astype(float)


def draw_reward_sum(instance: BanditInstance, arm: int, count: int, rng: RngStream) -> float:
    """Sum of `count` reward samples of one arm, drawn in bulk.

    Bernoulli sums are sampled binomially (exactly the distribution of
    `count` independent pulls); deterministic sums need no randomness.
    """
    instance._check_arm(arm)
    if count < 0:
        raise ValueError("count must be nonnegative")
    p = instance.arms[arm - 1].mean
    if instance.reward_kind == "deterministic":
        return count * p
    return float(rng.binomial(count, p))


def draw_reward_block0(instance: BanditInstance, idx0: np.ndarray, rng: RngStream) -> np.ndarray:
    """Hot-path variant of :func:`draw_reward_block`: takes 0-based arm
    positions that the caller already validated, and may return a read-only
    view for deterministic instances."""
    p = instance.means[idx0]
    if instance.reward_kind == "deterministic":
        return p
    return rng.uniform_block(idx0.size) < p


def draw_reward_sum_block(
    instance: BanditInstance, arms: np.ndarray, count: int, rng: RngStream, *, checked: bool = False
) -> np.ndarray:
    """Per-arm sums of `count` reward samples for every listed arm."""
    arms = np.asarray(arms, dtype=int)
    if not checked and arms.size and (arms.min() < 1 or arms.max() > instance.n):
        raise ValueError("arm index out of range")
    if count < 0:
        raise ValueError("count must be nonnegative")
    p = instance.means[arms - 1]
    if instance.reward_kind == "deterministic":
        return count * p
    if count == 0:
        return np.zeros(arms.size)
    return rng.binomial_block(count, p)


# ---------------------------------------------------------------------------
# Instance files: {"reward": "bernoulli"|"deterministic", "means": [...]}


def instance_to_dict(instance: BanditInstance) -> dict:
    return {"reward": instance.reward_kind, "means": [a.mean for a in instance.arms]}


def instance_from_dict(data: dict) -> BanditInstance:
    if not isinstance(data, dict) or set(data) != {"reward", "means"}:
        raise ValueError('instance object must have exactly the keys "reward" and "means"')
    return BanditInstance.from_means(data["means"], data["reward"])


def save_instance(instance: BanditInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(instance), fh)
        fh.write("\n")


def load_instance(path) -> BanditInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return instance_from_dict(json.load(fh))
