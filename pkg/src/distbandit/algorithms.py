"""Collaborative exploration strategies and baselines over the protocol.

Every strategy here produces a :class:`RunOutcome`: the collectively
selected arm, each player's committed arm, communication statistics, and
per-player pull totals.  Tie-breaking is the lowest arm index everywhere,
so replays are deterministic.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .instances import BanditInstance, require_unique_best
from .protocol import (
    Broadcast,
    CommStats,
    Player,
    PlayerContext,
    ProtocolViolation,
    PullLedger,
    run_synchronous,
)
from .rng import RngStream, TrialStreams
from .serial import run_elimination

ALGORITHM_NAMES = (
    "one-round-best",
    "one-round-pac",
    "amplified",
    "multi-round",
    "r-round",
    "no-comm",
    "majority-vote",
    "full-comm",
)


@dataclass(frozen=True)
class RunOutcome:
    """One run of one strategy: collective choice, votes, accounting."""

    chosen: int
    per_player_choices: tuple[int, ...]
    comm: CommStats
    per_player_pulls: tuple[int, ...]
    metadata: dict

    def __post_init__(self):
        if self.chosen not in set(self.per_player_choices):
            raise ProtocolViolation(
                f"selected arm {self.chosen} is outside the players' committed arms"
            )


def plurality(votes: Sequence[int]) -> int:
    """The most frequent value; ties go to the lowest arm index."""
    if not votes:
        raise ValueError("no votes to aggregate")
    counts = Counter(votes)
    return min(counts, key=lambda arm: (-counts[arm], arm))


class VoteBoard:
    """Aggregated single-round votes: supporter counts and reported means.

    Each player contributes one (arm, mean) pair; the board pools them and
    answers the two selection rules used by the one-round strategies.
    """

    def __init__(self, k: int, exploit_pulls: int, votes: dict[int, int], means: dict[int, list[float]]):
        if sum(votes.values()) != k:
            raise ProtocolViolation(
                f"vote conservation violated: {sum(votes.values())} votes from {k} players"
            )
        self.k = k
        self.exploit_pulls = exploit_pulls
        self._votes = dict(votes)
        self._means = {arm: list(vals) for arm, vals in means.items()}

    @classmethod
    def from_broadcasts(cls, broadcasts: Sequence[Broadcast], k: int, exploit_pulls: int) -> "VoteBoard":
        votes: dict[int, int] = {}
        means: dict[int, list[float]] = {}
        for msg in broadcasts:
            if len(msg.payload) != 1:
                raise ProtocolViolation(
                    f"player {msg.player} sent {len(msg.payload)} pairs in a one-vote round"
                )
            arm, value = msg.payload[0]
            if value is None:
                raise ProtocolViolation(f"player {msg.player} omitted its observed mean")
            votes[arm] = votes.get(arm, 0) + 1
            means.setdefault(arm, []).append(value)
        return cls(k, exploit_pulls, votes, means)

    def vote_count(self, arm: int) -> int:
        return self._votes.get(arm, 0)

    def samples(self, arm: int) -> int:
        """Total second-phase samples backing `arm` across its supporters."""
        return self.vote_count(arm) * self.exploit_pulls

    def pooled_mean(self, arm: int) -> float:
        vals = self._means[arm]
        return sum(vals) / len(vals)

    def eligible_by_votes(self, threshold: float) -> list[int]:
        """Arms backed by strictly more than `threshold` players."""
        return sorted(arm for arm, c in self._votes.items() if c > threshold)

    def eligible_by_samples(self, threshold: float) -> list[int]:
        """Arms backed by at least `threshold` second-phase samples."""
        return sorted(arm for arm in self._votes if self.samples(arm) >= threshold)

    def most_voted(self) -> int:
        return min(self._votes, key=lambda arm: (-self._votes[arm], arm))

    def _argmax_pooled(self, arms: Sequence[int]) -> int:
        return min(arms, key=lambda arm: (-self.pooled_mean(arm), arm))

    def select_by_votes(self, threshold: float) -> tuple[int, bool]:
        """Highest pooled mean among well-supported arms; falls back to the
        most voted arm when no arm clears the threshold."""
        eligible = self.eligible_by_votes(threshold)
        if eligible:
            return self._argmax_pooled(eligible), False
        return self.most_voted(), True

    def select_by_samples(self, threshold: float) -> tuple[int, bool]:
        """Highest pooled mean among well-sampled arms; falls back to the
        most sampled (equivalently most voted) arm."""
        eligible = self.eligible_by_samples(threshold)
        if eligible:
            return self._argmax_pooled(eligible), False
        return self.most_voted(), True


# ---------------------------------------------------------------------------
# One-round strategies


def subset_size(n: int, k: int, scale: float) -> int:
    """Size of each player's random arm subset, capped at n."""
    return min(n, math.ceil(scale * n / math.sqrt(k)))


class _OneRoundPlayer(Player):
    """Explore a random subset, exploit the local pick, vote once."""

    def __init__(self, k: int, budget: int, epsilon: float, size: int):
        self._k = k
        self._budget = budget
        self._epsilon = epsilon
        self._size = size
        self._n = None
        self.vote: Optional[int] = None
        self.exploit_mean: Optional[float] = None
        self.final: Optional[int] = None
        self.fallback = False

    def local_phase(self, ctx: PlayerContext):
        self._n = ctx.num_arms
        arms = ctx.rng.subset(ctx.num_arms, self._size)
        explore = run_elimination(ctx, arms, self._epsilon, self._budget // 2)
        self.vote = explore.chosen
        exploit_pulls = (self._budget + 1) // 2
        total = ctx.pull_repeat(self.vote, exploit_pulls)
        self.exploit_mean = total / exploit_pulls
        return ((self.vote, self.exploit_mean),)

    def receive(self, broadcasts):
        board = VoteBoard.from_broadcasts(broadcasts, self._k, (self._budget + 1) // 2)
        if self._epsilon == 0:
            self.final, self.fallback = board.select_by_votes(math.sqrt(self._k))
        else:
            threshold = math.log(12.0 * self._n) / self._epsilon**2
            self.final, self.fallback = board.select_by_samples(threshold)
        return False

    def answer(self) -> int:
        return self.final


def _check_positive_int(name: str, value, minimum: int) -> int:
    if value is None or int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _one_round(
    instance: BanditInstance,
    k: int,
    budget: int,
    stream_list: Sequence[RngStream],
    *,
    epsilon: float,
    scale: float,
    name: str,
    warnings: list[str],
    trace=None,
) -> RunOutcome:
    k = _check_positive_int("k", k, 1)
    budget = _check_positive_int("budget", budget, 2)
    size = subset_size(instance.n, k, scale)
    players = [_OneRoundPlayer(k, budget, epsilon, size) for _ in range(k)]
    answers, comm, ledger = run_synchronous(
        instance, players, stream_list, budgets=budget, max_rounds=1, trace=trace
    )
    if comm.rounds != 1 or len(set(answers)) != 1:
        raise ProtocolViolation(f"{name} must agree in exactly one round")
    metadata = {
        "algorithm": name,
        "k": k,
        "budget": budget,
        "epsilon": epsilon,
        "subset_size": size,
        "fallback_events": int(players[0].fallback),
        "warnings": list(warnings),
    }
    return RunOutcome(
        chosen=answers[0],
        per_player_choices=tuple(p.vote for p in players),
        comm=comm,
        per_player_pulls=ledger.per_player_totals(),
        metadata=metadata,
    )


def one_round_best_arm(
    instance: BanditInstance, k: int, budget: int, streams: TrialStreams, *, trace=None
) -> RunOutcome:
    """Single-broadcast best-arm identification.

    Each player explores a random subset of about 6n/sqrt(k) arms with half
    its budget, spends the other half sampling its pick, and broadcasts the
    pick with its observed mean.  The collective output is the highest
    pooled mean among arms backed by more than sqrt(k) players; if no arm
    is that popular, the most voted arm is output and the fallback is
    recorded.
    """
    k = _check_positive_int("k", k, 1)
    require_unique_best(instance)
    warnings = []
    if not 6 <= math.sqrt(k) <= instance.n:
        warnings.append(
            f"one-round-best guarantees assume 36 <= k <= n^2 (got k={k}, n={instance.n})"
        )
    return _one_round(
        instance,
        k,
        budget,
        streams.players(k),
        epsilon=0.0,
        scale=6.0,
        name="one-round-best",
        warnings=warnings,
        trace=trace,
    )


def one_round_pac(
    instance: BanditInstance,
    k: int,
    budget: int,
    epsilon: float,
    streams: TrialStreams,
    *,
    trace=None,
) -> RunOutcome:
    """Single-broadcast search for a near-optimal arm.

    Like :func:`one_round_best_arm` with subsets of about 12n/sqrt(k) arms
    and accuracy `epsilon` in the explore phase; the collective output is
    the highest pooled mean among arms whose supporters pooled at least
    ln(12n)/epsilon^2 second-phase samples.
    """
    k = _check_positive_int("k", k, 1)
    if not 0 < epsilon < 1:
        raise ValueError(
            "one-round-pac needs epsilon in (0, 1); use one-round-best for exact identification"
        )
    warnings = []
    if not 24 <= math.sqrt(k) <= instance.n:
        warnings.append(
            f"one-round-pac guarantees assume 576 <= k <= n^2 (got k={k}, n={instance.n})"
        )
    return _one_round(
        instance,
        k,
        budget,
        streams.players(k),
        epsilon=epsilon,
        scale=12.0,
        name="one-round-pac",
        warnings=warnings,
        trace=trace,
    )


def amplification_copies(delta: float, scale: float = 18.0) -> int:
    """Independent repetitions needed to push failure probability to delta."""
    if not 0 < delta < 1.0 / 3.0:
        raise ValueError("delta must lie in (0, 1/3); below 1/3 no amplification is needed")
    return math.ceil(scale * math.log(1.0 / delta))


def amplify(
    instance: BanditInstance,
    k: int,
    total_budget: int,
    delta: float,
    streams: TrialStreams,
    *,
    base: str = "one-round-best",
    epsilon: float = 0.0,
    copies: Optional[int] = None,
    repetition_scale: float = 18.0,
    trace=None,
) -> RunOutcome:
    """Majority vote over independent copies of a one-round strategy.

    The per-player budget is split evenly across the copies, and every
    copy's vote travels in the same single physical broadcast per player
    (2 values per copy), so the whole amplified run still costs one
    communication round.  The output is the plurality winner of the
    copies' collective outputs.  Copies draw sequentially from each
    player's single stream, which keeps them independent.
    """
    k = _check_positive_int("k", k, 1)
    total_budget = _check_positive_int("total_budget", total_budget, 2)
    m = copies if copies is not None else amplification_copies(delta, repetition_scale)
    m = _check_positive_int("copies", m, 1)
    per_copy = total_budget // m
    if per_copy < 2:
        raise ValueError(f"total budget {total_budget} is too small for {m} copies")

    if base == "one-round-best":
        require_unique_best(instance)
        scale, eps = 6.0, 0.0
    elif base == "one-round-pac":
        if not 0 < epsilon < 1:
            raise ValueError("amplified one-round-pac needs epsilon in (0, 1)")
        scale, eps = 12.0, epsilon
    else:
        raise ValueError(f"unknown base strategy {base!r}")

    stream_list = streams.players(k)
    copy_outcomes = [
        _one_round(
            instance,
            k,
            per_copy,
            stream_list,
            epsilon=eps,
            scale=scale,
            name=base,
            warnings=[],
            trace=trace,
        )
        for _ in range(m)
    ]

    copy_choices = [out.chosen for out in copy_outcomes]
    chosen = plurality(copy_choices)
    pulls = tuple(
        sum(out.per_player_pulls[j] for out in copy_outcomes) for j in range(k)
    )
    comm = CommStats(
        rounds=1,
        values_sent=sum(out.comm.values_sent for out in copy_outcomes),
        values_per_player_max=2 * m,
    )
    metadata = {
        "algorithm": "amplified",
        "base": base,
        "k": k,
        "budget": total_budget,
        "per_copy_budget": per_copy,
        "copies": m,
        "delta": delta,
        "epsilon": eps,
        "copy_choices": copy_choices,
        "fallback_events": sum(out.metadata["fallback_events"] for out in copy_outcomes),
        "warnings": [],
    }
    return RunOutcome(
        chosen=chosen,
        per_player_choices=(chosen,) * k,
        comm=comm,
        per_player_pulls=pulls,
        metadata=metadata,
    )


# ---------------------------------------------------------------------------
# Multi-round elimination


def cumulative_quota(k: int, level: float, round_index: int, n: int, delta: float) -> int:
    """Cumulative per-arm pulls each player owes by the given round."""
    return math.ceil(
        (2.0 / (k * level * level)) * math.log(4.0 * n * round_index * round_index / delta)
    )


def _pooled_survivor_means(broadcasts, survivors: np.ndarray, k: int) -> np.ndarray:
    """Average of every player's reported means, aligned on the survivor set."""
    if any(msg.payload_arms.size != survivors.size for msg in broadcasts):
        raise ProtocolViolation("a player reported a wrong-sized survivor list")
    arms_matrix = np.stack([msg.payload_arms for msg in broadcasts])
    if (arms_matrix != survivors).any():
        raise ProtocolViolation("a player reported a different survivor set")
    pooled = np.stack([msg.payload_values for msg in broadcasts]).mean(axis=0)
    if np.isnan(pooled).any():
        raise ProtocolViolation("a player omitted a mean for a surviving arm")
    return pooled


class _EliminationPlayer(Player):
    """Pull all survivors up to the round quota, share means, shrink the set."""

    def __init__(self, num_arms: int, k: int, delta: float, level_of, should_stop):
        self._n = num_arms
        self._k = k
        self._delta = delta
        self._level_of = level_of
        self._should_stop = should_stop
        self.survivors = np.arange(1, num_arms + 1)
        self._sums = np.zeros(num_arms)
        self._counts = np.zeros(num_arms, dtype=np.int64)
        self._round = 0
        self._quota = 0
        self._level = None
        self._done = False
        self.levels: list[float] = []
        self.survivor_history: list[int] = []

    def local_phase(self, ctx: PlayerContext):
        if self._done:
            return None
        r = self._round + 1
        level = self._level_of(r)
        quota = cumulative_quota(self._k, level, r, self._n, self._delta)
        need = quota - self._quota
        if need < 0:
            raise ProtocolViolation("pull schedule must be nondecreasing")
        idx = self.survivors - 1
        self._sums[idx] += ctx.pull_repeat_block(self.survivors, need)
        self._counts[idx] += need
        means = self._sums[idx] / self._counts[idx]
        self._round = r
        self._quota = quota
        self._level = level
        self.levels.append(level)
        return tuple(zip(self.survivors.tolist(), means.tolist()))

    def receive(self, broadcasts):
        pooled = _pooled_survivor_means(broadcasts, self.survivors, self._k)
        keep = ~(pooled < pooled.max() - self._level)
        if not keep.any():
            raise ProtocolViolation("elimination emptied the survivor set")
        self.survivors = self.survivors[keep]
        self.survivor_history.append(int(self.survivors.size))
        if self._should_stop(self._round, self._level, self.survivors):
            self._done = True
            return False
        return True

    def answer(self) -> int:
        return int(self.survivors[0])


def _run_elimination_rounds(
    instance: BanditInstance,
    k: int,
    delta: float,
    streams: TrialStreams,
    level_of,
    should_stop,
    engine_cap: int,
    metadata: dict,
    trace=None,
) -> RunOutcome:
    players = [
        _EliminationPlayer(instance.n, k, delta, level_of, should_stop) for _ in range(k)
    ]
    answers, comm, ledger = run_synchronous(
        instance, players, streams.players(k), budgets=None, max_rounds=engine_cap, trace=trace
    )
    if len(set(answers)) != 1:
        raise ProtocolViolation("players disagree on the surviving set")
    lead = players[0]
    metadata.update(
        {
            "survivors": lead.survivors.tolist(),
            "survivor_history": list(lead.survivor_history),
            "levels": list(lead.levels),
            "fallback_events": 0,
        }
    )
    return RunOutcome(
        chosen=answers[0],
        per_player_choices=answers,
        comm=comm,
        per_player_pulls=ledger.per_player_totals(),
        metadata=metadata,
    )


def multi_round(
    instance: BanditInstance,
    k: int,
    epsilon: float,
    delta: float,
    streams: TrialStreams,
    *,
    safety_rounds: int = 64,
    trace=None,
) -> RunOutcome:
    """Round-by-round collective elimination at geometrically shrinking levels.

    In round r every player tops all surviving arms up to a shared quota,
    broadcasts its running means, and all players discard the arms whose
    pooled mean falls more than 2^-r below the pooled leader.  The run ends
    once the level reaches half the target accuracy (at most
    1 + ceil(log2(1/epsilon)) rounds) or one arm remains; with epsilon = 0
    it ends only when one arm remains, so the best arm must be unique.
    """
    k = _check_positive_int("k", k, 1)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    if epsilon == 0:
        require_unique_best(instance)
        bound = None
        engine_cap = safety_rounds
    else:
        bound = 1 + math.ceil(math.log2(1.0 / epsilon))
        engine_cap = bound + 8

    def should_stop(r, level, survivors):
        return len(survivors) == 1 or (epsilon > 0 and level <= epsilon / 2.0)

    metadata = {
        "algorithm": "multi-round",
        "k": k,
        "epsilon": epsilon,
        "delta": delta,
        "round_bound": bound,
        "warnings": [],
    }
    return _run_elimination_rounds(
        instance,
        k,
        delta,
        streams,
        lambda r: 2.0**-r,
        should_stop,
        engine_cap,
        metadata,
        trace=trace,
    )


def r_round(
    instance: BanditInstance,
    k: int,
    epsilon: float,
    delta: float,
    num_rounds: int,
    streams: TrialStreams,
    *,
    trace=None,
) -> RunOutcome:
    """Collective elimination squeezed into at most `num_rounds` rounds.

    Same loop as :func:`multi_round` but the level of round r is
    epsilon^(r/num_rounds), so the final round runs at the target accuracy
    and the run always stops by round `num_rounds` (earlier if one arm
    remains).
    """
    k = _check_positive_int("k", k, 1)
    num_rounds = _check_positive_int("num_rounds", num_rounds, 1)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1) for a fixed round count")

    def should_stop(r, level, survivors):
        return len(survivors) == 1 or r >= num_rounds

    metadata = {
        "algorithm": "r-round",
        "k": k,
        "epsilon": epsilon,
        "delta": delta,
        "rounds_param": num_rounds,
        "warnings": [],
    }
    return _run_elimination_rounds(
        instance,
        k,
        delta,
        streams,
        lambda r: epsilon ** (r / num_rounds),
        should_stop,
        num_rounds + 8,
        metadata,
        trace=trace,
    )


# ---------------------------------------------------------------------------
# Baselines


class _SoloPlayer(Player):
    """Explore the full arm set alone; optionally broadcast the bare pick."""

    def __init__(self, epsilon: float, cap: int, vote: bool):
        self._epsilon = epsilon
        self._cap = cap
        self._vote = vote
        self.choice: Optional[int] = None
        self.final: Optional[int] = None

    def local_phase(self, ctx: PlayerContext):
        out = run_elimination(ctx, range(1, ctx.num_arms + 1), self._epsilon, self._cap)
        self.choice = out.chosen
        if self._vote:
            return ((self.choice, None),)
        return None

    def receive(self, broadcasts):
        votes = []
        for msg in broadcasts:
            if len(msg.payload) != 1 or msg.payload[0][1] is not None:
                raise ProtocolViolation(f"player {msg.player} sent more than a bare vote")
            votes.append(msg.payload[0][0])
        if len(votes) != len(broadcasts):
            raise ProtocolViolation("missing votes")
        self.final = plurality(votes)
        return False

    def answer(self) -> int:
        return self.final if self._vote else self.choice


def _baseline_metadata(name, k, budget, epsilon):
    return {
        "algorithm": name,
        "k": k,
        "budget": budget,
        "epsilon": epsilon,
        "fallback_events": 0,
        "warnings": [],
    }


def baseline_no_comm(
    instance: BanditInstance, k: int, budget: int, epsilon: float, streams: TrialStreams, *, trace=None
) -> RunOutcome:
    """Every player explores alone; nobody talks.  The run's answer is
    player 1's answer, the rest are recorded alongside."""
    k = _check_positive_int("k", k, 1)
    budget = _check_positive_int("budget", budget, 0)
    players = [_SoloPlayer(epsilon, budget, vote=False) for _ in range(k)]
    answers, comm, ledger = run_synchronous(
        instance, players, streams.players(k), budgets=budget, max_rounds=1, trace=trace
    )
    if comm.rounds != 0:
        raise ProtocolViolation("no-comm must not communicate")
    return RunOutcome(
        chosen=answers[0],
        per_player_choices=answers,
        comm=comm,
        per_player_pulls=ledger.per_player_totals(),
        metadata=_baseline_metadata("no-comm", k, budget, epsilon),
    )


def baseline_majority_vote(
    instance: BanditInstance, k: int, budget: int, epsilon: float, streams: TrialStreams, *, trace=None
) -> RunOutcome:
    """Every player explores alone and broadcasts its bare pick once; the
    plurality wins (ties to the lowest arm index)."""
    k = _check_positive_int("k", k, 1)
    budget = _check_positive_int("budget", budget, 0)
    players = [_SoloPlayer(epsilon, budget, vote=True) for _ in range(k)]
    answers, comm, ledger = run_synchronous(
        instance, players, streams.players(k), budgets=budget, max_rounds=1, trace=trace
    )
    if comm.rounds != 1 or len(set(answers)) != 1:
        raise ProtocolViolation("majority vote must agree in exactly one round")
    return RunOutcome(
        chosen=answers[0],
        per_player_choices=tuple(p.choice for p in players),
        comm=comm,
        per_player_pulls=ledger.per_player_totals(),
        metadata=_baseline_metadata("majority-vote", k, budget, epsilon),
    )


class _RoundRobinSampler:
    """Sampler for the simulated pooled run: one stream, pulls attributed
    to players cyclically so the ledger still reflects per-player budgets."""

    def __init__(self, instance: BanditInstance, rng: RngStream, ledger: PullLedger, k: int):
        self._instance = instance
        self._rng = rng
        self._ledger = ledger
        self._k = k
        self._counter = 0

    def validate_arms(self, arms: np.ndarray) -> None:
        if arms[0] < 1 or arms[-1] > self._instance.n:
            raise ValueError("arm index out of range")

    def draw_block0(self, idx0: np.ndarray) -> np.ndarray:
        from .instances import draw_reward_block0

        rewards = draw_reward_block0(self._instance, idx0, self._rng).astype(float)
        players = ((self._counter + np.arange(idx0.size)) % self._k) + 1
        self._ledger.record_shared_block(players, idx0 + 1, rewards)
        self._counter += int(idx0.size)
        return rewards

    def commit(self, arms, counts, sums) -> None:
        pass


def baseline_full_comm(
    instance: BanditInstance, k: int, budget: int, epsilon: float, streams: TrialStreams, *, trace=None
) -> RunOutcome:
    """Ideal full-communication baseline: one serial elimination run over
    the pooled budget k*budget.  Rounds are reported as the number of
    sweeps executed (the serial run shares results at every step), and the
    pooled pulls are attributed to players round-robin.
    """
    k = _check_positive_int("k", k, 1)
    budget = _check_positive_int("budget", budget, 0)
    ledger = PullLedger(k, instance.n, budgets=budget)
    sampler = _RoundRobinSampler(instance, streams.player(1), ledger, k)
    out = run_elimination(sampler, range(1, instance.n + 1), epsilon, k * budget)
    ledger.check_invariants()
    totals = ledger.per_player_totals()
    comm = CommStats(
        rounds=out.sweeps,
        values_sent=2 * out.pulls_used,
        values_per_player_max=2 * max(totals),
    )
    metadata = _baseline_metadata("full-comm", k, budget, epsilon)
    metadata["graceful"] = out.graceful
    return RunOutcome(
        chosen=out.chosen,
        per_player_choices=(out.chosen,) * k,
        comm=comm,
        per_player_pulls=totals,
        metadata=metadata,
    )


# ---------------------------------------------------------------------------
# Dispatch


def run_algorithm(
    name: str,
    instance: BanditInstance,
    streams: TrialStreams,
    *,
    k: int,
    budget: Optional[int] = None,
    epsilon: float = 0.0,
    delta: float = 0.1,
    rounds: Optional[int] = None,
    base: str = "one-round-best",
    copies: Optional[int] = None,
    trace=None,
) -> RunOutcome:
    """Run the strategy selected by `name` with the parameters it needs."""
    if name not in ALGORITHM_NAMES:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(ALGORITHM_NAMES)}")

    def need_budget():
        if budget is None:
            raise ValueError(f"{name} needs a per-player budget")
        return budget

    if name == "one-round-best":
        return one_round_best_arm(instance, k, need_budget(), streams, trace=trace)
    if name == "one-round-pac":
        return one_round_pac(instance, k, need_budget(), epsilon, streams, trace=trace)
    if name == "amplified":
        return amplify(
            instance,
            k,
            need_budget(),
            delta,
            streams,
            base=base,
            epsilon=epsilon,
            copies=copies,
            trace=trace,
        )
    if name == "multi-round":
        return multi_round(instance, k, epsilon, delta, streams, trace=trace)
    if name == "r-round":
        if rounds is None:
            raise ValueError("r-round needs a round count")
        return r_round(instance, k, epsilon, delta, rounds, streams, trace=trace)
    if name == "no-comm":
        return baseline_no_comm(instance, k, need_budget(), epsilon, streams, trace=trace)
    if name == "majority-vote":
        return baseline_majority_vote(instance, k, need_budget(), epsilon, streams, trace=trace)
    return baseline_full_comm(instance, k, need_budget(), epsilon, streams, trace=trace)
