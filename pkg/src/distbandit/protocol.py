"""Round-based broadcast protocol and its accounting.

A run alternates local-play phases with synchronization barriers.  During
a local phase each player pulls arms against its own random stream and its
own ledger rows; at a barrier every player that has something to say emits
one broadcast and then every player receives all broadcasts of that round
(including its own).  Delivery is reliable and in lockstep; there is no
loss, no delay, and no topology.

The engine runs players sequentially in index order, which by construction
equals any parallel schedule: a local phase may read only the player's own
stream, its own ledger rows, and previously delivered broadcasts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isfinite
from typing import Callable, Optional, Sequence

import numpy as np

from .instances import (
    BanditInstance,
    draw_reward_block,
    draw_reward_block0,
    draw_reward_sum,
    draw_reward_sum_block,
)
from .rng import RngStream


class ProtocolViolation(RuntimeError):
    """A player broke the rules of the communication model (e.g. overspent
    its pull budget, or emitted a malformed broadcast)."""


@dataclass(frozen=True)
class Broadcast:
    """One player's message for one round.

    The payload is a tuple of (arm, value) pairs; a pair with value None
    carries the arm index alone.  Scalar accounting counts 1 for a bare
    arm and 2 for an (arm, value) pair.
    """

    player: int
    round: int
    payload: tuple[tuple[int, Optional[float]], ...]

    def __post_init__(self):
        if self.player < 1:
            raise ValueError("player indices start at 1")
        if self.round < 1:
            raise ValueError("round indices start at 1")
        seen = set()
        for arm, value in self.payload:
            if arm in seen:
                raise ProtocolViolation(f"player {self.player} repeated arm {arm} in one payload")
            seen.add(arm)
            if value is not None and not isfinite(value):
                raise ProtocolViolation(f"player {self.player} broadcast a non-finite value")

    @property
    def n_values(self) -> int:
        return sum(1 if value is None else 2 for _, value in self.payload)

    @cached_property
    def payload_arms(self) -> np.ndarray:
        return np.array([arm for arm, _ in self.payload], dtype=int)

    @cached_property
    def payload_values(self) -> np.ndarray:
        return np.array(
            [np.nan if value is None else value for _, value in self.payload], dtype=float
        )


@dataclass(frozen=True)
class CommStats:
    """Communication accounting for one run.

    `rounds` counts barriers actually executed; `values_sent` counts every
    scalar emitted across all players and rounds; `values_per_player_max`
    is the largest per-player scalar total.
    """

    rounds: int
    values_sent: int
    values_per_player_max: int


class PullLedger:
    """Per-player, per-arm pull and reward accounting.

    The ledger is the single source of truth for budgets: recording pulls
    beyond a player's cap raises :class:`ProtocolViolation` naming the
    player.  Reward sums are validated against pull counts (rewards live
    in [0, 1]).
    """

    def __init__(self, num_players: int, num_arms: int, budgets=None):
        if num_players < 1:
            raise ValueError("need at least one player")
        self._k = num_players
        self._n = num_arms
        self._pulls = np.zeros((num_players, num_arms), dtype=np.int64)
        self._sums = np.zeros((num_players, num_arms), dtype=float)
        self._totals = np.zeros(num_players, dtype=np.int64)
        if budgets is None:
            self._budgets = [None] * num_players
        elif isinstance(budgets, int):
            self._budgets = [budgets] * num_players
        else:
            self._budgets = list(budgets)
            if len(self._budgets) != num_players:
                raise ValueError("one budget per player required")

    @property
    def num_players(self) -> int:
        return self._k

    def budget(self, player: int) -> Optional[int]:
        return self._budgets[player - 1]

    def _charge(self, player: int, amount: int) -> None:
        cap = self._budgets[player - 1]
        if cap is not None and self._totals[player - 1] + amount > cap:
            raise ProtocolViolation(
                f"player {player} requested {amount} pulls beyond its budget of {cap}"
            )
        self._totals[player - 1] += amount

    def record_block(self, player: int, arms: np.ndarray, rewards: np.ndarray) -> None:
        """Record one pull per listed arm (arms must be distinct)."""
        arms = np.asarray(arms, dtype=int)
        if arms.size == 0:
            return
        rewards = np.asarray(rewards, dtype=float)
        if rewards.min() < -1e-9 or rewards.max() > 1.0 + 1e-9:
            raise ProtocolViolation(f"player {player} reported rewards outside [0, 1]")
        self._charge(player, arms.size)
        row = self._pulls[player - 1]
        row[arms - 1] += 1
        self._sums[player - 1][arms - 1] += rewards

    def record_bulk(self, player: int, arm: int, count: int, reward_sum: float) -> None:
        """Record `count` pulls of one arm with their summed reward."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if count == 0:
            return
        if not -1e-9 <= reward_sum <= count + 1e-9:
            raise ProtocolViolation(
                f"player {player} reported reward sum {reward_sum} for {count} pulls"
            )
        self._charge(player, count)
        self._pulls[player - 1, arm - 1] += count
        self._sums[player - 1, arm - 1] += reward_sum

    def record_arm_block(self, player: int, arms: np.ndarray, counts, sums: np.ndarray) -> None:
        """Record per-arm pull counts and reward sums in one shot.

        `counts` may be a scalar (same count for every listed arm) or a
        per-arm vector.
        """
        arms = np.asarray(arms, dtype=int)
        if arms.size == 0:
            return
        counts = np.broadcast_to(np.asarray(counts, dtype=np.int64), arms.shape)
        sums = np.asarray(sums, dtype=float)
        if counts.min() < 0:
            raise ValueError("counts must be nonnegative")
        if (sums < -1e-9).any() or (sums > counts + 1e-9).any():
            raise ProtocolViolation(f"player {player} reported reward sums exceeding pull counts")
        self._charge(player, int(counts.sum()))
        self._pulls[player - 1][arms - 1] += counts
        self._sums[player - 1][arms - 1] += sums

    def record_shared_block(self, players: np.ndarray, arms: np.ndarray, rewards: np.ndarray) -> None:
        """Record one pull per (player, arm) pair; pairs must be distinct.

        Used by simulated pooled runs that spread pulls across players.
        """
        players = np.asarray(players, dtype=int)
        arms = np.asarray(arms, dtype=int)
        if arms.size == 0:
            return
        rewards = np.asarray(rewards, dtype=float)
        if rewards.min() < -1e-9 or rewards.max() > 1.0 + 1e-9:
            raise ProtocolViolation("pooled run reported rewards outside [0, 1]")
        added = np.bincount(players - 1, minlength=self._k)
        for j in np.flatnonzero(added):
            self._charge(int(j) + 1, int(added[j]))
        self._pulls[players - 1, arms - 1] += 1
        self._sums[players - 1, arms - 1] += rewards

    # -- accessors ---------------------------------------------------------

    def total_pulls(self, player: int) -> int:
        return int(self._totals[player - 1])

    def per_player_totals(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self._totals)

    def pooled_pulls(self) -> int:
        return int(self._totals.sum())

    def per_arm(self, player: int) -> dict[int, int]:
        row = self._pulls[player - 1]
        return {arm + 1: int(c) for arm, c in enumerate(row) if c}

    def reward_sum(self, player: int, arm: int) -> float:
        return float(self._sums[player - 1, arm - 1])

    def check_invariants(self) -> None:
        """Re-assert budget caps, totals, and reward bounds over the ledger."""
        if (self._pulls.sum(axis=1) != self._totals).any():
            raise ProtocolViolation("ledger totals drifted from per-arm counts")
        for j in range(1, self._k + 1):
            cap = self._budgets[j - 1]
            if cap is not None and self.total_pulls(j) > cap:
                raise ProtocolViolation(f"player {j} ledger exceeds its budget {cap}")
        if ((self._sums < -1e-9) | (self._sums > self._pulls + 1e-9)).any():
            raise ProtocolViolation("ledger reward sums exceed pull counts")


class PlayerContext:
    """A player's private view of the world during its local phase.

    Exposes the player's own stream and pull operations only; true means
    and other players' state are unreachable by construction, which is
    what makes the no-leakage property hold by interface shape.
    """

    def __init__(self, player: int, instance: BanditInstance, rng: RngStream, ledger: PullLedger):
        self.player = player
        self.rng = rng
        self._instance = instance
        self._ledger = ledger

    @property
    def num_arms(self) -> int:
        return self._instance.n

    def pull_block(self, arms: np.ndarray) -> np.ndarray:
        """Pull each listed arm once; returns the observed rewards."""
        rewards = draw_reward_block(self._instance, arms, self.rng)
        self._ledger.record_block(self.player, arms, rewards)
        return rewards

    def pull_repeat(self, arm: int, count: int) -> float:
        """Pull one arm `count` times; returns the summed reward."""
        total = draw_reward_sum(self._instance, arm, count, self.rng)
        self._ledger.record_bulk(self.player, arm, count, total)
        return total

    def pull_repeat_block(self, arms: np.ndarray, count: int) -> np.ndarray:
        """Pull every listed arm `count` times; returns per-arm reward sums."""
        sums = draw_reward_sum_block(self._instance, arms, count, self.rng)
        self._ledger.record_arm_block(self.player, arms, count, sums)
        return sums

    def pulls_used(self) -> int:
        return self._ledger.total_pulls(self.player)

    # -- exploration fast path (see serial.run_elimination) ----------------

    def validate_arms(self, arms: np.ndarray) -> None:
        if arms[0] < 1 or arms[-1] > self._instance.n:
            raise ValueError("arm index out of range")

    def draw_block0(self, idx0: np.ndarray) -> np.ndarray:
        """Draw one reward per 0-based arm position without touching the
        ledger yet; the caller settles the account through :meth:`commit`."""
        return draw_reward_block0(self._instance, idx0, self.rng)

    def commit(self, arms: np.ndarray, counts: np.ndarray, sums: np.ndarray) -> None:
        self._ledger.record_arm_block(self.player, arms, counts, sums)


class Player:
    """Strategy interface for one player of a synchronous run.

    ``local_phase`` pulls arms through the context and returns the payload
    to broadcast at the next barrier, or None to stay silent (a player that
    is finished).  ``receive`` gets every broadcast of the round and says
    whether the player wants another round.  ``answer`` is the player's
    committed arm once the run is over.
    """

    def local_phase(self, ctx: PlayerContext):
        raise NotImplementedError

    def receive(self, broadcasts: Sequence[Broadcast]) -> bool:
        return False

    def answer(self) -> int:
        raise NotImplementedError


def run_synchronous(
    instance: BanditInstance,
    players: Sequence[Player],
    streams: Sequence[RngStream],
    budgets=None,
    max_rounds: int = 1,
    trace: Optional[Callable[[Broadcast], None]] = None,
) -> tuple[tuple[int, ...], CommStats, PullLedger]:
    """Drive `players` through local phases and broadcast barriers.

    Returns each player's final answer, the communication statistics, and
    the pull ledger.  Deterministic given the streams: replaying with the
    same seeds yields identical broadcasts and ledgers.  `trace`, when
    given, observes every broadcast in delivery order.
    """
    k = len(players)
    if k < 1:
        raise ValueError("need at least one player")
    if len(streams) != k:
        raise ValueError("one stream per player required")

    ledger = PullLedger(k, instance.n, budgets)
    contexts = [PlayerContext(j + 1, instance, streams[j], ledger) for j in range(k)]

    rounds = 0
    values_sent = 0
    per_player_values = [0] * k

    while True:
        payloads = [p.local_phase(ctx) for p, ctx in zip(players, contexts)]
        round_msgs = [
            Broadcast(player=j + 1, round=rounds + 1, payload=tuple(pl))
            for j, pl in enumerate(payloads)
            if pl is not None
        ]
        if not round_msgs:
            break
        rounds += 1
        for msg in round_msgs:
            values_sent += msg.n_values
            per_player_values[msg.player - 1] += msg.n_values
            if trace is not None:
                trace(msg)
        keep_going = [p.receive(round_msgs) for p in players]
        if not any(keep_going):
            break
        if rounds >= max_rounds:
            break

    answers = tuple(p.answer() for p in players)
    stats = CommStats(
        rounds=rounds,
        values_sent=values_sent,
        values_per_player_max=max(per_player_values) if per_player_values else 0,
    )
    ledger.check_invariants()
    return answers, stats, ledger
