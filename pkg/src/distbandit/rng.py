"""Seeded random streams with a documented (seed, trial, player) derivation.

Every source of randomness in the simulator is an :class:`RngStream`
identified by a master seed plus a (trial, player) stream id.  The same
triple always reproduces the same draw sequence; distinct triples give
statistically independent streams.  Streams are derived with numpy's
``SeedSequence`` using the (trial, player) pair as the spawn key, so the
mixing function is stable and documented:

    stream(seed, trial, player) = PCG64(SeedSequence(seed, spawn_key=(trial, player)))

Conventions: trials and players are numbered from 1; player id 0 of any
trial is reserved for auxiliary randomness (instance generation), so the
config-level generator stream (0, 0) and any per-trial generator stream
(t, 0) can never collide with a player stream.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

_MAX_SEED = 2**64

#: Reserved stream id for instance generators (never used by a player).
GENERATOR_STREAM_ID = (0, 0)


class RngStream:
    """A single-owner random stream for one (trial, player) pair.

    The stream is mutable state: each draw advances it.  Whoever holds the
    stream owns it exclusively; sharing one stream between players would
    break both independence and replay.
    """

    __slots__ = ("seed", "trial", "player", "_gen")

    def __init__(self, seed: int, trial: int = 0, player: int = 0):
        seed = int(seed)
        if not 0 <= seed < _MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        if trial < 0 or player < 0:
            raise ValueError("trial and player indices must be nonnegative")
        self.seed = seed
        self.trial = int(trial)
        self.player = int(player)
        ss = np.random.SeedSequence(entropy=seed, spawn_key=(self.trial, self.player))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, trial={self.trial}, player={self.player})"

    def uniform(self) -> float:
        """One uniform draw in [0, 1); advances the stream by one step."""
        return float(self._gen.random())

    def uniform_block(self, size: int) -> np.ndarray:
        """`size` uniform draws.  Consumes the same underlying values as
        `size` successive :meth:`uniform` calls."""
        return self._gen.random(size)

    def binomial(self, count: int, p: float) -> int:
        """Number of successes in `count` Bernoulli(p) draws."""
        if count < 0:
            raise ValueError("count must be nonnegative")
        if count == 0:
            return 0
        return int(self._gen.binomial(count, p))

    def binomial_block(self, count: int, ps: np.ndarray) -> np.ndarray:
        """One binomial(count, p) draw per entry of `ps`."""
        return self._gen.binomial(count, ps).astype(float)

    def subset(self, n: int, size: int) -> np.ndarray:
        """A sorted uniform sample of `size` distinct arm indices from 1..n."""
        if not 1 <= size <= n:
            raise ValueError(f"subset size {size} out of range for n={n}")
        picked = self._gen.choice(n, size=size, replace=False)
        picked.sort()
        return picked + 1

    def permuted(self, values: Iterable[float]) -> list[float]:
        """A uniformly random permutation of `values`."""
        arr = list(values)
        self._gen.shuffle(arr)
        return arr


class TrialStreams:
    """Factory for the per-player streams of one trial.

    Player j of trial t draws from ``RngStream(seed, t, j)``; the harness
    derives one :class:`TrialStreams` per trial from its master seed.
    """

    __slots__ = ("seed", "trial")

    def __init__(self, seed: int, trial: int = 1):
        if trial < 1:
            raise ValueError("trials are numbered from 1")
        self.seed = int(seed)
        self.trial = int(trial)

    def player(self, player: int) -> RngStream:
        if player < 1:
            raise ValueError("players are numbered from 1")
        return RngStream(self.seed, self.trial, player)

    def players(self, k: int) -> list[RngStream]:
        return [self.player(j) for j in range(1, k + 1)]


def generator_stream(seed: int) -> RngStream:
    """The reserved stream used for randomized instance generation."""
    return RngStream(seed, *GENERATOR_STREAM_ID)
