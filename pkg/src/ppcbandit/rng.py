"""Counter-based per-round randomness.

Every random quantity consumed in round t of a run is element t of a
stream keyed by (seed, purpose). Streams are Philox counter-based, so the
value at (seed, purpose, t) never depends on how randomness was consumed
in other rounds or for other purposes. This is what makes replay tests
exact: permuting the bids cannot shift the explore coin or the uniform
arm of any round.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

PURPOSE_CONTEXT = 0
PURPOSE_EXPLORE_COIN = 1
PURPOSE_EXPLORE_ARM = 2
PURPOSE_CLICK = 3
PURPOSE_ADVERSARY = 4
PURPOSE_ADVERSARY_OVERRIDE = 5


def purpose_generator(seed: int, purpose: int) -> np.random.Generator:
    """Generator whose k-th draw is a pure function of (seed, purpose, k)."""
    key = np.array([seed & _MASK64, purpose & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


class RoundStreams:
    """All per-round uniforms for one run, precomputed as arrays.

    Attributes are float64 arrays of length ``horizon`` in [0, 1):
    ``context_u`` (context draw), ``coin_u`` (explore/exploit coin),
    ``arm_u`` (uniform arm in explore rounds), ``click_u`` (click draw),
    ``adversary_u`` (per-round adversary coin).
    """

    def __init__(self, seed: int, horizon: int):
        self.seed = int(seed)
        self.horizon = int(horizon)
        self.context_u = purpose_generator(seed, PURPOSE_CONTEXT).random(horizon)
        self.coin_u = purpose_generator(seed, PURPOSE_EXPLORE_COIN).random(horizon)
        self.arm_u = purpose_generator(seed, PURPOSE_EXPLORE_ARM).random(horizon)
        self.click_u = purpose_generator(seed, PURPOSE_CLICK).random(horizon)
        self.adversary_u = purpose_generator(seed, PURPOSE_ADVERSARY).random(horizon)

    def uniform_arms(self, num_agents: int) -> np.ndarray:
        """Uniform arm index for every round (used only in explore rounds)."""
        arms = (self.arm_u * num_agents).astype(np.int64)
        return np.minimum(arms, num_agents - 1)

    def adversary_overrides(self, num_agents: int) -> np.ndarray:
        """(horizon, num_agents) uniforms for the random-flip strategy."""
        gen = purpose_generator(self.seed, PURPOSE_ADVERSARY_OVERRIDE)
        return gen.random((self.horizon, num_agents))


def contexts_from_uniforms(context_probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Map uniform draws to context ids by inverse CDF."""
    cum = np.cumsum(np.asarray(context_probs, dtype=np.float64))
    idx = np.searchsorted(cum, u, side="right")
    return np.minimum(idx, len(cum) - 1).astype(np.int64)
