"""Click corruption under a round-count budget.

The adversary decides before the round's arm is realized: it sees past
outcomes and the principal's current arm distribution, never the explore
coin or arm draw of the round it is corrupting. A corrupted round
pre-commits a click outcome for every arm (the drawn arm's entry is the
one applied) and costs one unit of budget no matter which arm comes up.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["STRATEGIES", "CorruptionPlan", "Adversary"]

STRATEGIES = ("none", "suppress_best", "boost_own", "suppress_rival", "random_flip")


@dataclass(frozen=True)
class CorruptionPlan:
    """Per-round corruption decision; ``overrides`` is absent when clean."""

    corrupt: bool
    overrides: np.ndarray | None = None


class Adversary:
    """Budgeted corruption strategy.

    Strategies (all spend the budget on the earliest rounds they act on):

    - ``none``: never corrupts; runs are bit-identical to budget 0.
    - ``suppress_best``: forces the named best arm's click to 0 and every
      other arm's to 1 for the first ``budget`` rounds.
    - ``boost_own``: forces the target's click to 1, everyone else's to 0.
    - ``suppress_rival``: forces the target's click to 0, everyone else's to 1.
    - ``random_flip``: each round, with probability ``flip_prob``, commits
      uniform random outcomes for all arms (budget permitting).
    """

    def __init__(
        self,
        strategy: str = "none",
        budget: int = 0,
        num_agents: int = 2,
        target: int | None = None,
        flip_prob: float = 0.5,
        best_arm: int | None = None,
        flip_coins: np.ndarray | None = None,
        override_draws: np.ndarray | None = None,
    ):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown adversary strategy {strategy!r}")
        if budget < 0:
            raise ValueError("budget must be >= 0")
        if strategy == "suppress_best" and best_arm is None:
            raise ValueError("suppress_best needs best_arm")
        if strategy in ("boost_own", "suppress_rival") and target is None:
            raise ValueError(f"{strategy} needs a target agent")
        if strategy == "random_flip" and (flip_coins is None or override_draws is None):
            raise ValueError("random_flip needs flip_coins and override_draws streams")
        self.strategy = strategy
        self.budget = int(budget)
        self.budget_remaining = int(budget)
        self.num_agents = num_agents
        self.target = target
        self.flip_prob = float(flip_prob)
        self.best_arm = best_arm
        self.flip_coins = flip_coins
        self.override_draws = override_draws
        self.corrupted_rounds = 0

    def plan(self, t: int, history=None, arm_marginal=None) -> CorruptionPlan:
        """Decide this round's corruption; decrements the budget iff corrupting.

        ``history`` and ``arm_marginal`` are the observables the model
        allows; the built-in strategies do not consult them.
        """
        if self.strategy == "none" or self.budget_remaining <= 0:
            return CorruptionPlan(corrupt=False)
        if self.strategy == "suppress_best":
            ov = np.ones(self.num_agents, dtype=np.int8)
            ov[self.best_arm] = 0
        elif self.strategy == "boost_own":
            ov = np.zeros(self.num_agents, dtype=np.int8)
            ov[self.target] = 1
        elif self.strategy == "suppress_rival":
            ov = np.ones(self.num_agents, dtype=np.int8)
            ov[self.target] = 0
        else:  # random_flip
            if not self.flip_coins[t] < self.flip_prob:
                return CorruptionPlan(corrupt=False)
            ov = (self.override_draws[t] < 0.5).astype(np.int8)
        self.budget_remaining -= 1
        self.corrupted_rounds += 1
        return CorruptionPlan(corrupt=True, overrides=ov)

    @staticmethod
    def apply(plan: CorruptionPlan, arm: int, stochastic_click: int) -> tuple[int, bool]:
        """Realized click for the drawn arm and whether the round was corrupted."""
        if not plan.corrupt:
            return int(stochastic_click), False
        return int(plan.overrides[arm]), True
