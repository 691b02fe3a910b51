"""The four allocation/payment engines.

All engines consume their round randomness as explicit per-round floats
(the simulator passes them in from counter-based streams keyed by round),
so an engine's choice in an explore round can never depend on bids or on
how earlier rounds consumed randomness.

Scalar arithmetic here deliberately mirrors the compiled round loop
operation for operation; see `_loops.pyx`.
"""

from __future__ import annotations

import math

import numpy as np

from .envelope import build_envelope, myerson_payment
from .model import ClickProbTable

__all__ = [
    "ContextualEpsilonGreedy",
    "StochasticEpsilonGreedy",
    "ExploreThenCommit",
    "PerfectInformationGreedy",
    "epsilon_stochastic_proof",
    "epsilon_stochastic_headline",
    "epsilon_contextual",
    "etc_explore_rounds",
    "clamp_epsilon",
]

_EPS_LO = 1e-9
_EPS_HI = 1.0 - 1e-9


def clamp_epsilon(eps: float) -> float:
    """Exploration rates live in the open interval (0, 1)."""
    return min(max(float(eps), _EPS_LO), _EPS_HI)


def epsilon_stochastic_proof(T: int, K: int) -> float:
    """Exploration rate 2(K ln T)^{1/3} T^{-1/3} (the analysis' choice)."""
    return clamp_epsilon(2.0 * (K * math.log(T)) ** (1 / 3) * T ** (-1 / 3))


def epsilon_stochastic_headline(T: int, K: int) -> float:
    """Exploration rate 2 K^{1/3} (T ln T)^{-1/3} (the headline statement).

    Differs from `epsilon_stochastic_proof` by a (ln T)^{2/3} factor; both
    are exposed, experiments default to the proof variant.
    """
    return clamp_epsilon(2.0 * K ** (1 / 3) * (T * math.log(T)) ** (-1 / 3))


def epsilon_contextual(T: int, K: int, m: int) -> float:
    """Exploration rate 2 T^{-1/3} ln(TmK)^{1/3} K^{4/3}."""
    return clamp_epsilon(2.0 * T ** (-1 / 3) * math.log(T * m * K) ** (1 / 3) * K ** (4 / 3))


def etc_explore_rounds(T: int, K: int) -> int:
    """Default explore phase for the commit baseline: the same expected
    exploration budget as the stochastic epsilon-greedy preset, rounded up
    to a multiple of K so the round robin is balanced."""
    budget = T * epsilon_stochastic_proof(T, K)
    n = int(math.ceil(budget / K)) * K
    return max(K, min(n, T))


class ContextualEpsilonGreedy:
    """Explore uniformly with rate epsilon; otherwise follow the expert with
    the highest estimated reported welfare and charge the truthful payment
    computed from the estimates.

    Estimates are importance-weighted click counts from explore rounds
    only, clamped into [0, 1] for selection and payments (a single-sample
    raw estimate reaches K).
    """

    kind = "contextual"

    def __init__(self, num_agents: int, num_experts: int, epsilon: float):
        if not 0.0 < epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        self.num_agents = num_agents
        self.num_experts = num_experts
        self.epsilon = float(epsilon)
        self.raw_sums = np.zeros((num_agents, num_experts))
        self.n_explore = 0
        self.explore_rounds: list[int] = []
        self.t = 0

    def estimates_raw(self) -> np.ndarray:
        """Importance-weighted estimates before clamping (entries in [0, K])."""
        if self.n_explore == 0:
            return np.zeros_like(self.raw_sums)
        return self.raw_sums / self.n_explore

    def estimates(self) -> np.ndarray:
        """Clamped estimates actually used for selection and payments."""
        if self.n_explore == 0:
            return np.zeros_like(self.raw_sums)
        return np.minimum(self.raw_sums / self.n_explore, 1.0)

    @property
    def estimate_version(self) -> int:
        """Changes exactly when the estimates can change (explore rounds)."""
        return self.n_explore

    def best_expert(self, bids) -> int:
        est = self.estimates()
        best, best_score = 0, -1.0
        for h in range(self.num_experts):
            score = 0.0
            for i in range(self.num_agents):
                score += est[i, h] * bids[i]
            if score > best_score:
                best, best_score = h, score
        return best

    def step(self, expert_table: np.ndarray, bids, context: int, coin: float, arm_draw: float):
        """Returns (arm, explore_flag) for the current round."""
        if coin < self.epsilon:
            arm = min(int(arm_draw * self.num_agents), self.num_agents - 1)
            return arm, True
        h = self.best_expert(bids)
        return int(expert_table[h, context]), False

    def observe(self, expert_table: np.ndarray, bids, context: int, arm: int, explore: bool, click: int) -> float:
        """Returns the payment and folds the round into the state."""
        if not 0 <= arm < self.num_agents:
            raise ValueError(f"arm {arm} out of range")
        if explore:
            self.explore_rounds.append(self.t)
            self.n_explore += 1
            for h in range(self.num_experts):
                if expert_table[h, context] == arm:
                    self.raw_sums[arm, h] += self.num_agents * click
            payment = 0.0
        else:
            expected = int(expert_table[self.best_expert(bids), context])
            if arm != expected:
                raise ValueError(f"exploit arm {arm} inconsistent with current estimates ({expected})")
            if click:
                env = build_envelope(self.estimates(), bids, arm)
                payment = myerson_payment(env, float(bids[arm]))
            else:
                payment = 0.0
        self.t += 1
        return payment


class StochasticEpsilonGreedy:
    """Context-free variant: keep a running-mean CTR per arm from explore
    rounds; exploit rounds run a weighted second-price auction with the
    estimates as weights."""

    kind = "stochastic"

    def __init__(self, num_agents: int, epsilon: float):
        if not 0.0 < epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        self.num_agents = num_agents
        self.epsilon = float(epsilon)
        self.rho_hat = np.zeros(num_agents)
        self.counts = np.zeros(num_agents, dtype=np.int64)
        self.t = 0

    @property
    def estimate_version(self) -> int:
        return int(self.counts.sum())

    def best_arm(self, bids) -> int:
        best, best_score = 0, -1.0
        for j in range(self.num_agents):
            score = self.rho_hat[j] * bids[j]
            if score > best_score:
                best, best_score = j, score
        return best

    def step(self, bids, coin: float, arm_draw: float):
        if coin < self.epsilon:
            arm = min(int(arm_draw * self.num_agents), self.num_agents - 1)
            return arm, True
        return self.best_arm(bids), False

    def _second_price(self, bids, arm: int) -> float:
        if self.rho_hat[arm] <= 0.0:
            return 0.0
        smax = 0.0
        for j in range(self.num_agents):
            if j != arm:
                score = self.rho_hat[j] * bids[j]
                if score > smax:
                    smax = score
        payment = smax / self.rho_hat[arm]
        if payment > bids[arm]:
            payment = float(bids[arm])
        return payment

    def observe(self, bids, arm: int, explore: bool, click: int) -> float:
        if explore:
            self.counts[arm] += 1
            self.rho_hat[arm] = (click + self.rho_hat[arm] * (self.counts[arm] - 1)) / self.counts[arm]
            payment = 0.0
        else:
            payment = self._second_price(bids, arm) if click else 0.0
        self.t += 1
        return payment


class ExploreThenCommit:
    """Deterministic round robin for the first ``n_explore`` rounds (free),
    then commit to the weighted second-price auction with frozen weights.

    The round robin never looks at bids, so the rule is still
    exploration-separated; it is simply not robust to corrupted clicks."""

    kind = "etc"

    def __init__(self, num_agents: int, n_explore: int):
        if n_explore < 0:
            raise ValueError("n_explore must be >= 0")
        self.num_agents = num_agents
        self.n_explore = int(n_explore)
        self.rho_hat = np.zeros(num_agents)
        self.counts = np.zeros(num_agents, dtype=np.int64)
        self.t = 0

    def best_arm(self, bids) -> int:
        best, best_score = 0, -1.0
        for j in range(self.num_agents):
            score = self.rho_hat[j] * bids[j]
            if score > best_score:
                best, best_score = j, score
        return best

    def step(self, bids, coin: float = 0.0, arm_draw: float = 0.0):
        if self.t < self.n_explore:
            return self.t % self.num_agents, True
        return self.best_arm(bids), False

    def observe(self, bids, arm: int, explore: bool, click: int) -> float:
        if explore:
            self.counts[arm] += 1
            self.rho_hat[arm] = (click + self.rho_hat[arm] * (self.counts[arm] - 1)) / self.counts[arm]
            payment = 0.0
        else:
            if self.rho_hat[arm] <= 0.0:
                payment = 0.0
            elif click:
                smax = 0.0
                for j in range(self.num_agents):
                    if j != arm:
                        score = self.rho_hat[j] * bids[j]
                        if score > smax:
                            smax = score
                payment = smax / self.rho_hat[arm]
                if payment > bids[arm]:
                    payment = float(bids[arm])
            else:
                payment = 0.0
        self.t += 1
        return payment


class PerfectInformationGreedy:
    """Full-information greedy: follow the expert with the highest reported
    welfare under the exact click-probability table, charge the exact
    truthful payment. The zero-exploration, zero-error reference."""

    kind = "perfect"

    def __init__(self, table: ClickProbTable):
        self.table = table
        self.t = 0

    def best_expert(self, bids) -> int:
        vals = self.table.values
        best, best_score = 0, -1.0
        for h in range(vals.shape[1]):
            score = 0.0
            for i in range(vals.shape[0]):
                score += float(vals[i, h]) * bids[i]
            if score > best_score:
                best, best_score = h, score
        return best

    def step(self, expert_table: np.ndarray, bids, context: int, coin: float = 0.0, arm_draw: float = 0.0):
        return int(expert_table[self.best_expert(bids), context]), False

    def observe(self, expert_table: np.ndarray, bids, context: int, arm: int, explore: bool, click: int) -> float:
        if click:
            env = build_envelope(self.table.values, bids, arm)
            payment = myerson_payment(env, float(bids[arm]))
        else:
            payment = 0.0
        self.t += 1
        return payment
