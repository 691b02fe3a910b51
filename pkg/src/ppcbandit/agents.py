"""Bidding strategies and the brute-force deviation oracle.

The oracle evaluates one agent's expected per-round utility
``u(b) = (value - payment(b)) * win_prob(b)`` over a dense candidate set:
a fixed grid, the breakpoints of both the estimated and exact win-prob
envelopes, and the truthful bid itself. The win probability uses the
exact table looked up on the winner structure induced by the estimates
(the allocation is driven by the estimates; the click by reality), while
the payment is whatever rule the mechanism actually charges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .envelope import MyersonPayment, build_envelope, envelope_with_values

__all__ = ["AgentPolicy", "BestResponse", "best_response", "choose_bid"]

GAIN_TOL = 1e-12
DEFAULT_GRID_STEP = 1e-3


@dataclass(frozen=True)
class AgentPolicy:
    """How one agent bids: always truthful, a constant, or truthful unless
    some deviation gains strictly more than ``alpha`` this round."""

    kind: str = "truthful"
    alpha: float = 1.0
    fixed_bid: float = 0.0

    def __post_init__(self):
        if self.kind not in ("truthful", "alpha_rational", "fixed_bid"):
            raise ValueError(f"unknown policy kind {self.kind!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if not 0.0 <= self.fixed_bid <= 1.0:
            raise ValueError("fixed_bid must be in [0, 1]")


@dataclass(frozen=True)
class BestResponse:
    """Deviation audit for one agent against one mechanism snapshot."""

    best_bid: float
    utility_at_best: float
    utility_at_truthful: float
    gain: float


def _candidate_bids(value: float, extra, grid_step: float) -> np.ndarray:
    n = int(round(1.0 / grid_step))
    grid = np.linspace(0.0, 1.0, n + 1)
    cand = np.concatenate([grid, np.asarray(extra, dtype=np.float64), [value]])
    cand = cand[(cand >= 0.0) & (cand <= 1.0)]
    return np.unique(cand)


def best_response(
    estimated_table,
    exact_table,
    bids,
    agent: int,
    value: float,
    payment=None,
    grid_step: float = DEFAULT_GRID_STEP,
) -> BestResponse:
    """Maximize the agent's true expected utility over candidate bids.

    ``estimated_table`` drives the allocation (winner per bid segment) and,
    unless ``payment`` overrides it, the charge; ``exact_table`` supplies
    the true click probability of whichever expert wins. When several bids
    tie for the maximum the reported bid is the one farthest from the
    truthful value (the most conspicuous deviation); if the truthful bid
    is already maximal the result is the value itself with zero gain.
    """
    est_env = build_envelope(estimated_table, bids, agent)
    win_env = envelope_with_values(est_env, exact_table)
    exact_env = build_envelope(exact_table, bids, agent)
    pay = payment if payment is not None else MyersonPayment(est_env)

    cand = _candidate_bids(value, est_env.breakpoints + exact_env.breakpoints, grid_step)
    utilities = (value - np.asarray(pay(cand), dtype=np.float64)) * win_env.values_at(cand)

    u_truth = float(utilities[np.searchsorted(cand, value)])
    u_best = float(utilities.max())
    gain = u_best - u_truth
    if gain <= GAIN_TOL:
        return BestResponse(best_bid=float(value), utility_at_best=u_truth,
                            utility_at_truthful=u_truth, gain=max(gain, 0.0))

    ties = cand[utilities >= u_best - GAIN_TOL]
    best_bid = float(ties[np.argmax(np.abs(ties - value))])
    return BestResponse(best_bid=best_bid, utility_at_best=u_best,
                        utility_at_truthful=u_truth, gain=gain)


def choose_bid(policy: AgentPolicy, value: float, response: BestResponse | None = None) -> float:
    """The bid the policy submits this round."""
    if policy.kind == "fixed_bid":
        return policy.fixed_bid
    if policy.kind == "truthful":
        return float(value)
    if response is None:
        raise ValueError("alpha_rational policy needs a BestResponse for the round")
    return response.best_bid if response.gain > policy.alpha else float(value)
