"""Win-probability envelopes and the truthful payment rule.

For a fixed click-probability table and fixed opponent bids, each expert's
reported welfare is affine in one agent's bid. The expert followed at any
bid is the argmax of those lines, so the agent's per-round win probability
is a piecewise-constant, nondecreasing step function of its own bid: the
upper envelope of the lines, with the winning expert's click probability
on each segment. Payments integrate that step function exactly, segment
by segment; there is no grid anywhere in this module's scalar path.

The scalar routines (`value_at`, `integral_to`, `myerson_payment`) use
plain float arithmetic in a fixed order so the compiled round loop can
reproduce them bit for bit.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .model import ClickProbTable

__all__ = [
    "Envelope",
    "build_envelope",
    "envelope_with_values",
    "myerson_payment",
    "MyersonPayment",
    "PaymentPerturbation",
]


@dataclass(frozen=True)
class Envelope:
    """Step function of one agent's bid over [0, 1].

    ``breakpoints`` are the interior crossing bids (strictly increasing);
    segment ``s`` spans ``[starts[s], starts[s+1])`` with the last segment
    closed at 1. A breakpoint belongs to the segment on its right, where
    the expert with the larger slope has taken over.
    """

    agent: int
    breakpoints: tuple[float, ...]
    segment_experts: tuple[int, ...]
    segment_values: tuple[float, ...]

    @property
    def num_segments(self) -> int:
        return len(self.segment_values)

    def segment_index(self, bid: float) -> int:
        return bisect_right(self.breakpoints, bid)

    def value_at(self, bid: float) -> float:
        """Win probability at one bid."""
        return self.segment_values[self.segment_index(bid)]

    def integral_to(self, bid: float) -> float:
        """Exact integral of the step function over [0, bid]."""
        idx = self.segment_index(bid)
        total = 0.0
        start = 0.0
        for s in range(idx):
            end = self.breakpoints[s]
            total += (end - start) * self.segment_values[s]
            start = end
        total += (bid - start) * self.segment_values[idx]
        return total

    def values_at(self, bids: np.ndarray) -> np.ndarray:
        """Vectorized ``value_at``."""
        idx = np.searchsorted(self.breakpoints, bids, side="right")
        return np.asarray(self.segment_values)[idx]

    def integrals_to(self, bids: np.ndarray) -> np.ndarray:
        """Vectorized ``integral_to``."""
        starts = np.concatenate(([0.0], self.breakpoints))
        vals = np.asarray(self.segment_values)
        prefix = np.concatenate(([0.0], np.cumsum(np.diff(np.append(starts, 1.0)) * vals)))
        idx = np.searchsorted(self.breakpoints, bids, side="right")
        return prefix[idx] + (np.asarray(bids) - starts[idx]) * vals[idx]


def _table_values(table) -> np.ndarray:
    return table.values if isinstance(table, ClickProbTable) else np.asarray(table)


def build_envelope(table, bids, agent: int) -> Envelope:
    """Upper envelope of the per-expert reported-welfare lines in one agent's bid.

    ``bids[agent]`` is ignored; the remaining entries fix the lines'
    intercepts. At a crossing the overtaking expert (larger click
    probability for the agent) owns the breakpoint; exact ties are broken
    toward the lowest expert index.
    """
    vals = _table_values(table)
    K, m = vals.shape
    slopes = [float(vals[agent, h]) for h in range(m)]
    inters = []
    for h in range(m):
        total = 0.0
        for i in range(K):
            total += float(vals[i, h]) * float(bids[i])
        inters.append(total - slopes[h] * float(bids[agent]))

    w = 0
    for h in range(1, m):
        if inters[h] > inters[w] or (inters[h] == inters[w] and slopes[h] > slopes[w]):
            w = h

    breakpoints: list[float] = []
    segment_experts = [w]
    y = 0.0
    while True:
        best_y = -1.0
        best_h = -1
        for h in range(m):
            if slopes[h] > slopes[w]:
                cross = (inters[w] - inters[h]) / (slopes[h] - slopes[w])
                if y < cross <= 1.0 and (
                    best_h < 0 or cross < best_y or (cross == best_y and slopes[h] > slopes[best_h])
                ):
                    best_y, best_h = cross, h
        if best_h < 0:
            break
        breakpoints.append(best_y)
        segment_experts.append(best_h)
        w, y = best_h, best_y

    return Envelope(
        agent=agent,
        breakpoints=tuple(breakpoints),
        segment_experts=tuple(segment_experts),
        segment_values=tuple(slopes[h] for h in segment_experts),
    )


def envelope_with_values(env: Envelope, table) -> Envelope:
    """Same winner structure, segment values looked up in another table.

    Used to evaluate the true win probability under an allocation driven
    by estimated probabilities: the winner per segment comes from the
    estimates, the probability of a click from the exact table.
    """
    vals = _table_values(table)
    return Envelope(
        agent=env.agent,
        breakpoints=env.breakpoints,
        segment_experts=env.segment_experts,
        segment_values=tuple(float(vals[env.agent, h]) for h in env.segment_experts),
    )


def myerson_payment(env: Envelope, bid: float) -> float:
    """Truthful per-click charge at one bid: bid - integral/g, or 0 when g = 0.

    For a nondecreasing envelope the result is always within [0, bid];
    the clip only guards float rounding.
    """
    g = env.value_at(bid)
    if g <= 0.0:
        return 0.0
    p = bid - env.integral_to(bid) / g
    if p < 0.0:
        return 0.0
    if p > bid:
        return bid
    return p


class MyersonPayment:
    """Callable payment rule over an envelope; accepts scalars or arrays."""

    def __init__(self, env: Envelope):
        self.env = env

    def __call__(self, bid):
        if np.ndim(bid) == 0:
            return myerson_payment(self.env, float(bid))
        bids = np.asarray(bid, dtype=np.float64)
        g = self.env.values_at(bids)
        integ = self.env.integrals_to(bids)
        out = np.zeros_like(bids)
        pos = g > 0.0
        out[pos] = bids[pos] - integ[pos] / g[pos]
        return np.clip(out, 0.0, bids)


class PaymentPerturbation:
    """Payment rule plus constant offsets on bid bands [low, high)."""

    def __init__(self, base, bands):
        self.base = base
        self.bands = [(float(lo), float(hi), float(d)) for lo, hi, d in bands]

    def __call__(self, bid):
        p = self.base(bid)
        if np.ndim(bid) == 0:
            for lo, hi, d in self.bands:
                if lo <= bid < hi:
                    p += d
            return p
        bids = np.asarray(bid, dtype=np.float64)
        p = np.array(p, dtype=np.float64, copy=True)
        for lo, hi, d in self.bands:
            p[(bids >= lo) & (bids < hi)] += d
        return p
