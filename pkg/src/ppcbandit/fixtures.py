"""Canonical small instances used by the test suite and the CLI presets."""

from __future__ import annotations

import numpy as np

from .model import AuctionInstance, ExpertClass

__all__ = [
    "appendix_example",
    "stochastic_k3",
    "corruption_k2",
    "constant_experts",
]


def constant_experts(num_agents: int, num_contexts: int = 1) -> ExpertClass:
    """One expert per agent, each recommending that agent on every context."""
    table = np.repeat(np.arange(num_agents)[:, None], num_contexts, axis=1)
    return ExpertClass(table=table)


def appendix_example(horizon: int = 10_000) -> tuple[AuctionInstance, ExpertClass]:
    """3 contexts x 3 arms x 3 experts reference market.

    Uniform contexts; the three experts are the cyclic assignments, so
    agent 0's win probability as a function of its own bid (others at
    0.1 and 0.2) is the step function with breakpoints 0.3 and 0.6.
    """
    inst = AuctionInstance(
        context_probs=np.array([1 / 3, 1 / 3, 1 / 3]),
        ctr=np.array(
            [
                [0.7, 0.4, 0.9],
                [0.2, 0.2, 0.5],
                [0.6, 0.8, 0.3],
            ]
        ),
        values=np.array([0.5, 0.1, 0.2]),
        horizon=horizon,
    )
    experts = ExpertClass(
        table=np.array(
            [
                [0, 1, 2],
                [1, 2, 0],
                [2, 0, 1],
            ]
        )
    )
    return inst, experts


def stochastic_k3(horizon: int = 10_000) -> tuple[AuctionInstance, ExpertClass]:
    """Context-free 3-arm market: values (0.9, 0.6, 0.3), CTRs (0.5, 0.7, 0.9)."""
    inst = AuctionInstance(
        context_probs=np.array([1.0]),
        ctr=np.array([[0.5, 0.7, 0.9]]),
        values=np.array([0.9, 0.6, 0.3]),
        horizon=horizon,
    )
    return inst, constant_experts(3)


def corruption_k2(horizon: int = 100_000) -> tuple[AuctionInstance, ExpertClass]:
    """Context-free 2-arm market with a large welfare gap: the committed
    baseline collapses here once its exploration data is corrupted."""
    inst = AuctionInstance(
        context_probs=np.array([1.0]),
        ctr=np.array([[0.9, 0.8]]),
        values=np.array([1.0, 0.3]),
        horizon=horizon,
    )
    return inst, constant_experts(2)
