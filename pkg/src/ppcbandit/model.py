"""Ground-truth market model and exact small-instance oracles.

An auction instance is a finite pay-per-click market: a finite context
distribution, a click-through-rate table, and one private value per agent.
An expert class is a finite set of maps from contexts to agents. All
oracles here are written with plain Python arithmetic over the stored
entries, so instances built from ``fractions.Fraction`` entries are
evaluated exactly; float instances are evaluated in float64.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "AuctionInstance",
    "ExpertClass",
    "ClickProbTable",
    "induced_click_prob",
    "expected_welfare",
    "reported_welfare",
    "best_expert",
    "stochastic_ctr",
    "is_preordered",
    "validate_instance",
    "table_consistency_error",
    "exact_click_prob_table",
    "instance_to_dict",
    "instance_from_dict",
    "load_instance",
    "save_instance",
]

PROB_SUM_TOL = 1e-12


@dataclass(frozen=True)
class AuctionInstance:
    """One market: context distribution, CTR table and agent values.

    ``ctr[x, a]`` is the probability that agent ``a``'s ad is clicked when
    shown under context ``x``; ``values[a]`` is the value agent ``a`` earns
    per click. ``horizon`` is the default number of rounds.
    """

    context_probs: np.ndarray
    ctr: np.ndarray
    values: np.ndarray
    horizon: int

    def __post_init__(self):
        object.__setattr__(self, "context_probs", np.asarray(self.context_probs))
        object.__setattr__(self, "ctr", np.asarray(self.ctr))
        object.__setattr__(self, "values", np.asarray(self.values))
        if self.ctr.ndim != 2:
            raise ValueError("ctr must be a (num_contexts, num_agents) matrix")
        if self.context_probs.shape != (self.ctr.shape[0],):
            raise ValueError("context_probs length must match ctr rows")
        if self.values.shape != (self.ctr.shape[1],):
            raise ValueError("values length must match ctr columns")

    @property
    def num_agents(self) -> int:
        return self.ctr.shape[1]

    @property
    def num_contexts(self) -> int:
        return self.ctr.shape[0]

    def stochastic_ctrs(self) -> np.ndarray:
        """Context-averaged CTR of every agent."""
        return np.array([stochastic_ctr(self, a) for a in range(self.num_agents)])


@dataclass(frozen=True)
class ExpertClass:
    """Finite class of experts; ``table[h, x]`` is the agent expert h picks on x."""

    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "table", np.asarray(self.table, dtype=np.int64))
        if self.table.ndim != 2:
            raise ValueError("expert table must be (num_experts, num_contexts)")

    @property
    def num_experts(self) -> int:
        return self.table.shape[0]

    @property
    def num_contexts(self) -> int:
        return self.table.shape[1]

    def recommendations(self, context: int) -> np.ndarray:
        """Arm recommended by every expert under one context."""
        return self.table[:, context]


@dataclass(frozen=True)
class ClickProbTable:
    """Per-(agent, expert) click probabilities, exact or estimated.

    ``values[a, h]`` is the probability agent ``a`` is clicked in a round
    where the principal follows expert ``h``.
    """

    values: np.ndarray
    kind: str = "exact"

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values))
        if self.kind not in ("exact", "estimated"):
            raise ValueError("kind must be 'exact' or 'estimated'")
        if self.values.ndim != 2:
            raise ValueError("values must be (num_agents, num_experts)")

    @property
    def num_agents(self) -> int:
        return self.values.shape[0]

    @property
    def num_experts(self) -> int:
        return self.values.shape[1]


def _check_index(i, n, what):
    if not 0 <= i < n:
        raise IndexError(f"{what} {i} out of range [0, {n})")


def induced_click_prob(instance: AuctionInstance, experts: ExpertClass, agent: int, expert: int):
    """Probability the agent is clicked when the principal always follows the expert."""
    _check_index(agent, instance.num_agents, "agent")
    _check_index(expert, experts.num_experts, "expert")
    total = 0
    for x in range(instance.num_contexts):
        if experts.table[expert, x] == agent:
            total = total + instance.context_probs[x] * instance.ctr[x, agent]
    return total


def exact_click_prob_table(instance: AuctionInstance, experts: ExpertClass) -> ClickProbTable:
    """Exact per-(agent, expert) click probability table."""
    K, m = instance.num_agents, experts.num_experts
    vals = np.zeros((K, m), dtype=instance.ctr.dtype if instance.ctr.dtype == object else np.float64)
    if instance.ctr.dtype == object:
        vals = np.zeros((K, m), dtype=object)
    for h in range(m):
        for a in range(K):
            vals[a, h] = induced_click_prob(instance, experts, a, h)
    return ClickProbTable(values=vals, kind="exact")


def expected_welfare(instance: AuctionInstance, experts: ExpertClass, expert: int, values=None):
    """Expected per-round welfare when the principal always follows the expert."""
    _check_index(expert, experts.num_experts, "expert")
    if values is None:
        values = instance.values
    total = 0
    for a in range(instance.num_agents):
        total = total + values[a] * induced_click_prob(instance, experts, a, expert)
    return total


def _table_values(table) -> np.ndarray:
    return table.values if isinstance(table, ClickProbTable) else np.asarray(table)


def reported_welfare(table, expert: int, bids):
    """Bid-weighted click probability of one expert: sum_a bids[a] * table[a, expert]."""
    vals = _table_values(table)
    total = 0
    for a in range(vals.shape[0]):
        total = total + bids[a] * vals[a, expert]
    return total


def best_expert(table, bids) -> int:
    """Expert maximizing reported welfare; ties go to the lowest index."""
    vals = _table_values(table)
    best, best_score = 0, reported_welfare(vals, 0, bids)
    for h in range(1, vals.shape[1]):
        score = reported_welfare(vals, h, bids)
        if score > best_score:
            best, best_score = h, score
    return best


def stochastic_ctr(instance: AuctionInstance, agent: int):
    """Context-averaged click-through-rate of one agent."""
    _check_index(agent, instance.num_agents, "agent")
    total = 0
    for x in range(instance.num_contexts):
        total = total + instance.context_probs[x] * instance.ctr[x, agent]
    return total


def is_preordered(experts: ExpertClass, num_agents: int) -> bool:
    """Whether every pair of experts has pointwise-comparable indicator
    vectors ``1{h(x) = a}`` over contexts, for every agent.

    Constant experts and two-arm threshold classes satisfy this; generic
    classes do not.
    """
    table = experts.table
    m = experts.num_experts
    for a in range(num_agents):
        hits = table == a  # (m, X) indicator rows
        for i in range(m):
            for j in range(i + 1, m):
                ge = np.all(hits[i] >= hits[j])
                le = np.all(hits[i] <= hits[j])
                if not (ge or le):
                    return False
    return True


def validate_instance(instance: AuctionInstance, experts: ExpertClass | None = None) -> list[str]:
    """All invariant violations as data; an empty list means the instance is valid."""
    out = []
    K, X = instance.num_agents, instance.num_contexts
    if K < 2:
        out.append(f"num_agents must be >= 2, got {K}")
    if instance.horizon < 0:
        out.append(f"horizon must be >= 0, got {instance.horizon}")
    probs = instance.context_probs
    if any(float(p) < 0 for p in probs):
        out.append("context_probs entries must be >= 0")
    total = 0
    for p in probs:
        total = total + p
    if abs(float(total) - 1.0) > PROB_SUM_TOL:
        out.append(f"context_probs must sum to 1 within {PROB_SUM_TOL}, got {float(total)!r}")
    for x in range(X):
        for a in range(K):
            v = float(instance.ctr[x, a])
            if not 0.0 <= v <= 1.0:
                out.append(f"ctr[{x},{a}]={v!r} outside [0, 1]")
    for a in range(K):
        v = float(instance.values[a])
        if not 0.0 <= v <= 1.0:
            out.append(f"values[{a}]={v!r} outside [0, 1]")
    if experts is not None:
        if experts.num_contexts != X:
            out.append(
                f"expert table has {experts.num_contexts} contexts, instance has {X}"
            )
        bad = (experts.table < 0) | (experts.table >= K)
        for h, x in zip(*np.nonzero(bad)):
            out.append(f"expert table[{h},{x}]={experts.table[h, x]} is not an agent index in [0, {K})")
    return out


def table_consistency_error(table: ClickProbTable, instance: AuctionInstance, experts: ExpertClass):
    """Max over experts of |sum_a table[a,h] - sum_x p(x) ctr[x, h(x)]|.

    Zero (exactly, for rational inputs) iff the table is the exact one.
    """
    worst = 0
    for h in range(experts.num_experts):
        col = 0
        for a in range(instance.num_agents):
            col = col + table.values[a, h]
        direct = 0
        for x in range(instance.num_contexts):
            direct = direct + instance.context_probs[x] * instance.ctr[x, experts.table[h, x]]
        err = abs(col - direct)
        if err > worst:
            worst = err
    return worst


# ---------------------------------------------------------------------------
# JSON interchange. Schema (all probabilities plain decimal numbers):
# {
#   "num_agents": K, "num_contexts": X,
#   "context_probs": [X floats], "ctr": [X rows of K floats],
#   "values": [K floats], "horizon": T,
#   "experts": [m rows of X agent indices]   # optional
# }
# ---------------------------------------------------------------------------


def instance_to_dict(instance: AuctionInstance, experts: ExpertClass | None = None) -> dict:
    doc = {
        "num_agents": instance.num_agents,
        "num_contexts": instance.num_contexts,
        "context_probs": [float(p) for p in instance.context_probs],
        "ctr": [[float(v) for v in row] for row in instance.ctr],
        "values": [float(v) for v in instance.values],
        "horizon": int(instance.horizon),
    }
    if experts is not None:
        doc["experts"] = [[int(a) for a in row] for row in experts.table]
    return doc


def instance_from_dict(doc: dict) -> tuple[AuctionInstance, ExpertClass | None]:
    problems = []
    for key in ("context_probs", "ctr", "values", "horizon"):
        if key not in doc:
            problems.append(f"missing field '{key}'")
    if problems:
        raise ValueError("invalid instance document: " + "; ".join(problems))
    inst = AuctionInstance(
        context_probs=np.array(doc["context_probs"], dtype=np.float64),
        ctr=np.array(doc["ctr"], dtype=np.float64),
        values=np.array(doc["values"], dtype=np.float64),
        horizon=int(doc["horizon"]),
    )
    for key in ("num_agents", "num_contexts"):
        if key in doc:
            got = inst.num_agents if key == "num_agents" else inst.num_contexts
            if int(doc[key]) != got:
                raise ValueError(f"declared {key}={doc[key]} but arrays imply {got}")
    experts = None
    if "experts" in doc:
        experts = ExpertClass(table=np.array(doc["experts"], dtype=np.int64))
    return inst, experts


def load_instance(path) -> tuple[AuctionInstance, ExpertClass | None]:
    with open(path) as fh:
        doc = json.load(fh)
    inst, experts = instance_from_dict(doc)
    violations = validate_instance(inst, experts)
    if violations:
        raise ValueError(f"{path}: " + "; ".join(violations))
    return inst, experts


def save_instance(path, instance: AuctionInstance, experts: ExpertClass | None = None) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance, experts), indent=2) + "\n")
