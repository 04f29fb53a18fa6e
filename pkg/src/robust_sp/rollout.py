"""One-step lookahead (rollout) from a proper base policy."""

from __future__ import annotations

from dataclasses import dataclass

from .bellman import CostVector, eval_H
from .errors import ImproperPolicyError
from .evaluation import eval_proper
from .graph import RspGraph


@dataclass(frozen=True)
class RolloutPlan:
    base: tuple
    base_cost: CostVector
    improved: tuple


def _lookahead(g: RspGraph, base_cost, x: int) -> int:
    best_u, best = 0, None
    for u in range(len(g.U(x))):
        h = eval_H(g, x, u, base_cost)
        if best is None or h < best:
            best_u, best = u, h
    return best_u


def rollout_policy(g: RspGraph, base) -> RolloutPlan:
    """The base cost is computed once; the improved policy is greedy against it."""
    try:
        cost = eval_proper(g, base)
    except ImproperPolicyError:
        raise ImproperPolicyError("rollout base policy must be proper") from None
    improved = tuple(_lookahead(g, cost, x) for x in g.nodes)
    return RolloutPlan(tuple(base), cost, improved)


def rollout_control(g: RspGraph, plan: RolloutPlan, x: int) -> int:
    """On-line form: the rollout control at a single node, from the cached base cost."""
    if not 1 <= x <= g.n:
        raise ValueError(f"node {x} not in X")
    return _lookahead(g, plan.base_cost, x)
