"""Ground truth by exhaustive policy enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .bellman import CostVector
from .errors import NoProperPolicyError
from .evaluation import eval_limsup, eval_proper
from .graph import PolicyClassification, RspGraph, classify_policy, iter_policies

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class PolicyRow:
    policy: tuple
    classification: PolicyClassification
    cost: CostVector


@dataclass
class OracleResult:
    j_hat: CostVector | None
    optimal_proper: tuple | None
    j_star_minimax: CostVector
    per_policy: list = field(default_factory=list)

    def optimal_proper_policies(self) -> list[tuple]:
        return [r.policy for r in self.per_policy
                if r.classification.is_proper and r.cost == self.j_hat]


def enumerate_policies(g: RspGraph, cap: int = DEFAULT_CAP) -> Iterator[tuple]:
    return iter_policies(g, cap)


def brute_force(
    g: RspGraph,
    horizon: int | None = None,
    cap: int = DEFAULT_CAP,
    require_proper: bool = True,
) -> OracleResult:
    """Evaluate every policy; minimise over all of them and over the proper ones.

    The proper-only minimum is taken node by node. Without an assumption on
    the cycles no single proper policy need attain it everywhere; then
    ``optimal_proper`` is None.
    """
    rows = []
    for mu in enumerate_policies(g, cap):
        c = classify_policy(g, mu)
        cost = eval_proper(g, mu) if c.is_proper else eval_limsup(g, mu, horizon).cost
        rows.append(PolicyRow(mu, c, cost))

    j_star = tuple(min(r.cost[i] for r in rows) for i in range(g.n))
    proper = [r for r in rows if r.classification.is_proper]
    if not proper:
        if require_proper:
            raise NoProperPolicyError("no proper policy exists")
        return OracleResult(None, None, j_star, rows)

    j_hat = tuple(min(r.cost[i] for r in proper) for i in range(g.n))
    attaining = next((r.policy for r in proper if r.cost == j_hat), None)
    return OracleResult(j_hat, attaining, j_star, rows)
