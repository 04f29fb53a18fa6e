"""Policy evaluation: longest paths for proper policies, limsup semantics for improper ones."""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Real
from typing import Sequence

from .bellman import CostVector, apply_Tmu, costs_equal, tilde, zero_vector
from .errors import ImproperPolicyError
from .graph import (
    DEST,
    INF,
    RspGraph,
    policy_subgraph,
    reaches,
    scc_cycle_means,
    topological_order,
)


@dataclass(frozen=True)
class EvalResult:
    cost: CostVector
    method: str  # "acyclic-longest-path" or "limsup-window"
    horizon_used: int = 0
    period: int = 0


def eval_proper(g: RspGraph, mu: Sequence[int]) -> CostVector:
    """J_mu by one backward pass over the acyclic subgraph A_mu."""
    sub = policy_subgraph(g, mu)
    order = topological_order(sub)
    if order is None:
        raise ImproperPolicyError("policy not proper: its subgraph has a cycle")
    J = [None] * g.n
    for x in order:  # successors come first
        J[x - 1] = max(w + tilde(J, y) for y, w in g.U(x)[mu[x - 1]].arcs)
    return tuple(J)


def eval_limsup(
    g: RspGraph,
    mu: Sequence[int],
    horizon: int | None = None,
    max_steps: int = 200_000,
) -> EvalResult:
    """J_mu(x) = limsup_k (T_mu^k 0)(x) for any policy.

    Nodes that can reach a positive-length cycle of A_mu are +inf. Nodes that
    reach neither t nor a zero-length cycle are -inf. The rest are finite:
    V_k = T_mu^k 0 is iterated for at least ``horizon`` steps (default 4N) and
    until the finite part is provably periodic; the value is the maximum over
    one period.
    """
    n = g.n
    K = 4 * n if horizon is None else horizon
    sub = policy_subgraph(g, mu)
    inner = [(x, y, w) for (x, y), w in sub.arcs.items() if y != DEST]
    comps = scc_cycle_means(n, inner)

    positive = [v for comp, _, hi in comps if hi > 0 for v in comp]
    plus = reaches(sub, positive) - {DEST}
    zero = [v for comp, _, hi in comps if hi == 0 for v in comp]
    finite = (reaches(sub, [DEST, *zero]) - {DEST}) - plus
    minus = set(g.nodes) - plus - finite

    weights = list(sub.arcs.values())
    gmax = max(max(weights), 0)
    gmin = min(min(weights), 0)
    bound = n * g.max_abs_length()
    floor_finite = 2 * n * gmin
    # max cycle mean inside the -inf region; every cycle there is negative
    rate = max((hi for comp, _, hi in comps if comp <= minus), default=None)
    leaks = [(x, y, w) for x, y, w in inner if x in finite and y in minus]

    def dominated(k: int) -> bool:
        if k < n:
            return False
        if not leaks:
            return True
        ceiling = (n - 1) * gmax + rate * (k - n + 1)
        return all(w + ceiling < floor_finite for _, _, w in leaks)

    fin = sorted(finite)
    V = zero_vector(n)
    history: list[CostVector] = [V]
    seen: dict[tuple, int] = {}
    period_start = period = None
    k = 0
    while True:
        if k >= K and dominated(k):
            state = tuple(V[x - 1] for x in fin)
            if state in seen:
                period_start, period = seen[state], k - seen[state]
                break
            seen[state] = k
        if k >= max_steps:
            raise RuntimeError(f"limsup evaluation not certified within {max_steps} steps")
        V = apply_Tmu(g, mu, V)
        k += 1
        history.append(V)
        for x in fin:
            if V[x - 1] > bound:
                raise AssertionError("finite-cost node exceeded the simple-walk bound")

    cost = []
    for x in g.nodes:
        if x in plus:
            cost.append(INF)
        elif x in minus:
            cost.append(-INF)
        else:
            cost.append(max(history[j][x - 1] for j in range(period_start, period_start + period)))
    return EvalResult(tuple(cost), "limsup-window", k, period)


def evaluate(g: RspGraph, mu: Sequence[int], horizon: int | None = None) -> EvalResult:
    """eval_proper when the policy is proper, eval_limsup otherwise."""
    try:
        return EvalResult(eval_proper(g, mu), "acyclic-longest-path")
    except ImproperPolicyError:
        return eval_limsup(g, mu, horizon)


def verify_bellman(g: RspGraph, mu: Sequence[int], J: Sequence, tol: Real = 0) -> bool:
    return costs_equal(apply_Tmu(g, mu, J), J, tol)
