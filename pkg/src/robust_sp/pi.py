"""Policy iteration over proper policies, and asynchronous optimistic PI with a threshold V."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .bellman import CostVector, apply_T, constant_vector, eval_H, greedy_policy
from .errors import AssumptionViolation, ImproperPolicyError
from .evaluation import eval_proper
from .graph import RspGraph, default_termination_cost, is_proper
from .schedule import EVALUATE, IMPROVE, Schedule


@dataclass
class PiTrace:
    policies: list = field(default_factory=list)
    costs: list = field(default_factory=list)
    iterations: int = 0


def pi_proper(g: RspGraph, mu0: Sequence[int], max_iter: int | None = None) -> tuple[CostVector, tuple, PiTrace]:
    """Evaluate, improve greedily, repeat until J_mu = T J_mu.

    Every generated policy must be proper; an improper one means the
    positive-cycle assumption does not hold.
    """
    mu = tuple(mu0)
    if not is_proper(g, mu):
        raise ImproperPolicyError("initial policy must be proper")
    trace = PiTrace()
    limit = max_iter or g.policy_count() + 1
    for _ in range(limit):
        try:
            J = eval_proper(g, mu)
        except ImproperPolicyError:
            raise AssumptionViolation(f"improper policy generated: {mu}") from None
        trace.policies.append(mu)
        trace.costs.append(J)
        trace.iterations += 1
        TJ = apply_T(g, J)
        if TJ == J:
            return J, mu, trace
        mu = greedy_policy(g, J)
    raise AssumptionViolation(f"policy iteration did not terminate in {limit} iterations")


@dataclass
class AsyncPiState:
    J: CostVector
    V: CostVector
    mu: tuple
    partition: list | None = None

    @classmethod
    def default(cls, g: RspGraph, partition=None) -> "AsyncPiState":
        top = constant_vector(g.n, default_termination_cost(g))
        return cls(top, top, (0,) * g.n, partition)


@dataclass
class AsyncPiTrace:
    events: int = 0
    converged: bool = False
    policies_seen: int = 0
    peak: object = None  # largest |J| value seen


def pi_async(
    g: RspGraph,
    schedule: Schedule,
    init: AsyncPiState | None = None,
    use_threshold: bool = True,
    max_events: int = 1_000_000,
) -> tuple[CostVector, tuple, AsyncPiTrace]:
    """Asynchronous optimistic policy iteration.

    Improvement on block S: J(x) = V(x) = min_u H(x,u,min[V,J]), mu(x) = argmin.
    Evaluation on block S: J(x) = H(x,mu(x),min[V,J]); V and mu untouched.

    ``use_threshold=False`` replaces min[V,J] with J. That variant exists only
    to show what goes wrong without V.
    """
    init = init or AsyncPiState.default(g)
    schedule.check_fair(g.n, required=(IMPROVE,))
    if init.partition is not None:
        blocks = {frozenset(b) for b in init.partition}
        covered = sorted(x for b in blocks for x in b)
        if covered != list(g.nodes):
            raise ValueError("partition must cover the nodes disjointly")
        for nodes, _ in schedule.events:
            if nodes not in blocks:
                raise ValueError(f"event on {sorted(nodes)} is not a partition block")

    J, V, mu = list(init.J), list(init.V), list(init.mu)
    g.check_policy(mu)
    trace = AsyncPiTrace()
    seen_policies = {tuple(mu)}
    W = schedule.fair_window
    quiet = 0
    for step in range(max_events):
        nodes, phase = schedule.events[step % len(schedule.events)]
        arg = tuple(min(v, j) for v, j in zip(V, J)) if use_threshold else tuple(J)
        changed = False
        for x in nodes:
            i = x - 1
            if phase == IMPROVE:
                best_u, best = 0, None
                for u in range(len(g.U(x))):
                    h = eval_H(g, x, u, arg)
                    if best is None or h < best:
                        best_u, best = u, h
                if (J[i], V[i], mu[i]) != (best, best, best_u):
                    changed = True
                J[i] = V[i] = best
                mu[i] = best_u
            else:
                val = eval_H(g, x, mu[i], arg)
                if val != J[i]:
                    changed = True
                J[i] = val
        trace.events = step + 1
        if changed:
            quiet = 0
            seen_policies.add(tuple(mu))
            big = max(abs(v) for v in J)
            if trace.peak is None or big > trace.peak:
                trace.peak = big
        else:
            quiet += 1
            if quiet >= W and J == V and tuple(J) == apply_T(g, J):
                trace.converged = True
                break
    trace.policies_seen = len(seen_policies)
    return tuple(J), tuple(mu), trace


__all__ = ["pi_proper", "pi_async", "AsyncPiState", "PiTrace", "AsyncPiTrace", "IMPROVE", "EVALUATE"]
