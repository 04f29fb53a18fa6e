"""Value iteration: synchronous, from J = +inf with finite termination, and asynchronous."""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Real
from typing import Sequence

from .bellman import (
    CostVector,
    apply_T,
    costs_equal,
    eval_H,
    greedy_policy,
    inf_vector,
    sup_distance,
)
from .errors import AssumptionViolation, NoProperPolicyError
from .graph import DEST, INF, RspGraph
from .schedule import Schedule


@dataclass
class ViTrace:
    iterates: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    layer_sets: list | None = None


def layer_sets(g: RspGraph, mu: Sequence[int]) -> list[frozenset]:
    """X_0 = {t}; X_{k+1} = nodes outside the earlier sets all of whose mu-successors are in them.

    Stops at the first empty set. For a proper policy the sets cover X and t.
    """
    layers = [frozenset((DEST,))]
    done = {DEST}
    while True:
        nxt = frozenset(
            x for x in g.nodes
            if x not in done and set(g.Y(x, mu[x - 1])) <= done
        )
        if not nxt:
            return layers
        layers.append(nxt)
        done |= nxt


def vi_from_infinity(g: RspGraph) -> tuple[CostVector, tuple, ViTrace]:
    """J_0 = +inf, J_{k+1} = T J_k until two iterates coincide.

    Settling must happen within N sweeps; anything slower means the instance
    violates the standing assumptions.
    """
    J = inf_vector(g.n)
    trace = ViTrace(iterates=[J])
    for k in range(g.n + 1):
        nxt = apply_T(g, J)
        if nxt == J:
            trace.iterations = k
            trace.converged = True
            break
        J = nxt
        trace.iterates.append(J)
    else:
        raise AssumptionViolation(
            f"iterates from J = inf did not settle within {g.n} sweeps (finite termination bound exceeded)"
        )
    if any(v == INF for v in J):
        bad = [x for x in g.nodes if J[x - 1] == INF]
        raise NoProperPolicyError(f"no proper policy reaches t from nodes {bad}")
    mu = greedy_policy(g, J)
    trace.layer_sets = layer_sets(g, mu)
    return J, mu, trace


def vi(
    g: RspGraph,
    J0: Sequence,
    tol: Real = 0,
    max_iter: int = 10_000,
) -> tuple[CostVector, ViTrace]:
    """Iterate T from J0. Exact mode stops on equality; with ``tol > 0`` it stops
    after two consecutive sweeps move less than ``tol``."""
    J = tuple(J0)
    trace = ViTrace(iterates=[J])
    calm = 0
    for k in range(1, max_iter + 1):
        nxt = apply_T(g, J)
        trace.iterates.append(nxt)
        trace.iterations = k
        if tol:
            calm = calm + 1 if sup_distance(nxt, J) <= tol else 0
            done = calm >= 2
        else:
            done = nxt == J
        J = nxt
        if done:
            trace.converged = True
            break
    return J, trace


def vi_async(
    g: RspGraph,
    schedule: Schedule,
    J0: Sequence | None = None,
    max_events: int = 1_000_000,
) -> tuple[CostVector, ViTrace]:
    """Replay ``schedule`` cyclically; each event sets J(x) = (TJ)(x) on its node set.

    Nodes of one event are updated from the values seen before the event.
    Stops once a whole fairness window passes without any change.
    """
    schedule.check_fair(g.n)
    J = list(inf_vector(g.n) if J0 is None else J0)
    trace = ViTrace(iterates=[tuple(J)])
    W = schedule.fair_window
    quiet = 0
    for step in range(max_events):
        nodes, _ = schedule.events[step % len(schedule.events)]
        snapshot = tuple(J)
        changed = False
        for x in nodes:
            val = min(eval_H(g, x, u, snapshot) for u in range(len(g.U(x))))
            if val != J[x - 1]:
                J[x - 1] = val
                changed = True
        trace.iterations = step + 1
        if changed:
            quiet = 0
            trace.iterates.append(tuple(J))
        else:
            quiet += 1
            if quiet >= W:
                trace.converged = True
                break
    return tuple(J), trace


def is_fixed_point(g: RspGraph, J: Sequence, tol: Real = 0) -> bool:
    return costs_equal(apply_T(g, J), J, tol)
