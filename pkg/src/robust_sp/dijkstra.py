"""Dijkstra-like label setting for nonnegative arc lengths.

Labels enter the permanent set W one node at a time, in nondecreasing order.
A control u at x becomes usable only once its whole successor set Y(x,u) is
permanent, and it is examined in the iteration where its last successor
enters W.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace

from .bellman import CostVector, greedy_policy
from .errors import AssumptionViolation, RspError
from .graph import DEST, INF, RspGraph


class PrematureExhaustion(AssumptionViolation):
    """V ran empty before every node became permanent."""


@dataclass(frozen=True)
class LabelState:
    J: tuple  # labels indexed 0..N; index 0 is t
    V: frozenset
    W: frozenset
    heap: tuple = ()  # (label, node) entries, possibly stale
    order: tuple = ()  # W-entry order
    entry_labels: tuple = ()
    iterations: int = 0


def dijkstra_init(g: RspGraph) -> LabelState:
    J = (0,) + (INF,) * g.n
    return LabelState(J, frozenset((DEST,)), frozenset(), ((0, DEST),))


def _pop_min(heap: list, V: frozenset, J: tuple) -> int:
    while heap:
        label, y = heapq.heappop(heap)
        if y in V and J[y] == label:
            return y
    raise RspError("candidate heap out of sync")


def dijkstra_iterate(g: RspGraph, s: LabelState) -> LabelState:
    """Move the minimum-label candidate y* into W and relax the controls it completes.

    Ties go to the lowest node id, with t (id 0) first.
    """
    if not s.V:
        raise RspError("iterate called with empty candidate set")
    heap = list(s.heap)
    J = list(s.J)
    y_star = _pop_min(heap, s.V, s.J)
    W = s.W | {y_star}
    V = set(s.V - {y_star})
    for x in g.nodes:
        if x in W:
            continue
        best = None
        for c in g.U(x):
            succ = c.successors
            if y_star not in succ or not all(y in W for y in succ):
                continue
            val = max(w + J[y] for y, w in c.arcs)
            if best is None or val < best:
                best = val
        if best is not None and best < J[x]:
            J[x] = best
            V.add(x)
            heapq.heappush(heap, (best, x))
    return replace(
        s,
        J=tuple(J),
        V=frozenset(V),
        W=frozenset(W),
        heap=tuple(heap),
        order=s.order + (y_star,),
        entry_labels=s.entry_labels + (s.J[y_star],),
        iterations=s.iterations + 1,
    )


@dataclass
class DijkstraTrace:
    states: list = field(default_factory=list)

    @property
    def entry_order(self) -> tuple:
        return self.states[-1].order

    @property
    def entry_labels(self) -> tuple:
        return self.states[-1].entry_labels

    @property
    def iterations(self) -> int:
        return self.states[-1].iterations


def dijkstra_run(g: RspGraph, keep_states: bool = False) -> tuple[CostVector, tuple, tuple, DijkstraTrace]:
    """Run to exhaustion of V. Returns labels, greedy policy, W-entry order, trace.

    Exactly N+1 iterations are required; fewer means some node could never be
    labelled, which contradicts the existence of a proper policy.
    """
    s = dijkstra_init(g)
    trace = DijkstraTrace([s])
    while s.V:
        s = dijkstra_iterate(g, s)
        if keep_states:
            trace.states.append(s)
    if not keep_states:
        trace.states.append(s)
    if s.iterations != g.n + 1:
        missing = sorted(set(g.nodes) - s.W)
        raise PrematureExhaustion(
            f"candidate set emptied after {s.iterations} iterations; nodes {missing} never labelled"
        )
    J = s.J[1:]
    return J, greedy_policy(g, J), s.order, trace
