"""Solve problems whose improper cycles may have zero length by shrinking a uniform perturbation."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

from .bellman import CostVector, apply_T
from .dijkstra import dijkstra_run
from .errors import AssumptionViolation
from .evaluation import eval_proper
from .graph import Control, RspGraph, as_length, is_proper
from .vi import vi_from_infinity


def perturb_graph(g: RspGraph, delta: Real) -> RspGraph:
    """Add ``delta`` to every arc leaving a nondestination node."""
    delta = as_length(delta)
    if not delta > 0:
        raise ValueError(f"perturbation must be positive, got {delta}")
    rows = tuple(
        tuple(Control(c.name, tuple((y, w + delta) for y, w in c.arcs)) for c in row)
        for row in g.controls
    )
    return RspGraph(g.n, rows)


@dataclass
class PerturbationTrace:
    deltas: list = field(default_factory=list)
    costs: list = field(default_factory=list)  # optimal cost of each perturbed problem
    policies: list = field(default_factory=list)
    final: tuple | None = None


def solve_by_perturbation(
    g: RspGraph,
    delta0: Real = 1,
    shrink: Real = Fraction(1, 4),
    max_rounds: int = 20,
    use_dijkstra: bool = False,
) -> tuple[CostVector, tuple, PerturbationTrace]:
    """Optimal cost over proper policies only.

    Each round solves the delta-perturbed problem and takes its optimal
    policy. The loop stops when two consecutive rounds return the same policy
    and that policy's unperturbed cost J satisfies J = TJ, which certifies it
    as optimal among proper policies.
    """
    delta, shrink = as_length(delta0), as_length(shrink)
    if not (delta > 0 and 0 < shrink < 1):
        raise ValueError("need delta0 > 0 and 0 < shrink < 1")
    trace = PerturbationTrace()
    prev = None
    for _ in range(max_rounds):
        pg = perturb_graph(g, delta)
        if use_dijkstra and all(w >= 0 for w in pg.lengths()):
            J_delta, mu, _, _ = dijkstra_run(pg)
        else:
            J_delta, mu, _ = vi_from_infinity(pg)
        if not is_proper(g, mu):
            raise AssumptionViolation(f"perturbed problem returned improper policy {mu}")
        trace.deltas.append(delta)
        trace.costs.append(J_delta)
        trace.policies.append(mu)
        if mu == prev:
            J = eval_proper(g, mu)
            if apply_T(g, J) == J:
                trace.final = (J, mu)
                return J, mu, trace
        prev = mu
        delta = delta * shrink
    raise AssumptionViolation(f"policy did not stabilise within {max_rounds} rounds")
