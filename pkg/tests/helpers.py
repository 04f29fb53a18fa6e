"""Shared fixtures, suites, and independent reference computations for the tests.

The reference routines here deliberately avoid the package's own machinery:
walks and paths are enumerated directly and cycles come from networkx.
"""

from __future__ import annotations

import functools
import random
from fractions import Fraction
from pathlib import Path

import networkx as nx

from robust_sp.graph import DEST, RspGraph, iter_policies, is_proper, policy_subgraph
from robust_sp.instances import GenSpec, gen_random, gen_search, has_zero_improper_cycle

FIXTURES = Path(__file__).parent / "fixtures"


def selfloop(a) -> RspGraph:
    """One node; its single control lets the opponent stay (length a) or terminate (0)."""
    return RspGraph.build(1, {1: [("mu", [(1, a), ("t", 0)])]})


def two_policy(a) -> RspGraph:
    """Improper ``mu`` (self-loop of length a, exit 0) versus proper ``mubar`` (exit 1)."""
    return RspGraph.build(1, {1: [("mu", [(1, a), ("t", 0)]), ("mubar", [("t", 1)])]})


def zero_cycle() -> RspGraph:
    return RspGraph.build(1, {1: [("stay", [(1, 0)]), ("move", [("t", 1)])]})


def chain(a=2, b=3) -> RspGraph:
    return RspGraph.build(2, {1: [("go", [(2, a)])], 2: [("go", [("t", b)])]})


def layered4() -> RspGraph:
    """Four nodes, each with a one-successor and a two-successor control.

    Built so the optimal policy has layers {1}, {4}, {3}, {2}: VI from +inf
    needs four sweeps, while one pass in the order 1, 4, 3, 2 is enough.
    """
    return RspGraph.build(4, {
        1: [("a", [("t", 3)]), ("b", [(2, 1), ("t", 1)])],
        2: [("a", [(1, 5)]), ("b", [(3, 1), ("t", 1)])],
        3: [("a", [(2, 1)]), ("b", [(4, 1), ("t", 1)])],
        4: [("a", [(3, 4)]), ("b", [(1, 1), ("t", 1)])],
    })


# the V-free asynchronous PI oscillates on this instance; see test_pi
ABLATION_GRAPH = RspGraph.build(2, {
    1: [("u0", [(1, 2), (2, 3)]), ("u1", [("t", 3), (2, -1)])],
    2: [("u0", [(1, 1)]), ("u1", [("t", 5)])],
})


# ------------------------------------------------------------------ suites

SUITE_SIZE = 500


@functools.lru_cache(maxsize=None)
def a11_instance(seed: int) -> RspGraph:
    """Suite member: N = 1 + seed mod 5, up to 3 controls and 3 successors, lengths in [-3, 9]."""
    return gen_random(GenSpec(seed=seed, n_nodes=1 + seed % 5, max_controls=3,
                              max_branch=3, length_range=(-3, 9), assumption_target="A1.1"))


@functools.lru_cache(maxsize=None)
def a11_oracle(seed: int):
    from robust_sp.oracle import brute_force
    return brute_force(a11_instance(seed))


def zero_cycle_instance(i: int) -> RspGraph:
    """Alternates random A4.3 graphs and minimax search graphs with free moves;
    every member has at least one improper policy with a zero-length cycle."""
    rng = random.Random(10_000 + i)
    while True:
        if i % 2 == 0:
            g = gen_random(GenSpec(seed=rng.randrange(10**9), n_nodes=rng.randint(1, 4),
                                   max_controls=3, max_branch=2, length_range=(-2, 4),
                                   assumption_target="A4.3", require_zero_cycle=True))
        else:
            g = gen_search(rng.randrange(10**9), rng.randint(1, 5), stop_cost_range=(0, 9),
                           move_cost_range=(0, 0))
        if has_zero_improper_cycle(g):
            return g


def proper_policies(g: RspGraph) -> list[tuple]:
    return [mu for mu in iter_policies(g) if is_proper(g, mu)]


# ------------------------------------------------------ reference routines

def walks_terminate(g: RspGraph, mu) -> bool:
    """Every walk in A_mu from every node reaches t within N arcs."""
    sub = policy_subgraph(g, mu)
    succ = {}
    for x, y in sub.arcs:
        succ.setdefault(x, []).append(y)
    frontier = set(g.nodes)
    for _ in range(g.n):
        frontier = {y for x in frontier for y in succ[x] if y != DEST}
    return not frontier


def longest_path_by_enumeration(g: RspGraph, mu) -> tuple:
    """Max over every x-to-t path in an acyclic A_mu, by explicit DFS."""
    def best(x):
        top = None
        for y, w in g.U(x)[mu[x - 1]].arcs:
            v = w if y == DEST else w + best(y)
            top = v if top is None else max(top, v)
        return top
    return tuple(best(x) for x in g.nodes)


def cycle_means_nx(g: RspGraph, mu) -> list:
    sub = policy_subgraph(g, mu)
    dg = nx.DiGraph()
    for (x, y), w in sub.arcs.items():
        if y != DEST:
            dg.add_edge(x, y, w=w)
    means = []
    for cyc in nx.simple_cycles(dg):
        total = sum(dg[cyc[i]][cyc[(i + 1) % len(cyc)]]["w"] for i in range(len(cyc)))
        means.append(Fraction(total) / len(cyc))
    return means


def nx_reaches_t(g: RspGraph, mu) -> bool:
    dg = nx.DiGraph()
    dg.add_nodes_from([DEST, *g.nodes])
    dg.add_edges_from(policy_subgraph(g, mu).arcs)
    return all(nx.has_path(dg, x, DEST) for x in g.nodes)


def capture_times(spec):
    """Worst-case capture time per (pursuer, evader) cell pair, computed directly
    on the grid by retrograde iteration; inf where the evader can escape forever."""
    free = {(r, c) for r in range(spec.height) for c in range(spec.width)} - set(spec.obstacles)
    four = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    eight = four + [(-1, -1), (-1, 1), (1, -1), (1, 1)]

    def nbrs(z, steps):
        return [z] + [(z[0] + a, z[1] + b) for a, b in steps if (z[0] + a, z[1] + b) in free]

    pstep = eight if spec.pursuer_diagonal else four
    V = {(p, e): (0 if p == e else float("inf")) for p in free for e in free}
    while True:
        new = {}
        for (p, e), v in V.items():
            if p == e:
                new[p, e] = 0
                continue
            best = float("inf")
            for p2 in nbrs(p, pstep):
                worst = 0 if p2 == e else max(V[p2, e2] for e2 in nbrs(e, four))
                best = min(best, worst)
            new[p, e] = 1 + best
        if new == V:
            return V
        V = new
