"""Instance generators: random graphs with assumption guarantees, minimax search, pursuit-evasion."""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse.csgraph import floyd_warshall

from .errors import RspError
from .graph import (
    DEST,
    Control,
    RspGraph,
    check_assumption,
    classify_policy,
    iter_policies,
    proper_policy_exists,
)

TARGETS = ("A1.1", "A4.3", "A5.1", None)


@dataclass(frozen=True)
class GenSpec:
    seed: int
    n_nodes: int = 4
    max_controls: int = 3
    max_branch: int = 3
    length_range: tuple = (-3, 9)
    assumption_target: str | None = "A1.1"
    require_zero_cycle: bool = False
    max_tries: int = 20_000


def _sample(rng: random.Random, spec: GenSpec, lo: int, hi: int) -> RspGraph:
    n = spec.n_nodes
    pool = [DEST, *range(1, n + 1)]
    rows = []
    for _ in range(n):
        ctrls = []
        for i in range(rng.randint(1, spec.max_controls)):
            k = rng.randint(1, min(spec.max_branch, len(pool)))
            succ = sorted(rng.sample(pool, k))
            ctrls.append(Control(f"u{i}", tuple((y, Fraction(rng.randint(lo, hi))) for y in succ)))
        rows.append(tuple(ctrls))
    return RspGraph(n, tuple(rows))


def has_zero_improper_cycle(g: RspGraph) -> bool:
    for mu in iter_policies(g):
        c = classify_policy(g, mu)
        if not c.is_proper and c.min_cycle_mean == 0:
            return True
    return False


def gen_random(spec: GenSpec) -> RspGraph:
    """Reproducible from ``spec.seed``; rejection-sampled until the target assumption holds."""
    if spec.assumption_target not in TARGETS:
        raise ValueError(f"unknown assumption target {spec.assumption_target!r}")
    rng = random.Random(spec.seed)
    lo, hi = spec.length_range
    if spec.assumption_target == "A5.1":
        lo = max(lo, 0)
    for _ in range(spec.max_tries):
        g = _sample(rng, spec, lo, hi)
        if spec.assumption_target is not None:
            if not proper_policy_exists(g)[0]:
                continue
            if not check_assumption(g, spec.assumption_target).holds:
                continue
        if spec.require_zero_cycle and not has_zero_improper_cycle(g):
            continue
        return g
    raise RspError(f"rejection budget of {spec.max_tries} samples exceeded")


def gen_search(
    seed: int,
    n: int,
    stop_cost_range: tuple = (0, 9),
    move_cost_range: tuple = (0, 0),
    continue_range: tuple = (1, 2),
    max_branch: int = 2,
    stop_costs=None,
) -> RspGraph:
    """Minimax search: at each node stop (go to t at cost s(x)) or continue to an
    adversarially chosen node among a sampled set."""
    if min(stop_cost_range) < 0 or min(move_cost_range) < 0:
        raise ValueError("stop and move costs must be nonnegative")
    rng = random.Random(seed)
    rows = []
    for x in range(1, n + 1):
        s = stop_costs[x - 1] if stop_costs is not None else rng.randint(*stop_cost_range)
        ctrls = [Control("stop", ((DEST, Fraction(s)),))]
        for i in range(rng.randint(*continue_range)):
            k = rng.randint(1, min(max_branch, n))
            succ = sorted(rng.sample(range(1, n + 1), k))
            ctrls.append(
                Control(f"go{i}", tuple((y, Fraction(rng.randint(*move_cost_range))) for y in succ))
            )
        rows.append(tuple(ctrls))
    return RspGraph(n, tuple(rows))


@dataclass(frozen=True)
class PursuitSpec:
    width: int
    height: int
    obstacles: frozenset = frozenset()
    pursuer_diagonal: bool = False


@dataclass(frozen=True)
class PursuitInstance:
    graph: RspGraph
    base: tuple
    states: tuple  # states[x - 1] = (pursuer cell, evader cell)
    cells: tuple
    nonforcible: tuple  # states from which no policy forces capture

    def node(self, z1, z2) -> int:
        return self.states.index((z1, z2)) + 1


_STEPS4 = (("N", (-1, 0)), ("S", (1, 0)), ("W", (0, -1)), ("E", (0, 1)))
_STEPS8 = _STEPS4 + (("NW", (-1, -1)), ("NE", (-1, 1)), ("SW", (1, -1)), ("SE", (1, 1)))


def _moves(cell, free, steps):
    r, c = cell
    out = [("stay", cell)]
    for name, (dr, dc) in steps:
        nxt = (r + dr, c + dc)
        if nxt in free:
            out.append((name, nxt))
    return out


def gen_pursuit(spec: PursuitSpec) -> PursuitInstance:
    """Product graph over (pursuer cell, evader cell).

    The pursuer (minimiser) moves first; the evader, knowing that move, picks
    its own among staying and the four neighbouring cells. Stepping onto the
    evader's cell captures, which also covers attempted swaps. Every move costs
    1; a capture state has a single control to t at cost 0.

    The base policy chases the evader's current cell along a shortest path
    (Floyd-Warshall distances over the pursuer's move graph).
    """
    cells = tuple(
        (r, c) for r in range(spec.height) for c in range(spec.width)
        if (r, c) not in spec.obstacles
    )
    free = set(cells)
    if not cells:
        raise ValueError("grid has no free cells")
    _require_connected(cells, free)

    p_steps = _STEPS8 if spec.pursuer_diagonal else _STEPS4
    index = {z: i for i, z in enumerate(cells)}
    adj = np.full((len(cells), len(cells)), np.inf)
    for z in cells:
        for _, z2 in _moves(z, free, p_steps):
            if z2 != z:
                adj[index[z], index[z2]] = 1
    dist = floyd_warshall(adj, directed=True)

    states = tuple((z1, z2) for z1 in cells for z2 in cells)
    node_of = {s: i + 1 for i, s in enumerate(states)}
    rows, base = [], []
    for z1, z2 in states:
        if z1 == z2:
            rows.append((Control("capture", ((DEST, Fraction(0)),)),))
            base.append(0)
            continue
        ctrls = []
        for name, p in _moves(z1, free, p_steps):
            if p == z2:
                succ = [node_of[(p, p)]]
            else:
                succ = sorted({node_of[(p, e)] for _, e in _moves(z2, free, _STEPS4)})
            ctrls.append(Control(name, tuple((y, Fraction(1)) for y in succ)))
        rows.append(tuple(ctrls))
        options = _moves(z1, free, p_steps)
        best = min(range(len(options)), key=lambda i: (dist[index[options[i][1]], index[z2]], i))
        base.append(best)
    g = RspGraph(len(states), tuple(rows))
    _, settled = proper_policy_exists(g)
    nonforcible = tuple(states[x - 1] for x in g.nodes if x not in settled)
    return PursuitInstance(g, tuple(base), states, cells, nonforcible)


def _require_connected(cells, free):
    start = cells[0]
    seen = {start}
    queue = deque([start])
    while queue:
        z = queue.popleft()
        for _, nxt in _moves(z, free, _STEPS4):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    if len(seen) != len(cells):
        raise RspError("disconnected grid")
