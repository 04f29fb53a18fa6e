"""Graph and policy data model, policy subgraphs and their cycle structure."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from numbers import Real
from typing import Iterator, Mapping, NamedTuple, Sequence

import networkx as nx

from .errors import PolicyCapExceeded

# Node ids: 1..N for X, 0 for the destination t.
DEST = 0

INF = math.inf

Policy = tuple  # tuple[int, ...]; entry x-1 is the control index chosen at node x


def as_length(value) -> Real:
    """Coerce an arc length to the exact default representation."""
    if isinstance(value, (Fraction, float)):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a valid arc length")
    return Fraction(value)


@dataclass(frozen=True)
class Control:
    """A control u at some node: ordered successor set Y(x,u) with lengths g(x,u,y)."""

    name: str
    arcs: tuple  # tuple[tuple[int, Real], ...]

    @property
    def successors(self) -> tuple:
        return tuple(y for y, _ in self.arcs)

    def length(self, y: int) -> Real:
        for z, w in self.arcs:
            if z == y:
                return w
        raise KeyError(y)


@dataclass(frozen=True)
class RspGraph:
    """Nodes 1..n plus the destination DEST.

    ``controls[x - 1]`` holds the ordered controls of node x. The destination
    carries no controls; it is absorbing and cost-free.
    """

    n: int
    controls: tuple  # tuple[tuple[Control, ...], ...]

    @classmethod
    def build(cls, n: int, spec: Mapping[int, Sequence]) -> "RspGraph":
        """Build from ``{x: [(name, [(y, g), ...]), ...]}``; ``y`` may be ``"t"`` or 0."""
        rows = []
        for x in range(1, n + 1):
            ctrls = []
            for name, arcs in spec.get(x, ()):
                ctrls.append(
                    Control(str(name), tuple((_node_id(y), as_length(w)) for y, w in arcs))
                )
            rows.append(tuple(ctrls))
        return cls(n, tuple(rows))

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def U(self, x: int) -> tuple:
        return self.controls[x - 1]

    def Y(self, x: int, u: int) -> tuple:
        return self.controls[x - 1][u].successors

    def control_index(self, x: int, name: str) -> int:
        for i, c in enumerate(self.controls[x - 1]):
            if c.name == name:
                return i
        raise KeyError(f"node {x} has no control {name!r}")

    def lengths(self) -> Iterator[Real]:
        for row in self.controls:
            for c in row:
                for _, w in c.arcs:
                    yield w

    def max_abs_length(self) -> Real:
        return max((abs(w) for w in self.lengths()), default=Fraction(0))

    def policy_count(self) -> int:
        return math.prod(len(row) for row in self.controls)

    def check_policy(self, mu: Sequence[int]) -> None:
        if len(mu) != self.n:
            raise ValueError(f"policy has {len(mu)} entries, graph has {self.n} nodes")
        for x, u in zip(self.nodes, mu):
            if not 0 <= u < len(self.U(x)):
                raise ValueError(f"invalid control index {u} at node {x}")

    def policy_names(self, mu: Sequence[int]) -> tuple:
        return tuple(self.U(x)[u].name for x, u in zip(self.nodes, mu))


def _node_id(y) -> int:
    if y == "t" or y == DEST:
        return DEST
    return int(y)


def node_label(y: int) -> str:
    return "t" if y == DEST else str(y)


def validate_graph(g: RspGraph) -> list[str]:
    """Return a list of constraint violations; an empty list means the graph is well formed."""
    problems = []
    if g.n < 1:
        problems.append("graph must have at least one nondestination node")
    if len(g.controls) != g.n:
        problems.append(f"control table has {len(g.controls)} rows for {g.n} nodes")
    for x, row in enumerate(g.controls, start=1):
        if not row:
            problems.append(f"empty control set at node {x}")
        names = [c.name for c in row]
        if len(set(names)) != len(names):
            problems.append(f"duplicate control name at node {x}")
        for c in row:
            if not c.arcs:
                problems.append(f"empty successor set for control {c.name!r} at node {x}")
            seen = set()
            for y, w in c.arcs:
                if not (y == DEST or 1 <= y <= g.n):
                    problems.append(
                        f"dangling node {y} in control {c.name!r} at node {x}"
                    )
                if y in seen:
                    problems.append(f"duplicate successor {node_label(y)} in control {c.name!r} at node {x}")
                seen.add(y)
                if not isinstance(w, Real) or not math.isfinite(w):
                    problems.append(f"non-finite length on arc ({x},{node_label(y)}) control {c.name!r}")
    return problems


def iter_policies(g: RspGraph, cap: int | None = None) -> Iterator[Policy]:
    """Every policy once, lexicographic in control indices."""
    if cap is not None and g.policy_count() > cap:
        raise PolicyCapExceeded(f"{g.policy_count()} policies exceed cap {cap}")
    return itertools.product(*(range(len(row)) for row in g.controls))


@dataclass(frozen=True)
class PolicySubgraph:
    """The arc set A_mu together with the arc lengths under mu; (t,t) is implicit."""

    n: int
    arcs: Mapping  # (x, y) -> length

    def edges(self) -> frozenset:
        return frozenset(self.arcs)


def policy_subgraph(g: RspGraph, mu: Sequence[int]) -> PolicySubgraph:
    g.check_policy(mu)
    arcs = {}
    for x, u in zip(g.nodes, mu):
        for y, w in g.U(x)[u].arcs:
            arcs[(x, y)] = w
    return PolicySubgraph(g.n, arcs)


def _inner_arcs(sub: PolicySubgraph):
    return [(x, y, w) for (x, y), w in sub.arcs.items() if y != DEST]


def topological_order(sub: PolicySubgraph) -> list[int] | None:
    """Nodes of X ordered so that every arc goes from later to earlier; None if cyclic."""
    ts = TopologicalSorter({x: () for x in range(1, sub.n + 1)})
    for x, y, _ in _inner_arcs(sub):
        ts.add(x, y)  # x depends on its successor y
    try:
        return list(ts.static_order())
    except CycleError:
        return None


def is_proper(g: RspGraph, mu: Sequence[int]) -> bool:
    return topological_order(policy_subgraph(g, mu)) is not None


class CycleExtremes(NamedTuple):
    min_mean: Real  # +inf if acyclic
    max_mean: Real  # -inf if acyclic

    @property
    def has_cycles(self) -> bool:
        return self.min_mean != INF

    @property
    def all_positive(self) -> bool:
        return self.min_mean > 0

    @property
    def all_nonnegative(self) -> bool:
        return self.min_mean >= 0

    @property
    def all_negative(self) -> bool:
        return self.max_mean < 0

    @property
    def all_nonpositive(self) -> bool:
        return self.max_mean <= 0


def _karp_min_mean(nodes: list[int], arcs: list[tuple]) -> Real:
    """Minimum cycle mean of a strongly connected digraph (Karp)."""
    m = len(nodes)
    pos = {v: i for i, v in enumerate(nodes)}
    dist = [[None] * m for _ in range(m + 1)]
    dist[0][0] = Fraction(0)
    for k in range(1, m + 1):
        prev, cur = dist[k - 1], dist[k]
        for u, v, w in arcs:
            du = prev[pos[u]]
            if du is None:
                continue
            cand = du + w
            j = pos[v]
            if cur[j] is None or cand < cur[j]:
                cur[j] = cand
    best = None
    for j in range(m):
        if dist[m][j] is None:
            continue
        worst = None
        for k in range(m):
            if dist[k][j] is None:
                continue
            q = (dist[m][j] - dist[k][j]) / (m - k)
            if worst is None or q > worst:
                worst = q
        if best is None or worst < best:
            best = worst
    return best


def scc_cycle_means(n: int, arcs: list[tuple]) -> list[tuple[frozenset, Real, Real]]:
    """(component, min mean, max mean) for each strongly connected component with a cycle."""
    dg = nx.DiGraph()
    dg.add_nodes_from(range(1, n + 1))
    dg.add_weighted_edges_from(arcs)
    out = []
    for comp in nx.strongly_connected_components(dg):
        inner = [(u, v, w) for u, v, w in arcs if u in comp and v in comp]
        if not inner:
            continue
        nodes = sorted(comp)
        lo = _karp_min_mean(nodes, inner)
        hi = -_karp_min_mean(nodes, [(u, v, -w) for u, v, w in inner])
        out.append((frozenset(comp), lo, hi))
    return out


def cycle_extremes(sub: PolicySubgraph) -> CycleExtremes:
    """Minimum and maximum mean length over the directed cycles of A_mu within X."""
    comps = scc_cycle_means(sub.n, _inner_arcs(sub))
    if not comps:
        return CycleExtremes(INF, -INF)
    return CycleExtremes(min(c[1] for c in comps), max(c[2] for c in comps))


def reaches(sub: PolicySubgraph, targets) -> set[int]:
    """Nodes of X (and targets themselves) from which some node in ``targets`` is reachable."""
    preds: dict[int, list[int]] = {}
    for x, y in sub.arcs:
        preds.setdefault(y, []).append(x)
    seen = set(targets)
    stack = list(targets)
    while stack:
        y = stack.pop()
        for x in preds.get(y, ()):
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return seen


def destination_connected(sub: PolicySubgraph) -> bool:
    return reaches(sub, [DEST]) >= set(range(1, sub.n + 1))


@dataclass(frozen=True)
class PolicyClassification:
    is_proper: bool
    destination_connected: bool
    min_cycle_mean: Real
    max_cycle_mean: Real
    regular: bool

    @property
    def extremes(self) -> CycleExtremes:
        return CycleExtremes(self.min_cycle_mean, self.max_cycle_mean)


def classify_policy(g: RspGraph, mu: Sequence[int]) -> PolicyClassification:
    sub = policy_subgraph(g, mu)
    proper = topological_order(sub) is not None
    ext = cycle_extremes(sub)
    connected = destination_connected(sub)
    # proper policies satisfy the negative-cycle condition vacuously
    regular = connected and ext.max_mean < 0
    return PolicyClassification(proper, connected, ext.min_mean, ext.max_mean, regular)


def proper_policy_exists(g: RspGraph) -> tuple[bool, frozenset]:
    """Reachability fixpoint N_{k+1} = N_k + {x : some u has Y(x,u) inside N_k}, from N_0 = {t}."""
    settled = {DEST}
    changed = True
    while changed:
        changed = False
        for x in g.nodes:
            if x in settled:
                continue
            if any(set(c.successors) <= settled for c in g.U(x)):
                settled.add(x)
                changed = True
    return len(settled) == g.n + 1, frozenset(settled)


def some_proper_policy(g: RspGraph) -> Policy | None:
    """A proper policy read off the same fixpoint: at each node, the first control
    whose successors had all settled before it. None if no proper policy exists."""
    settled = {DEST}
    mu = [None] * g.n
    frontier = True
    while frontier:
        frontier = [
            (x, u) for x in g.nodes if x not in settled
            for u in [next((i for i, c in enumerate(g.U(x)) if set(c.successors) <= settled), None)]
            if u is not None
        ]
        for x, u in frontier:
            settled.add(x)
            mu[x - 1] = u
    return None if None in mu else tuple(mu)


def default_termination_cost(g: RspGraph) -> Real:
    top = max((w for w in g.lengths()), default=Fraction(0))
    return g.n * max(top, 0) + 1


def augment_termination(g: RspGraph, gbar: Real | None = None, name: str = "terminate") -> RspGraph:
    """Give every node an extra control going straight to t at cost ``gbar``."""
    if gbar is None:
        gbar = default_termination_cost(g)
    gbar = as_length(gbar)
    if not math.isfinite(gbar):
        raise ValueError("termination cost must be finite")
    rows = []
    for row in g.controls:
        used = {c.name for c in row}
        label = name
        while label in used:
            label += "_"
        rows.append(row + (Control(label, ((DEST, gbar),)),))
    return RspGraph(g.n, tuple(rows))


ASSUMPTIONS = ("A1.1", "A2.2", "A2.3", "A4.3", "A5.1")


@dataclass
class AssumptionReport:
    which: str
    holds: bool
    parts: dict = field(default_factory=dict)
    witness: Policy | None = None
    reason: str = ""


def check_assumption(g: RspGraph, which: str, cap: int = 10**6) -> AssumptionReport:
    """Decide a standing assumption by enumerating and classifying every policy.

    Exponential in the number of nodes; meant for small instances.
    """
    if which not in ASSUMPTIONS:
        raise ValueError(f"unknown assumption {which!r}; expected one of {ASSUMPTIONS}")
    rep = AssumptionReport(which, True)
    exists, _ = proper_policy_exists(g)
    nonneg = all(w >= 0 for w in g.lengths())

    def fail(part, reason, mu=None):
        rep.parts[part] = False
        if rep.holds:
            rep.holds = False
            rep.reason = reason
            rep.witness = mu

    if which in ("A1.1", "A4.3", "A5.1"):
        rep.parts["a"] = True
        if not exists:
            fail("a", "no proper policy exists")
        rep.parts["b"] = True
        for mu in iter_policies(g, cap):
            c = classify_policy(g, mu)
            if c.is_proper:
                continue
            ok = c.min_cycle_mean >= 0 if which == "A4.3" else c.min_cycle_mean > 0
            if not ok:
                sign = "negative" if which == "A4.3" else "nonpositive"
                fail("b", f"improper policy has a {sign}-length cycle", mu)
                break
        if which == "A5.1":
            rep.parts["c"] = nonneg
            if not nonneg:
                fail("c", "negative arc length present")
    elif which == "A2.2":
        for mu in iter_policies(g, cap):
            c = classify_policy(g, mu)
            if not c.regular:
                fail("all", "policy is improper and not (destination-connected with negative cycles)", mu)
                break
        rep.parts.setdefault("all", True)
    else:  # A2.3
        any_regular = False
        rep.parts["b"] = True
        for mu in iter_policies(g, cap):
            c = classify_policy(g, mu)
            if c.regular:
                any_regular = True
            elif not c.max_cycle_mean > 0:
                fail("b", "irregular policy without a positive-length cycle", mu)
        rep.parts["a"] = any_regular
        if not any_regular:
            fail("a", "no regular policy exists")
    return rep
