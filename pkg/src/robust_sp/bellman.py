"""Extended-real cost vectors and the mappings H, T_mu and T.

A cost vector is a tuple indexed by node x at position x-1. Values are
Fractions (or floats in floating mode) and the infinities ``math.inf`` /
``-math.inf``. The destination is never stored: every operation reads it as 0.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Real
from typing import Sequence

from .errors import IndeterminateSum
from .graph import DEST, INF, RspGraph

CostVector = tuple


def xadd(a: Real, b: Real) -> Real:
    """Extended-real addition; (+inf) + (-inf) is an error."""
    if (a == INF and b == -INF) or (a == -INF and b == INF):
        raise IndeterminateSum("indeterminate extended sum: (+inf) + (-inf)")
    return a + b


def zero_vector(n: int) -> CostVector:
    return (Fraction(0),) * n


def inf_vector(n: int) -> CostVector:
    return (INF,) * n


def constant_vector(n: int, value) -> CostVector:
    return (value if isinstance(value, (Fraction, float)) else Fraction(value),) * n


def tilde(J: Sequence, y: int) -> Real:
    return 0 if y == DEST else J[y - 1]


def eval_H(g: RspGraph, x: int, u: int, J: Sequence) -> Real:
    """H(x,u,J) = max over y in Y(x,u) of g(x,u,y) + J~(y)."""
    return max(xadd(w, tilde(J, y)) for y, w in g.U(x)[u].arcs)


def apply_Tmu(g: RspGraph, mu: Sequence[int], J: Sequence) -> CostVector:
    return tuple(eval_H(g, x, mu[x - 1], J) for x in g.nodes)


def _best(g: RspGraph, x: int, J: Sequence) -> tuple[int, Real]:
    best_u, best = 0, None
    for u in range(len(g.U(x))):
        h = eval_H(g, x, u, J)
        if best is None or h < best:
            best_u, best = u, h
    return best_u, best


def apply_T(g: RspGraph, J: Sequence) -> CostVector:
    return tuple(_best(g, x, J)[1] for x in g.nodes)


def greedy_policy(g: RspGraph, J: Sequence) -> tuple:
    """Lowest-index control attaining min_u H(x,u,J) at every node."""
    return tuple(_best(g, x, J)[0] for x in g.nodes)


def sup_distance(a: Sequence, b: Sequence) -> Real:
    d = 0
    for p, q in zip(a, b):
        if p == q:
            continue
        if math.isinf(p) or math.isinf(q):
            return INF
        d = max(d, abs(p - q))
    return d


def costs_equal(a: Sequence, b: Sequence, tol: Real = 0) -> bool:
    """Exact equality when ``tol`` is 0, sup-norm within ``tol`` otherwise."""
    if len(a) != len(b):
        return False
    if not tol:
        return tuple(a) == tuple(b)
    return sup_distance(a, b) <= tol


def leq(a: Sequence, b: Sequence) -> bool:
    return all(p <= q for p, q in zip(a, b))


def format_value(v: Real) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    if isinstance(v, float):
        return repr(v)
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
