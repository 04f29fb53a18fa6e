"""Random search for instances where asynchronous PI without the V threshold
fails to converge under a schedule on which the thresholded version converges.

Each trial draws a small graph, an initial (J, V, mu) with V = J, and a
schedule of one improvement followed by m evaluations of all nodes.

    python3 scripts/find_ablation.py --seed 0 --trials 20000
"""

import argparse
import random
from fractions import Fraction

from robust_sp.errors import RspError
from robust_sp.instances import GenSpec, gen_random
from robust_sp.oracle import brute_force
from robust_sp.pi import AsyncPiState, pi_async
from robust_sp.schedule import EVALUATE, IMPROVE, Schedule


def trial(rng: random.Random):
    n = rng.randint(1, 3)
    target = rng.choice(["A1.1", "A4.3", None])
    try:
        g = gen_random(GenSpec(seed=rng.randrange(10**6), n_nodes=n, max_controls=2,
                               max_branch=2, length_range=(-3, 5),
                               assumption_target=target, max_tries=500))
        o = brute_force(g)
    except RspError:
        return None
    every = frozenset(g.nodes)
    sched = Schedule.of([(every, IMPROVE)] + [(every, EVALUATE)] * rng.randint(1, 4))
    J = tuple(Fraction(rng.randint(-15, 15)) for _ in g.nodes)
    mu = tuple(rng.randrange(len(g.U(x))) for x in g.nodes)
    init = AsyncPiState(J, J, mu)
    Ja, _, ta = pi_async(g, sched, init, max_events=2000)
    if not (ta.converged and Ja in (o.j_hat, o.j_star_minimax)):
        return None
    _, _, tb = pi_async(g, sched, init, use_threshold=False, max_events=10_000)
    if tb.converged:
        return None
    return target, g, sched, init


def main(argv=None):
    ap = argparse.ArgumentParser(description="search for a threshold ablation witness")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=20000)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    for k in range(args.trials):
        hit = trial(rng)
        if hit:
            target, g, sched, init = hit
            print(f"trial {k}: witness on a {target} instance")
            print(g)
            print(sched)
            print(init)
            return 0
    print("no witness found")
    return 1


if __name__ == "__main__":
    raise SystemExit(main())
