"""Solve small pursuit-evasion grids and compare the chase policy with its rollout.

    python3 scripts/pursuit_demo.py [--width 3 --height 1] [--diagonal]
"""

import argparse

from robust_sp.evaluation import eval_proper
from robust_sp.instances import PursuitSpec, gen_pursuit
from robust_sp.rollout import rollout_policy
from robust_sp.vi import vi_from_infinity


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--width", type=int, default=3)
    ap.add_argument("--height", type=int, default=1)
    ap.add_argument("--diagonal", action="store_true", help="pursuer also moves diagonally")
    args = ap.parse_args(argv)

    inst = gen_pursuit(PursuitSpec(args.width, args.height, pursuer_diagonal=args.diagonal))
    g = inst.graph
    if inst.nonforcible:
        print(f"capture cannot be forced from {len(inst.nonforcible)} states, e.g.")
        for z1, z2 in inst.nonforcible[:4]:
            print(f"  pursuer {z1} evader {z2}")
        print("try --diagonal")
        return 3
    J, mu, trace = vi_from_infinity(g)
    plan = rollout_policy(g, inst.base)
    rolled = eval_proper(g, plan.improved)
    print(f"{g.n} states, value iteration settled in {trace.iterations} sweeps")
    print(f"{'pursuer':>8} {'evader':>8} {'optimal':>8} {'chase':>6} {'rollout':>8}  move")
    for x, (z1, z2) in enumerate(inst.states, start=1):
        if z1 == z2:
            continue
        move = g.U(x)[mu[x - 1]].name
        print(f"{str(z1):>8} {str(z2):>8} {str(J[x - 1]):>8} {str(plan.base_cost[x - 1]):>6} "
              f"{str(rolled[x - 1]):>8}  {move}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
