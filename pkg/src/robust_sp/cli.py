"""Command-line front end.

Exit codes: 0 ok, 1 parse/IO error, 2 validation failure, 3 no proper policy,
4 assumption violation, 5 policy cap exceeded, 6 benchmark disagreement.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .bellman import format_value, greedy_policy, inf_vector, zero_vector
from .errors import (
    AssumptionViolation,
    NoProperPolicyError,
    PolicyCapExceeded,
    RspError,
    UnfairSchedule,
)
from .dijkstra import dijkstra_run
from .evaluation import verify_bellman
from .fileio import (
    GraphValidationError,
    ParseError,
    format_costs,
    format_graph,
    format_policy,
    is_floating,
    parse_costs,
    read_graph,
)
from .graph import (
    RspGraph,
    check_assumption,
    is_proper,
    proper_policy_exists,
    some_proper_policy,
)
from .instances import GenSpec, PursuitSpec, gen_pursuit, gen_random, gen_search
from .oracle import brute_force
from .perturbation import solve_by_perturbation
from .pi import AsyncPiState, pi_async, pi_proper
from .schedule import Schedule, partition_blocks
from .vi import is_fixed_point, vi, vi_async, vi_from_infinity

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_NO_PROPER, EXIT_ASSUMPTION, EXIT_CAP, EXIT_DISAGREE = range(7)

ALGORITHMS = ("vi", "vi-async", "pi", "pi-async", "dijkstra", "perturb")


class BenchDisagreement(Exception):
    pass


@dataclass
class SolveOptions:
    init: str = "inf"
    tol: Fraction | float = 0
    delta: Fraction = Fraction(1)
    shrink: Fraction = Fraction(1, 4)
    rounds: int = 20
    seed: int | None = None
    partition: int | None = None


@dataclass
class SolveReport:
    algorithm: str
    J: tuple
    policy: tuple
    iterations: int
    wall_time: float
    bellman_ok: bool
    fixed_point_ok: bool
    policy_proper: bool = True

    @property
    def certified(self) -> bool:
        return self.bellman_ok and self.fixed_point_ok


def _schedule(g: RspGraph, opts: SolveOptions) -> Schedule:
    parts = opts.partition or g.n
    blocks = partition_blocks(g.n, parts)
    if opts.seed is None:
        return Schedule.alternating(blocks)
    return Schedule.random_fair(blocks, seed=opts.seed)


def _initial(g: RspGraph, opts: SolveOptions):
    if opts.init == "inf":
        return inf_vector(g.n)
    if opts.init == "zero":
        return zero_vector(g.n)
    if opts.init.startswith("file:"):
        text = Path(opts.init[5:]).read_text(encoding="utf-8")
        return parse_costs(g.n, text, floating=is_floating(g))
    raise ValueError(f"bad --init value {opts.init!r}")


def solve(g: RspGraph, algorithm: str, opts: SolveOptions | None = None) -> SolveReport:
    """Dispatch one algorithm and attach the certificate checks."""
    opts = opts or SolveOptions()
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    exists, settled = proper_policy_exists(g)
    if not exists:
        bad = sorted(set(g.nodes) - settled)
        raise NoProperPolicyError(f"no proper policy; t unreachable under any policy from {bad}")

    t0 = time.perf_counter()
    if algorithm == "vi":
        if opts.init == "inf":
            J, mu, tr = vi_from_infinity(g)
        else:
            J, tr = vi(g, _initial(g, opts), tol=opts.tol)
            if not tr.converged:
                raise AssumptionViolation(f"value iteration did not converge in {tr.iterations} sweeps")
            mu = greedy_policy(g, J)
        its = tr.iterations
    elif algorithm == "vi-async":
        J, tr = vi_async(g, _schedule(g, opts), _initial(g, opts))
        if not tr.converged:
            raise AssumptionViolation("asynchronous value iteration did not settle")
        mu, its = greedy_policy(g, J), tr.iterations
    elif algorithm == "pi":
        J, mu, tr = pi_proper(g, some_proper_policy(g))
        its = tr.iterations
    elif algorithm == "pi-async":
        blocks = partition_blocks(g.n, opts.partition or g.n)
        J, mu, tr = pi_async(g, _schedule(g, opts), AsyncPiState.default(g, blocks))
        if not tr.converged:
            raise AssumptionViolation(f"asynchronous PI did not settle in {tr.events} events")
        its = tr.events
    elif algorithm == "dijkstra":
        if any(w < 0 for w in g.lengths()):
            raise AssumptionViolation("label setting needs nonnegative arc lengths")
        J, mu, _, tr = dijkstra_run(g)
        its = tr.iterations
    else:
        J, mu, tr = solve_by_perturbation(g, opts.delta, opts.shrink, opts.rounds)
        its = len(tr.deltas)
    elapsed = time.perf_counter() - t0
    return SolveReport(
        algorithm, tuple(J), tuple(mu), its, elapsed,
        verify_bellman(g, mu, J, opts.tol), is_fixed_point(g, J, opts.tol), is_proper(g, mu),
    )


def _load(path, floating=False) -> RspGraph:
    try:
        return read_graph(path, floating)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


# ---------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    g = _load(args.path)
    print(f"ok: {g.n} nodes, {sum(len(r) for r in g.controls)} controls, {g.policy_count()} policies")
    return EXIT_OK


def cmd_solve(args) -> int:
    floating = args.float
    if args.tol and not floating:
        raise GraphValidationError(["--tol is only meaningful with --float"])
    g = _load(args.path, floating)
    opts = SolveOptions(
        init=args.init,
        tol=float(args.tol) if args.tol else 0,
        delta=Fraction(args.delta),
        shrink=Fraction(args.shrink),
        rounds=args.rounds,
        seed=args.seed,
        partition=args.partition,
    )
    rep = solve(g, args.algo, opts)
    print(f"# algorithm {rep.algorithm}")
    print(f"# iterations {rep.iterations}")
    print(f"# time_s {rep.wall_time:.6f}")
    print(f"# bellman {'pass' if rep.bellman_ok else 'FAIL'}")
    print(f"# fixed_point {'pass' if rep.fixed_point_ok else 'FAIL'}")
    print(f"# policy_proper {'yes' if rep.policy_proper else 'no'}")
    print("cost")
    sys.stdout.write(format_costs(rep.J))
    print("policy")
    sys.stdout.write(format_policy(g, rep.policy))
    if args.cost_out:
        Path(args.cost_out).write_text(format_costs(rep.J), encoding="utf-8")
    if args.policy_out:
        Path(args.policy_out).write_text(format_policy(g, rep.policy), encoding="utf-8")
    if not rep.certified:
        print("error: certificate checks failed", file=sys.stderr)
        return EXIT_ASSUMPTION
    return EXIT_OK


def _vec(J) -> str:
    return "none" if J is None else " ".join(format_value(v) for v in J)


def cmd_oracle(args) -> int:
    g = _load(args.path)
    res = brute_force(g, horizon=args.horizon, cap=args.cap, require_proper=False)
    print("policy\tproper\tregular\tmin_mean\tmax_mean\tcost")
    for row in res.per_policy:
        c = row.classification
        print("\t".join([
            ",".join(g.policy_names(row.policy)),
            "yes" if c.is_proper else "no",
            "yes" if c.regular else "no",
            format_value(c.min_cycle_mean),
            format_value(c.max_cycle_mean),
            " ".join(format_value(v) for v in row.cost),
        ]))
    print(f"j_hat\t{_vec(res.j_hat)}")
    print(f"j_star_minimax\t{_vec(res.j_star_minimax)}")
    return EXIT_OK


BENCH_HEADER = ("instance", "algorithm", "iterations", "time_s", "agree")


def _bench_instances(spec: dict, base_dir: Path):
    for entry in spec["instances"]:
        kind = entry["kind"]
        if kind == "file":
            path = base_dir / entry["path"]
            yield entry.get("name", path.stem), _load(path)
            continue
        lo, hi = entry.get("seeds", [entry.get("seed", 0), entry.get("seed", 0) + 1])
        for seed in range(lo, hi):
            if kind == "random":
                g = gen_random(GenSpec(
                    seed=seed,
                    n_nodes=entry.get("n_nodes", 4),
                    max_controls=entry.get("max_controls", 3),
                    max_branch=entry.get("max_branch", 3),
                    length_range=tuple(entry.get("length_range", (-3, 9))),
                    assumption_target=entry.get("assumption_target", "A1.1"),
                    require_zero_cycle=entry.get("require_zero_cycle", False),
                ))
            elif kind == "search":
                g = gen_search(
                    seed, entry.get("n", 4),
                    tuple(entry.get("stop_cost_range", (0, 9))),
                    tuple(entry.get("move_cost_range", (0, 0))),
                )
            else:
                raise ValueError(f"unknown instance kind {kind!r}")
            yield f"{kind}-{seed}", g


def bench_algorithms(g: RspGraph) -> list[str]:
    """A1.1 instances get every method (label setting only with nonnegative
    lengths); instances with zero-length improper cycles go to perturbation."""
    if check_assumption(g, "A1.1").holds:
        algos = ["vi", "vi-async", "pi", "pi-async", "perturb"]
        if check_assumption(g, "A5.1").holds:
            algos.append("dijkstra")
        return algos
    if check_assumption(g, "A4.3").holds:
        return ["perturb"]
    return []


def run_bench(spec: dict, base_dir: Path = Path("."), oracle_cap: int = 10**5) -> list[tuple]:
    rows = []
    for name, g in _bench_instances(spec, base_dir):
        ref = None
        if g.policy_count() <= oracle_cap:
            t0 = time.perf_counter()
            ref = brute_force(g, cap=oracle_cap).j_hat
            rows.append((name, "oracle", g.policy_count(), time.perf_counter() - t0, True))
        for algo in bench_algorithms(g):
            opts = SolveOptions(seed=spec.get("async_seed"))
            rep = solve(g, algo, opts)
            if ref is None:
                ref = rep.J
            rows.append((name, algo, rep.iterations, rep.wall_time, rep.J == ref and rep.certified))
    return rows


def cmd_bench(args) -> int:
    spec_path = Path(args.spec)
    try:
        spec = json.loads(spec_path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ParseError(f"cannot read {spec_path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"bad bench spec: {e}") from None
    rows = run_bench(spec, spec_path.parent)
    print(f"{'instance':<16}{'algorithm':<10}{'iters':>8}{'time_s':>12}  agree")
    for name, algo, its, t, ok in rows:
        print(f"{name:<16}{algo:<10}{its:>8}{t:>12.6f}  {'yes' if ok else 'NO'}")
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(BENCH_HEADER)
            for name, algo, its, t, ok in rows:
                w.writerow([name, algo, its, f"{t:.6f}", str(ok).lower()])
    bad = [(n, a) for n, a, _, _, ok in rows if not ok]
    if bad:
        raise BenchDisagreement(f"{len(bad)} disagreeing results, first {bad[0]}")
    return EXIT_OK


def _cell(text: str):
    r, c = text.split(",")
    return int(r), int(c)


def cmd_gen(args) -> int:
    if args.kind == "random":
        g = gen_random(GenSpec(
            seed=args.seed, n_nodes=args.nodes,
            assumption_target=None if args.target == "none" else args.target,
        ))
    elif args.kind == "search":
        g = gen_search(args.seed, args.nodes)
    else:
        inst = gen_pursuit(PursuitSpec(
            args.width, args.height, frozenset(_cell(o) for o in args.obstacle),
            pursuer_diagonal=args.diagonal,
        ))
        g = inst.graph
        if args.base_out:
            Path(args.base_out).write_text(format_policy(g, inst.base), encoding="utf-8")
        for z1, z2 in inst.nonforcible:
            print(f"# capture not forcible from pursuer {z1} evader {z2}", file=sys.stderr)
    text = format_graph(g)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rsp", description="Robust (minimax) shortest path solver")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="parse and check a graph file")
    v.add_argument("path")
    v.set_defaults(func=cmd_validate)

    s = sub.add_parser("solve", help="solve with one algorithm")
    s.add_argument("path")
    s.add_argument("--algo", choices=ALGORITHMS, default="vi")
    s.add_argument("--init", default="inf", help="inf, zero, or file:PATH")
    s.add_argument("--float", action="store_true", help="read lengths as floats")
    s.add_argument("--tol", type=float, default=0.0, help="stopping tolerance (with --float)")
    s.add_argument("--delta", default="1")
    s.add_argument("--shrink", default="1/4")
    s.add_argument("--rounds", type=int, default=20)
    s.add_argument("--seed", type=int, default=None, help="random fair schedule seed")
    s.add_argument("--partition", type=int, default=None, help="number of async blocks")
    s.add_argument("--cost-out")
    s.add_argument("--policy-out")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="enumerate every policy")
    o.add_argument("path")
    o.add_argument("--horizon", type=int, default=None)
    o.add_argument("--cap", type=int, default=10**6)
    o.set_defaults(func=cmd_oracle)

    b = sub.add_parser("bench", help="cross-check algorithms on a JSON instance list")
    b.add_argument("spec")
    b.add_argument("--csv")
    b.set_defaults(func=cmd_bench)

    gn = sub.add_parser("gen", help="write a generated instance")
    gn.add_argument("kind", choices=("random", "search", "pursuit"))
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--nodes", type=int, default=4)
    gn.add_argument("--target", default="A1.1", choices=("A1.1", "A4.3", "A5.1", "none"))
    gn.add_argument("--width", type=int, default=3)
    gn.add_argument("--height", type=int, default=1)
    gn.add_argument("--obstacle", action="append", default=[], help="blocked cell as ROW,COL")
    gn.add_argument("--diagonal", action="store_true", help="pursuer also moves diagonally")
    gn.add_argument("--base-out", help="write the pursuit base policy here")
    gn.add_argument("--out")
    gn.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        code, msg = EXIT_PARSE, f"parse error: {e}"
    except (GraphValidationError, UnfairSchedule) as e:
        code, msg = EXIT_INVALID, f"invalid: {e}"
    except NoProperPolicyError as e:
        code, msg = EXIT_NO_PROPER, f"no proper policy: {e}"
    except AssumptionViolation as e:
        code, msg = EXIT_ASSUMPTION, f"assumption violation: {e}"
    except PolicyCapExceeded as e:
        code, msg = EXIT_CAP, f"policy cap exceeded: {e}"
    except BenchDisagreement as e:
        code, msg = EXIT_DISAGREE, f"disagreement: {e}"
    except (RspError, ValueError) as e:
        code, msg = EXIT_INVALID, f"invalid: {e}"
    print(msg, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
