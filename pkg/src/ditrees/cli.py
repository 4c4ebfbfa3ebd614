"""Command-line front end.

Subcommands: ``gen`` (emit an instance file), ``solve`` / ``oracle`` (read an
instance, emit a JSON report), ``check`` (solver-vs-oracle sweep) and
``bench`` (timing table).  Exit codes: 0 success, 2 infeasible, 1 error —
scripts can branch on infeasibility without parsing output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .bench import ALGORITHMS, run_bench
from .check import PROBLEMS, run_check
from .combine_dp import solve_cit
from .dit import solve_dit
from .generate import InstanceFamily, gen_instance
from .greedy import solve_dit_n1
from .io import FormatError, dump_instance, load_instance, report_to_dict, save_instance
from .mcdit import solve_mcdit
from .oracle import ORACLE_CAP, oracle_cit, oracle_dit, oracle_mcdit, oracle_single_upgrade
from .relax import solve_dit_inf
from .tree import InstanceError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2

_SOLVE_PROBLEMS = ("dit", "dit1", "cit", "mcdit", "relax")


def _parse_lam(text, exact: bool):
    lam = Fraction(text)
    return lam if exact else float(lam)


def _emit(payload: dict, out: str | None):
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _cmd_gen(args) -> int:
    family = InstanceFamily(n=args.n, seed=args.seed,
                            w_range=tuple(args.w_range), u_range=tuple(args.u_range),
                            c_range=tuple(args.c_range), r_range=tuple(args.r_range),
                            integer=not args.real, K=args.K, M=args.M, N=args.N, D=args.D)
    inst = gen_instance(family)
    if args.out:
        save_instance(inst, args.out)
        print(f"wrote {args.out} (n={inst.n}, seed={args.seed})")
    else:
        _emit(dump_instance(inst), None)
    return EXIT_OK


def _cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    if args.problem == "relax":
        report = solve_dit_inf(inst, exact=args.exact)
    elif args.problem == "dit1":
        report = solve_dit_n1(inst, exact=args.exact)
    elif args.problem == "cit":
        lam = _parse_lam(args.lam, args.exact)
        report = solve_cit(inst, lam=lam, exact=args.exact).report()
    elif args.problem == "dit":
        report = solve_dit(inst, exact=args.exact)
    else:
        report = solve_mcdit(inst, exact=args.exact)
    _emit(report_to_dict(report, inst), args.out)
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def _cmd_oracle(args) -> int:
    inst = load_instance(args.instance)
    if args.problem == "cit":
        res = oracle_cit(inst, lam=_parse_lam(args.lam, args.exact),
                         exact=args.exact, cap=args.cap)
    elif args.problem == "dit":
        res = oracle_dit(inst, exact=args.exact, cap=args.cap)
    elif args.problem == "dit1":
        res = oracle_single_upgrade(inst, exact=args.exact)
    else:
        res = oracle_mcdit(inst, exact=args.exact, cap=args.cap)
    payload = {"problem": args.problem, "status": res.status,
               "enumerated": res.enumerated}
    if res.feasible:
        value = res.best_value
        payload["best_value"] = float(value) if isinstance(value, Fraction) else value
        payload["best_sets"] = [sorted(inst.names[e] for e in s)
                                for s in res.best_sets[:args.max_sets]]
        payload["optima"] = len(res.best_sets)
    _emit(payload, args.out)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def _cmd_check(args) -> int:
    outcome = run_check(args.problem, count=args.count, max_n=args.max_n,
                        seed=args.seed, out_dir=args.out_dir, mutate=args.mutate,
                        workers=args.workers)
    print(outcome.summary())
    return EXIT_OK if outcome.ok else EXIT_ERROR


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    algorithms = tuple(a for a in args.algorithms.split(",") if a)
    families = [InstanceFamily(n=n, seed=args.seed, N=args.N) for n in sizes]
    report = run_bench(families, algorithms=algorithms, reps=args.reps, lam=args.lam)
    if args.format == "tsv":
        text = report.to_tsv()
    else:
        text = json.dumps(report.to_json(), indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ditrees",
                                     description="Edge-upgrade interdiction solvers on rooted trees")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random instance file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--w-range", type=float, nargs=2, default=(0, 10))
    p.add_argument("--u-range", type=float, nargs=2, default=(10, 20))
    p.add_argument("--c-range", type=float, nargs=2, default=(1, 5))
    p.add_argument("--r-range", type=int, nargs=2, default=(1, 3))
    p.add_argument("--real", action="store_true", help="real-valued attributes")
    for fld in ("K", "M", "D"):
        p.add_argument(f"--{fld}", type=float, default=None)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("solve", help="solve an instance file")
    p.add_argument("--problem", choices=_SOLVE_PROBLEMS, required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--lam", default="0.5", help="scalarization weight for cit (float or p/q)")
    p.add_argument("--exact", action="store_true", help="int/Fraction arithmetic")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("oracle", help="brute-force ground truth for an instance file")
    p.add_argument("--problem", choices=("dit", "dit1", "cit", "mcdit"), required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--lam", default="0.5")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--cap", type=int, default=ORACLE_CAP, help="max edges to enumerate")
    p.add_argument("--max-sets", type=int, default=10, help="optimal sets to list")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("check", help="solver-vs-oracle sweep")
    p.add_argument("--problem", choices=PROBLEMS, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-n", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="counterexamples")
    p.add_argument("--mutate", default=None, help="corrupt the solver (harness test)")
    p.add_argument("--workers", type=int, default=None,
                   help="process count (default: DITREES_WORKERS or 1)")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("bench", help="timing table over random families")
    p.add_argument("--sizes", default="10,50,100,300,500")
    p.add_argument("--algorithms", default=",".join(ALGORITHMS))
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--N", type=int, default=4, help="change-count budget for all sizes")
    p.add_argument("--lam", type=float, default=0.5)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, InstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
