"""Command line entry point: ``msdiv run | verify | bench``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import List, Optional

import numpy as np

from . import __version__
from .bench import format_table, scaling_run
from .checks import CHEAP, SUITES, suite_set_inequality
from .dispersion import OpCounter, dispersion
from .distance import KERNELS, InputError, build_distance_matrix, load_matrix, load_points_csv
from .local_search_intersection import intersection_bound, intersection_local_search, ptas_schedule
from .local_search_matroid import convergence_bound, default_iterations, greedy_baseline, local_search
from .matroid import IntersectionConstraint, MatroidError, UniformMatroid, constraint_from_config
from .oracle import (EnumerationTooLarge, brute_force_combined, brute_force_intersection,
                     brute_force_msd)
from .submodular import (SubmodularError, combined_bound, combined_local_search, curvature,
                         objective, objective_from_config, zero_singletons)

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2
ALGORITHMS = ("local-search", "local-search-intersection", "greedy", "brute-force", "combined")
DEFAULT_MAX_P = 4


class UsageError(ValueError):
    pass


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{what} file {path} is not valid JSON: {exc.msg}", line=exc.lineno) from None


def load_instance(args):
    if args.matrix:
        if args.distance not in (None, "precomputed"):
            raise UsageError("--matrix implies --distance precomputed")
        return load_matrix(args.matrix), "precomputed"
    if not args.input:
        raise UsageError("one of --input or --matrix is required")
    kernel = args.distance or "euclidean"
    if kernel == "precomputed":
        raise UsageError("--distance precomputed needs --matrix")
    return build_distance_matrix(load_points_csv(args.input), kernel), kernel


def load_constraint(args, ids):
    source = args.constraint or "uniform"
    if source == "uniform":
        if args.k is None:
            raise UsageError("--k is required for a uniform constraint")
        return UniformMatroid(len(ids), args.k)
    cfg = _load_json(source, "constraint")
    return constraint_from_config(cfg, ids, args.k)


def _rank_of(constraint) -> int:
    if isinstance(constraint, IntersectionConstraint):
        return constraint.k_common
    return constraint.rank


def _round(x):
    return None if x is None else float(x)


def run(args) -> dict:
    D, kernel = load_instance(args)
    ids = D.ids
    constraint = load_constraint(args, ids)
    k = _rank_of(constraint)
    is_int = isinstance(constraint, IntersectionConstraint)
    algo = args.algorithm
    params = {"p": None, "ell": None, "epsilon": args.epsilon, "seed": args.seed}
    warnings: List[str] = []
    f = None
    fval = None
    certified = None
    counters = {"distance_evals": 0, "oracle_calls": 0}
    extra = {}
    t0 = time.perf_counter()

    if algo == "local-search":
        if is_int:
            raise UsageError("local-search needs a single matroid; use local-search-intersection")
        ell = args.iterations if args.iterations is not None else default_iterations(k)
        params["ell"] = ell
        A, trace = local_search(D, constraint, ell)
        certified = convergence_bound(k, ell) if k >= 2 else None
    elif algo == "local-search-intersection":
        if not is_int:
            constraint = IntersectionConstraint(constraint, UniformMatroid(D.n, D.n))
            warnings.append("single matroid given; intersected with the free matroid")
        schedule = None
        if args.epsilon is not None:
            schedule = ptas_schedule(args.epsilon, k)
            extra["schedule"] = {"mode": schedule.mode, "p": schedule.p, "ell": schedule.ell,
                                 "threshold": schedule.threshold}
        A, trace = None, None
        if schedule is not None and schedule.mode == "enumerate" and args.p is None:
            try:
                A, _ = brute_force_intersection(D, constraint)
                certified = 1.0
                params["mode"] = "enumerate"
            except EnumerationTooLarge as exc:
                warnings.append(f"enumeration infeasible ({exc}); falling back to exchange search")
        if A is None:
            p = args.p if args.p is not None else (schedule.p if schedule else 2)
            if args.p is None and p > args.max_p:
                warnings.append(f"p = {p} capped to {args.max_p}")
                p = args.max_p
            if args.iterations is not None:
                ell = args.iterations
            elif schedule is not None:
                ell = schedule.ell
            else:
                ell = k + math.ceil(60 * max(k, 1) * math.log(6))
            params.update(p=p, ell=ell, mode="search")
            A, trace = intersection_local_search(D, constraint, p, ell)
            warnings.extend(trace.warnings)
            certified = intersection_bound(p, k, ell)
            if certified is None:
                warnings.append("convergence guarantee inapplicable for these parameters")
    elif algo == "greedy":
        if is_int:
            raise UsageError("greedy needs a single matroid")
        cnt = OpCounter()
        A = greedy_baseline(D, constraint, cnt)
        trace = None
        counters = {"distance_evals": cnt.distance_evals, "oracle_calls": cnt.oracle_calls}
    elif algo == "brute-force":
        if is_int:
            A, _ = brute_force_intersection(D, constraint)
        elif args.objective:
            f = objective_from_config(_load_json(args.objective, "objective"), ids)
            A = brute_force_combined(D, constraint, f)[0]
        else:
            A, _ = brute_force_msd(D, constraint)
        trace = None
        certified = 1.0
    elif algo == "combined":
        if is_int:
            raise UsageError("combined needs a single matroid")
        if not args.objective:
            raise UsageError("--objective is required for the combined algorithm")
        f = objective_from_config(_load_json(args.objective, "objective"), ids)
        c = curvature(f)
        potential = args.potential or ("linear_exact" if c == 0 else "oblivious")
        params["potential"] = potential
        params["ell"] = args.iterations
        A, trace = combined_local_search(D, constraint, f, potential, args.iterations)
        extra["curvature"] = c
        if zero_singletons(f) and f.kind != "linear":
            warnings.append("curvature skips elements with f(x) = 0")
        if potential in ("linear_exact", "metric_linear") and k >= 1:
            certified = combined_bound(k, c, None, potential) if potential == "linear_exact" else None
    else:  # argparse guards this
        raise UsageError(f"unknown algorithm {algo}")

    elapsed = time.perf_counter() - t0
    if trace is not None:
        counters = {"distance_evals": trace.distance_evals, "oracle_calls": trace.oracle_calls}
        extra["iterations_run"] = len(trace.iterations)
        extra["local_optimum"] = trace.local_optimum

    dval = dispersion(D, A)
    if f is not None:
        _, fval, gval = objective(D, f, A)
    else:
        gval = dval

    report = {
        "instance": {"n": D.n, "kernel": kernel, "constraint": constraint.to_config(ids), "k": k},
        "algorithm": algo,
        "parameters": params,
        "selected": [ids[i] for i in A],
        "values": {"d": dval, "f": _round(fval), "g": gval},
        "certified_bound": _round(certified),
        "counters": counters,
    }
    report.update(extra)
    if warnings:
        report["warnings"] = warnings
    if args.compare_oracle:
        report["oracle"] = _oracle_comparison(D, constraint, f, gval, k,
                                              params.get("potential"), extra.get("curvature", 0.0))
    if args.timing:
        report["wall_time_ms"] = round(elapsed * 1000, 3)
    return report


def _oracle_comparison(D, constraint, f, achieved, k, potential, c):
    try:
        if isinstance(constraint, IntersectionConstraint):
            opt_set, opt = brute_force_intersection(D, constraint)
            out = {}
        elif f is not None:
            opt_set, opt, lam_d, lam_f = brute_force_combined(D, constraint, f)
            out = {"lambda_d": lam_d, "lambda_f": lam_f}
            if potential in ("linear_exact", "metric_linear"):
                out["instance_bound"] = combined_bound(k, c, lam_d, potential)
        else:
            opt_set, opt = brute_force_msd(D, constraint)
            out = {}
    except EnumerationTooLarge as exc:
        return {"skipped": str(exc)}
    out.update({"opt_value": opt, "opt_set": [D.ids[i] for i in opt_set],
                "ratio": achieved / opt if opt > 0 else 1.0})
    return out


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def verify(args, out=None) -> int:
    out = out or sys.stdout
    rng_root = np.random.SeedSequence(args.seed)
    names = args.suite or list(SUITES)
    children = rng_root.spawn(len(SUITES))
    seeds = dict(zip(SUITES, children))
    fixed = load_matrix(args.matrix) if args.matrix else None
    failed = []
    for name in names:
        if name not in SUITES:
            raise UsageError(f"unknown suite {name!r}")
        rng = np.random.default_rng(seeds[name])
        trials = args.trials if name in CHEAP else args.trials // args.expensive_divisor
        if name == "set_inequality" and fixed is not None:
            res = suite_set_inequality(rng, max(trials, 1) if args.trials else 0, fixed)
        else:
            res = SUITES[name](rng, trials)
        status = "PASS" if res.ok else "FAIL"
        print(f"{status} {name}: {res.passed}/{res.trials} passed", file=out)
        if not res.ok:
            failed.append({"suite": name, "instance": res.failure})
    if failed:
        payload = json.dumps(failed, indent=2)
        if args.replay_out:
            with open(args.replay_out, "w") as fh:
                fh.write(payload + "\n")
            print(f"failing instances written to {args.replay_out}", file=out)
        else:
            print(payload, file=out)
        return EXIT_VIOLATION
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msdiv", description="Max-sum diversification under matroid constraints")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="select a diverse subset and write a JSON report")
    r.add_argument("--input", help="point CSV with header id,x1,...,xq")
    r.add_argument("--matrix", help="precomputed distance matrix file")
    r.add_argument("--distance", choices=KERNELS + ("precomputed",))
    r.add_argument("--constraint", help="constraint JSON file, or 'uniform' (with --k)")
    r.add_argument("--k", type=int)
    r.add_argument("--algorithm", choices=ALGORITHMS, default="local-search")
    r.add_argument("--objective", help="objective JSON file (combined algorithm)")
    r.add_argument("--potential", choices=("oblivious", "linear_exact", "metric_linear"))
    r.add_argument("--iterations", type=int)
    r.add_argument("--p", type=int)
    r.add_argument("--max-p", type=int, default=DEFAULT_MAX_P, help="cap on p when taken from --epsilon")
    r.add_argument("--epsilon", type=float)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--report", help="write the report here instead of stdout")
    r.add_argument("--compare-oracle", action="store_true", help="add brute-force OPT and the achieved ratio")
    r.add_argument("--timing", action="store_true", help="include wall time (makes reports non-reproducible)")

    v = sub.add_parser("verify", help="run randomized invariant suites")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--trials", type=int, default=10_000)
    v.add_argument("--expensive-divisor", type=int, default=50,
                   help="guarantee and decomposition suites run trials // this many instances")
    v.add_argument("--suite", action="append", help="run only this suite (repeatable)")
    v.add_argument("--matrix", help="run the set-inequality suite on this matrix")
    v.add_argument("--replay-out", help="write failing instances to this JSON file")

    b = sub.add_parser("bench", help="operation-count scaling sweep")
    b.add_argument("--sizes", default="500,1000,2000,4000")
    b.add_argument("--k", type=int, default=20)
    b.add_argument("--distance", choices=KERNELS, default="euclidean")
    b.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            report = run(args)
            text = dump_report(report)
            if args.report:
                with open(args.report, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK
        if args.command == "verify":
            if args.trials < 0:
                raise UsageError("--trials must be nonnegative")
            return verify(args)
        if args.command == "bench":
            sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
            sys.stdout.write(format_table(scaling_run(sizes, args.k, args.distance, args.seed)))
            return EXIT_OK
    except (InputError, UsageError, MatroidError, SubmodularError, EnumerationTooLarge) as exc:
        print(f"msdiv: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
