"""Command-line interface.

Subcommands: construct, localsearch, solve, oracle, bench, stats, validate.
"""

import argparse
import json
import random
import sys
from pathlib import Path

from .constructive import best_of_est_ect, construct_ect, construct_est
from .graph import build_schedule, schedule_to_json, validate_schedule
from .harness import (
    emit_results,
    gap_stats,
    load_instance_file,
    read_results_csv,
    run_benchmark,
    wilcoxon,
)
from .local_search import LocalSearchConfig, local_search
from .metaheuristics import ALGORITHMS, MetaConfig, run
from .oracle import OracleLimitError, solve_exhaustive

__all__ = ["main"]


def _add_instance_args(parser):
    parser.add_argument("--instance", required=True, help="instance file")
    parser.add_argument("--format", choices=("native", "classical"),
                        default="native", help="instance file format")
    parser.add_argument("--alpha", type=float, default=None,
                        help="override the instance learning rate")


def _load(args):
    return load_instance_file(args.instance, args.format, args.alpha)


def _meta_config(args) -> MetaConfig:
    cfg = MetaConfig.calibrated(args.algo, args.neighborhood)
    overrides = {
        "time_budget": args.time_limit,
        "max_iterations": args.iterations,
        "seed": args.seed,
        "no_improve_limit": args.no_improve,
        "target_makespan": args.target,
    }
    if args.perturb_min is not None:
        overrides["ils_perturb_min"] = args.perturb_min
    if args.perturb_max is not None:
        overrides["ils_perturb_max"] = args.perturb_max
    if args.rcl_alpha is not None:
        overrides["grasp_alpha"] = args.rcl_alpha
    if args.tabu_factor is not None:
        overrides["ts_factor"] = args.tabu_factor
    return MetaConfig.calibrated(cfg.algo, cfg.mode, **overrides)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="flexshop",
        description="Flexible job shop scheduling with sequencing "
                    "flexibility and position-based learning effect",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="run a constructive heuristic")
    _add_instance_args(p)
    p.add_argument("--rule", choices=("est", "ect", "best"), default="best")
    p.add_argument("--rcl-alpha", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("localsearch", help="run the local search")
    _add_instance_args(p)
    p.add_argument("--neighborhood", choices=("full", "reduced", "cropped"),
                   default="reduced")
    p.add_argument("--strategy", choices=("best", "first"), default="best")
    p.add_argument("--time-limit", type=float, default=None)

    p = sub.add_parser("solve", help="run a metaheuristic")
    _add_instance_args(p)
    p.add_argument("--algo", choices=ALGORITHMS, required=True)
    p.add_argument("--neighborhood", choices=("reduced", "cropped"),
                   default="reduced")
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--no-improve", type=float, default=None,
                   help="stop after this many seconds without improvement")
    p.add_argument("--perturb-min", type=int, default=None)
    p.add_argument("--perturb-max", type=int, default=None)
    p.add_argument("--rcl-alpha", type=float, default=None)
    p.add_argument("--tabu-factor", type=float, default=None)

    p = sub.add_parser("oracle", help="exhaustive solve of a tiny instance")
    _add_instance_args(p)
    p.add_argument("--limit", type=int, default=1_000_000)

    p = sub.add_parser("bench", help="batch experiment runner")
    p.add_argument("--instances", required=True, help="instance directory")
    p.add_argument("--format", choices=("native", "classical"),
                   default="native")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--algos", default="ils,grasp,ts,sa",
                   help="comma-separated algorithm list")
    p.add_argument("--neighborhoods", default="reduced",
                   help="comma-separated neighborhood list")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--time-limit", type=float, default=300.0)
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--seed-base", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="results.csv")

    p = sub.add_parser("stats", help="statistics over a results file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--wilcoxon", default=None, metavar="A,B",
                   help="compare two methods by name")

    p = sub.add_parser("validate", help="check a solution against an instance")
    _add_instance_args(p)
    p.add_argument("--solution", required=True, help="schedule JSON file")

    args = parser.parse_args(argv)

    if args.command == "construct":
        inst = _load(args)
        rng = random.Random(args.seed) if args.rcl_alpha > 0 else None
        if args.rule == "est":
            sched = construct_est(inst, args.rcl_alpha, rng)
        elif args.rule == "ect":
            sched = construct_ect(inst, args.rcl_alpha, rng)
        else:
            sched = best_of_est_ect(inst)
        sys.stdout.write(schedule_to_json(sched))
        return 0

    if args.command == "localsearch":
        inst = _load(args)
        cfg = LocalSearchConfig(args.neighborhood, args.strategy,
                                args.time_limit)
        result = local_search(inst, best_of_est_ect(inst), cfg)
        sys.stdout.write(schedule_to_json(result.schedule))
        print(f"iterations: {result.iterations}", file=sys.stderr)
        print(f"neighbors evaluated: {result.neighbors_evaluated}",
              file=sys.stderr)
        return 0

    if args.command == "solve":
        inst = _load(args)
        record = run(inst, _meta_config(args))
        sys.stdout.write(schedule_to_json(record.schedule))
        print(
            f"makespan {record.best_makespan} after {record.iterations} "
            f"iterations ({record.stop_reason}), "
            f"time to best {record.time_to_best:.3f}s",
            file=sys.stderr,
        )
        return 0

    if args.command == "oracle":
        inst = _load(args)
        try:
            result = solve_exhaustive(inst, args.limit)
        except OracleLimitError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        sys.stdout.write(schedule_to_json(result.schedule))
        print(f"optimal makespan {result.optimal_makespan} "
              f"({result.feasible_count} feasible solutions)",
              file=sys.stderr)
        return 0

    if args.command == "bench":
        paths = sorted(Path(args.instances).iterdir())
        paths = [p for p in paths if p.is_file()]
        configs = [
            MetaConfig.calibrated(
                algo.strip(), mode.strip(),
                time_budget=args.time_limit,
                max_iterations=args.iterations,
            )
            for algo in args.algos.split(",")
            for mode in args.neighborhoods.split(",")
        ]
        records = run_benchmark(
            paths, configs, runs=args.runs, seed_base=args.seed_base,
            fmt=args.format, learning_rate=args.alpha, workers=args.workers,
        )
        fmt = "json" if str(args.out).endswith(".json") else "csv"
        emit_results(records, gap_stats(records), fmt, args.out,
                     configs=configs)
        print(f"wrote {len(records)} records to {args.out}", file=sys.stderr)
        return 0

    if args.command == "stats":
        records = read_results_csv(args.infile)
        stats = gap_stats(records)
        if args.wilcoxon:
            name_a, name_b = (s.strip() for s in args.wilcoxon.split(","))
            per_instance = stats["per_instance"]
            pairs = [
                (tbl[name_a]["best"], tbl[name_b]["best"])
                for tbl in per_instance.values()
                if name_a in tbl and name_b in tbl
            ]
            try:
                outcome = wilcoxon(pairs)
            except ValueError as exc:
                stats["wilcoxon"] = {
                    "methods": [name_a, name_b],
                    "error": str(exc),
                }
            else:
                stats["wilcoxon"] = {
                    "methods": [name_a, name_b],
                    "r_plus": outcome.r_plus,
                    "r_minus": outcome.r_minus,
                    "w": outcome.w,
                    "n": outcome.n,
                    "z": outcome.z,
                    "p_value": outcome.p_value,
                    "small_sample": outcome.small_sample,
                }
        json.dump(stats, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return 0

    if args.command == "validate":
        inst = _load(args)
        data = json.loads(Path(args.solution).read_text())
        assignment = {int(op): k for op, k in data["assignment"].items()}
        try:
            sched = build_schedule(inst, assignment, data["sequences"])
        except ValueError as exc:
            print(f"infeasible: {exc}", file=sys.stderr)
            return 1
        violations = validate_schedule(inst, sched)
        if data.get("makespan") not in (None, sched.makespan):
            violations.append(
                f"declared makespan {data['makespan']} differs from "
                f"recomputed {sched.makespan}"
            )
        for v in violations:
            print(v, file=sys.stderr)
        if not violations:
            print(f"valid; makespan {sched.makespan}")
        return 1 if violations else 0

    return 2


if __name__ == "__main__":
    raise SystemExit(main())
