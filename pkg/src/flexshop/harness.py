"""Experiment runner and statistics.

Batch execution of (instance, config) pairs over several seeded runs,
gap statistics against the cross-method best, a Wilcoxon signed-rank test
for paired method comparison, and CSV/JSON persistence of run records.
"""

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict
from pathlib import Path

from .instance import Instance, import_classical_fjs, parse_instance
from .metaheuristics import MetaConfig, RunRecord, run

__all__ = [
    "WilcoxonOutcome",
    "run_benchmark",
    "gap_stats",
    "wilcoxon",
    "emit_results",
    "read_results_csv",
    "CSV_COLUMNS",
]

CSV_COLUMNS = (
    "instance",
    "algorithm",
    "seed",
    "best_makespan",
    "time_to_best",
    "total_runtime",
    "iterations",
    "neighbors_evaluated",
    "stalled_iterations",
    "stop_reason",
)


@dataclass
class WilcoxonOutcome:
    r_plus: float
    r_minus: float
    w: float
    n: int  # pairs with a nonzero difference
    z: float
    p_value: float
    small_sample: bool  # n < 10: normal approximation is shaky


def load_instance_file(path, fmt: str = "native",
                       learning_rate: float | None = None) -> Instance:
    text = Path(path).read_text()
    name = Path(path).stem
    if fmt == "classical":
        inst = import_classical_fjs(text, learning_rate or 1.0, name)
    else:
        inst = parse_instance(text, name)
        if learning_rate is not None:
            inst = inst.with_learning_rate(learning_rate)
    return inst


def _one_run(args):
    path, fmt, learning_rate, cfg = args
    inst = load_instance_file(path, fmt, learning_rate)
    record = run(inst, cfg)
    record.instance_id = inst.name
    return record


def run_benchmark(instance_paths, configs, runs: int = 5, seed_base: int = 0,
                  fmt: str = "native", learning_rate: float | None = None,
                  workers: int = 1, sink=None) -> list:
    """Execute every (instance, config) pair ``runs`` times.

    Seeds are ``seed_base + run_index``.  Unreadable instances produce a
    failed record (stop_reason ``error``) and the batch continues.
    ``workers > 1`` dispatches runs over a process pool; oversubscription
    beyond the CPU count is refused so per-run wall-clock budgets stay
    honest.
    """
    cpu = os.cpu_count() or 1
    if workers > cpu:
        raise ValueError(f"workers={workers} exceeds the {cpu} available CPUs")
    jobs = []
    records = []
    for path in instance_paths:
        try:
            load_instance_file(path, fmt, learning_rate)
        except (OSError, ValueError) as exc:
            for cfg in configs:
                records.append(RunRecord(
                    Path(path).stem, f"{cfg.algo}-{cfg.mode}", -1, -1,
                    0.0, 0.0, 0, 0, 0, f"error: {exc}",
                ))
            continue
        for cfg in configs:
            for r in range(runs):
                seeded = MetaConfig(**{**_cfg_dict(cfg), "seed": seed_base + r})
                jobs.append((str(path), fmt, learning_rate, seeded))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one_run, jobs))
    else:
        results = [_one_run(job) for job in jobs]
    for record in results:
        records.append(record)
        if sink is not None:
            sink(record)
    return records


def _cfg_dict(cfg: MetaConfig) -> dict:
    d = asdict(cfg)
    return d


def gap_stats(records) -> dict:
    """Per-instance and per-method gap tables.

    For each instance, each method's best-of-runs makespan is compared with
    the cross-method minimum (``gap``); the mean-of-runs makespan is
    compared with the minimum of the means (``mean_gap``).  Gaps are in
    percent; None when the reference minimum is zero.
    """
    groups: dict = {}
    for rec in records:
        if rec.best_makespan is None or rec.best_makespan < 0:
            continue
        groups.setdefault(rec.instance_id, {}).setdefault(
            rec.algorithm, []
        ).append(rec.best_makespan)
    per_instance = {}
    method_gaps: dict = {}
    method_mean_gaps: dict = {}
    for instance_id, methods in sorted(groups.items()):
        best = {m: min(vals) for m, vals in methods.items()}
        mean = {m: sum(vals) / len(vals) for m, vals in methods.items()}
        c_min = min(best.values())
        c_mean_min = min(mean.values())
        table = {}
        for m in sorted(methods):
            gap = 100.0 * (best[m] - c_min) / c_min if c_min > 0 else None
            mean_gap = (
                100.0 * (mean[m] - c_mean_min) / c_mean_min
                if c_mean_min > 0 else None
            )
            table[m] = {
                "best": best[m], "mean": mean[m],
                "gap": gap, "mean_gap": mean_gap,
            }
            if gap is not None:
                method_gaps.setdefault(m, []).append(gap)
            if mean_gap is not None:
                method_mean_gaps.setdefault(m, []).append(mean_gap)
        per_instance[instance_id] = table
    summary = {
        m: {
            "gap": sum(gs) / len(gs),
            "mean_gap": (
                sum(method_mean_gaps[m]) / len(method_mean_gaps[m])
                if m in method_mean_gaps else None
            ),
        }
        for m, gs in method_gaps.items()
    }
    return {"per_instance": per_instance, "summary": summary}


def wilcoxon(pairs) -> WilcoxonOutcome:
    """Signed-rank test on paired per-instance values ``(c1, c2)``.

    Zero differences are dropped; absolute differences are ranked
    ascending with mid-ranks on ties.  The statistic ``W = R+ - R-`` is
    normalized by ``sqrt(N(N+1)(2N+1)/6)`` and the two-tailed p-value
    comes from the normal approximation.
    """
    diffs = [c2 - c1 for c1, c2 in pairs if c2 != c1]
    n = len(diffs)
    if n == 0:
        raise ValueError("all differences are zero; the test is undefined")
    by_abs = sorted(range(n), key=lambda i: abs(diffs[i]))
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and abs(diffs[by_abs[j + 1]]) == abs(diffs[by_abs[i]]):
            j += 1
        mid = (i + j) / 2 + 1  # average of 1-based positions i+1 .. j+1
        for idx in by_abs[i:j + 1]:
            ranks[idx] = mid
        i = j + 1
    r_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)
    r_minus = sum(r for r, d in zip(ranks, diffs) if d < 0)
    w = r_plus - r_minus
    sigma = math.sqrt(n * (n + 1) * (2 * n + 1) / 6)
    z = w / sigma
    p = math.erfc(abs(z) / math.sqrt(2))
    return WilcoxonOutcome(r_plus, r_minus, w, n, z, p, small_sample=n < 10)


def _record_row(rec: RunRecord) -> dict:
    return {
        "instance": rec.instance_id,
        "algorithm": rec.algorithm,
        "seed": rec.seed,
        "best_makespan": rec.best_makespan,
        "time_to_best": rec.time_to_best,
        "total_runtime": rec.total_runtime,
        "iterations": rec.iterations,
        "neighbors_evaluated": rec.neighbors_evaluated,
        "stalled_iterations": rec.stalled_iterations,
        "stop_reason": rec.stop_reason,
    }


def emit_results(records, stats=None, fmt: str = "csv", path="results.csv",
                 configs=None) -> None:
    """Persist run records (stable row order: instance, method, seed)."""
    rows = sorted(
        (_record_row(r) for r in records),
        key=lambda row: (row["instance"], row["algorithm"], row["seed"]),
    )
    try:
        if fmt == "csv":
            with open(path, "w", newline="") as fh:
                writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
                writer.writeheader()
                writer.writerows(rows)
        elif fmt == "json":
            payload = {"records": rows}
            if stats is not None:
                payload["stats"] = stats
            if configs is not None:
                payload["configs"] = [_cfg_dict(c) for c in configs]
            with open(path, "w") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            raise ValueError(f"unknown output format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def read_results_csv(path) -> list:
    """Load records written by emit_results (CSV)."""
    records = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(RunRecord(
                row["instance"],
                row["algorithm"],
                int(row["seed"]),
                int(row["best_makespan"]),
                float(row["time_to_best"]),
                float(row["total_runtime"]),
                int(row["iterations"]),
                int(row["neighbors_evaluated"]),
                int(row["stalled_iterations"]),
                row["stop_reason"],
            ))
    return records
