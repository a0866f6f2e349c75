"""Trajectory metaheuristics: ILS, GRASP, tabu search, simulated annealing.

All four start (except GRASP, which constructs its own starts) from the
better of the two deterministic constructive heuristics and share the
remove/insert move machinery.  Each run owns one seeded RNG; budgets can
be wall-clock seconds, an iteration cap (for deterministic testing), or
both.
"""

import math
import random
import time
from dataclasses import dataclass, field

from .instance import Instance
from .graph import Schedule
from .moves import (
    NEIGHBORHOOD_MODES,
    feasible_window,
    insert_op,
    remove_op,
)
from .local_search import LocalSearchConfig, local_search
from .constructive import best_of_est_ect, construct_ect, construct_est

__all__ = [
    "ALGORITHMS",
    "MetaConfig",
    "RunRecord",
    "perturb",
    "run",
    "run_ils",
    "run_grasp",
    "run_ts",
    "run_sa",
]

ALGORITHMS = ("ils", "grasp", "ts", "sa")

# calibrated parameter defaults, keyed by (algorithm, neighborhood mode)
_CALIBRATED = {
    ("ils", "reduced"): {"ils_perturb_min": 2, "ils_perturb_max": 4},
    ("ils", "cropped"): {"ils_perturb_min": 1, "ils_perturb_max": 3},
    ("grasp", "reduced"): {"grasp_alpha": 0.38},
    ("grasp", "cropped"): {"grasp_alpha": 0.59},
    ("ts", "reduced"): {"ts_factor": 0.9},
    ("ts", "cropped"): {"ts_factor": 0.5},
}


@dataclass(frozen=True)
class MetaConfig:
    algo: str = "ils"
    mode: str = "reduced"  # neighborhood used by the embedded search
    time_budget: float | None = None  # wall-clock seconds
    max_iterations: int | None = None  # outer-loop cap, for determinism
    seed: int = 0
    ils_perturb_min: int = 2
    ils_perturb_max: int = 4
    grasp_alpha: float = 0.38
    ts_factor: float = 0.9
    sa_sweep: int = 3
    sa_t0_p: float = 0.78
    sa_t0_m: float = 0.79
    sa_tf: float = 1e-3
    sa_delta: float = 0.82
    target_makespan: int | None = None  # stop once the incumbent reaches it
    no_improve_limit: float | None = None  # seconds; opt-in secondary stop
    check_every: int = 64  # wall-clock poll interval, in candidate evals

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}")
        if self.mode not in NEIGHBORHOOD_MODES:
            raise ValueError(f"unknown neighborhood mode {self.mode!r}")
        if not 1 <= self.ils_perturb_min <= self.ils_perturb_max:
            raise ValueError("need 1 <= ils_perturb_min <= ils_perturb_max")
        if not 0 < self.sa_delta < 1:
            raise ValueError("sa_delta must lie in (0, 1)")
        if self.sa_tf <= 0 or self.sa_t0() < self.sa_tf:
            raise ValueError("need T0 >= Tf > 0")

    def sa_t0(self) -> float:
        return -self.sa_t0_p / math.log(self.sa_t0_m)

    def ts_list_size(self, inst: Instance) -> int:
        return math.ceil((inst.num_operations + inst.num_machines) * self.ts_factor)

    @classmethod
    def calibrated(cls, algo: str, mode: str = "reduced", **overrides) -> "MetaConfig":
        """Config preloaded with the calibrated defaults for (algo, mode)."""
        params = dict(_CALIBRATED.get((algo, mode), {}))
        params.update(overrides)
        return cls(algo=algo, mode=mode, **params)


@dataclass
class RunRecord:
    instance_id: str
    algorithm: str
    seed: int
    best_makespan: int
    time_to_best: float
    total_runtime: float
    iterations: int
    neighbors_evaluated: int
    stalled_iterations: int
    stop_reason: str
    schedule: Schedule | None = field(default=None, repr=False, compare=False)


class _Run:
    """Per-run bookkeeping: clock, budget and incumbent tracking."""

    def __init__(self, inst: Instance, cfg: MetaConfig):
        self.inst = inst
        self.cfg = cfg
        self.started = time.monotonic()
        self.deadline = (
            None if cfg.time_budget is None else self.started + cfg.time_budget
        )
        self.iterations = 0
        self.neighbors = 0
        self.stalled = 0
        self.incumbent: Schedule | None = None
        self.time_to_best = 0.0
        self.last_improved = self.started
        self.stop_reason = "budget"
        self._ticks = 0

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def remaining(self) -> float | None:
        if self.deadline is None:
            return None
        return max(0.0, self.deadline - time.monotonic())

    def record_candidate(self) -> bool:
        """Count one candidate evaluation; True when the run must stop."""
        self.neighbors += 1
        self._ticks += 1
        if self._ticks >= self.cfg.check_every:
            self._ticks = 0
            return self.out_of_time()
        return False

    def out_of_time(self) -> bool:
        if self.deadline is not None and time.monotonic() >= self.deadline:
            self.stop_reason = "budget"
            return True
        if (self.cfg.no_improve_limit is not None
                and time.monotonic() - self.last_improved
                > self.cfg.no_improve_limit):
            self.stop_reason = "no-improvement"
            return True
        return False

    def exhausted(self) -> bool:
        if (self.cfg.max_iterations is not None
                and self.iterations >= self.cfg.max_iterations):
            self.stop_reason = "iteration-cap"
            return True
        return self.out_of_time()

    def offer(self, sched: Schedule) -> bool:
        """Update the incumbent; True when the target makespan is reached."""
        if self.incumbent is None or sched.makespan < self.incumbent.makespan:
            self.incumbent = sched
            self.time_to_best = self.elapsed()
            self.last_improved = time.monotonic()
        if (self.cfg.target_makespan is not None
                and self.incumbent.makespan <= self.cfg.target_makespan):
            self.stop_reason = "target"
            return True
        return False

    def finish(self, instance_id: str = "") -> RunRecord:
        assert self.incumbent is not None
        return RunRecord(
            instance_id or self.inst.name,
            f"{self.cfg.algo}-{self.cfg.mode}",
            self.cfg.seed,
            self.incumbent.makespan,
            self.time_to_best,
            self.elapsed(),
            self.iterations,
            self.neighbors,
            self.stalled,
            self.stop_reason,
            self.incumbent,
        )


def perturb(inst: Instance, sched: Schedule, rng: random.Random) -> Schedule:
    """Relocate one uniformly random operation to a uniformly random
    cycle-free slot.  Only the cycle bounds constrain the slot; the
    longest-path reduction is not applied."""
    v = rng.randint(1, inst.num_operations)
    rs = remove_op(inst, sched, v)
    machines = sorted(inst.eligible_machines(v))
    k = machines[rng.randrange(len(machines))]
    window = feasible_window(rs, k, reduction_active=False, c_max=0)
    gamma = rng.randint(window.lower + 1, window.upper)
    return insert_op(inst, rs, v, k, gamma)


def _ls_config(run: _Run) -> LocalSearchConfig:
    return LocalSearchConfig(run.cfg.mode, "best", run.remaining())


def run_ils(inst: Instance, cfg: MetaConfig,
            rng: random.Random | None = None) -> RunRecord:
    """Iterated local search: descend, perturb the local optimum, repeat."""
    rng = rng or random.Random(cfg.seed)
    run = _Run(inst, cfg)
    current = best_of_est_ect(inst)
    if run.offer(current):
        return run.finish()
    while not run.exhausted():
        result = local_search(inst, current, _ls_config(run))
        run.neighbors += result.neighbors_evaluated
        run.iterations += 1
        if run.offer(result.schedule):
            break
        length = rng.randint(cfg.ils_perturb_min, cfg.ils_perturb_max)
        current = result.schedule
        for _ in range(length):
            current = perturb(inst, current, rng)
    return run.finish()


def run_grasp(inst: Instance, cfg: MetaConfig,
              rng: random.Random | None = None) -> RunRecord:
    """GRASP: randomized construction plus local search, best kept.

    At least one iteration always runs so the incumbent is well defined.
    """
    rng = rng or random.Random(cfg.seed)
    run = _Run(inst, cfg)
    while True:
        ect = construct_ect(inst, cfg.grasp_alpha, rng)
        est = construct_est(inst, cfg.grasp_alpha, rng)
        start = ect if ect.makespan < est.makespan else est
        result = local_search(inst, start, _ls_config(run))
        run.neighbors += result.neighbors_evaluated
        run.iterations += 1
        if run.offer(result.schedule):
            break
        if run.exhausted():
            break
    return run.finish()


def run_ts(inst: Instance, cfg: MetaConfig,
           rng: random.Random | None = None) -> RunRecord:
    """Tabu search over the reduced (or cropped) neighborhood.

    The chosen move's (operation, machine) pair becomes tabu; a tabu move
    is still admissible when it beats both the scan's best and the
    incumbent.  A scan with no admissible move evicts the oldest tabu
    entry and is counted as stalled.
    """
    rng = rng or random.Random(cfg.seed)
    run = _Run(inst, cfg)
    current = best_of_est_ect(inst)
    if run.offer(current):
        return run.finish()
    tabu: list = []
    t_max = cfg.ts_list_size(inst)
    while not run.exhausted():
        if cfg.mode == "cropped":
            critical = set(current.critical_path)
            candidates = [v for v in inst.operations if v in critical]
        else:
            candidates = list(inst.operations)
        best: Schedule | None = None
        chosen = None
        interrupted = False
        for v in candidates:
            rs = remove_op(inst, current, v)
            for k in sorted(inst.eligible_machines(v)):
                window = feasible_window(rs, k, True, current.makespan)
                for gamma in window.positions:
                    cand = insert_op(inst, rs, v, k, gamma)
                    if run.record_candidate():
                        interrupted = True
                        break
                    best_len = math.inf if best is None else best.makespan
                    admissible = (
                        (cand.makespan < best_len and (v, k) not in tabu)
                        or cand.makespan < min(best_len,
                                               run.incumbent.makespan)
                    )
                    if admissible:
                        best = cand
                        chosen = (v, k)
                if interrupted:
                    break
            if interrupted:
                break
        run.iterations += 1
        if interrupted and best is None:
            break
        if best is None:
            run.stalled += 1
            if tabu:
                tabu.pop(0)
            continue
        if chosen in tabu:
            tabu.remove(chosen)
        tabu.append(chosen)
        if len(tabu) > t_max:
            tabu.pop(0)
        current = best
        if run.offer(current):
            break
        if interrupted:
            break
    return run.finish()


def run_sa(inst: Instance, cfg: MetaConfig,
           rng: random.Random | None = None) -> RunRecord:
    """Simulated annealing with geometric cooling on the relative gap."""
    rng = rng or random.Random(cfg.seed)
    run = _Run(inst, cfg)
    current = best_of_est_ect(inst)
    if run.offer(current):
        return run.finish()
    temperature = cfg.sa_t0()
    while not run.exhausted():
        stop = False
        for _ in range(cfg.sa_sweep):
            cand = perturb(inst, current, rng)
            delta = (cand.makespan - current.makespan) / current.makespan
            r = rng.random()
            try:
                accept = math.exp(-delta / temperature) >= r
            except OverflowError:
                accept = delta < 0
            if accept:
                current = cand
                if run.offer(current):
                    stop = True
                    break
            if run.record_candidate():
                stop = True
                break
        run.iterations += 1
        if stop:
            break
        temperature = max(cfg.sa_delta * temperature, cfg.sa_tf)
    return run.finish()


_RUNNERS = {"ils": run_ils, "grasp": run_grasp, "ts": run_ts, "sa": run_sa}


def run(inst: Instance, cfg: MetaConfig,
        rng: random.Random | None = None) -> RunRecord:
    """Dispatch to the configured metaheuristic."""
    return _RUNNERS[cfg.algo](inst, cfg, rng)
