import math
import random

import pytest

from flexshop import (
    MetaConfig,
    best_of_est_ect,
    perturb,
    run,
    run_grasp,
    run_ils,
    run_sa,
    run_ts,
    validate_schedule,
)

from conftest import FIG1_OPTIMUM, random_instance


class ScriptedRNG:
    """Stand-in RNG replaying a fixed script of draws."""

    def __init__(self, randints=(), randranges=(), randoms=()):
        self._randints = list(randints)
        self._randranges = list(randranges)
        self._randoms = list(randoms)

    def randint(self, a, b):
        value = self._randints.pop(0)
        assert a <= value <= b
        return value

    def randrange(self, n):
        value = self._randranges.pop(0)
        assert 0 <= value < n
        return value

    def random(self):
        return self._randoms.pop(0)


def test_calibrated_defaults():
    assert MetaConfig.calibrated("ils", "reduced").ils_perturb_min == 2
    assert MetaConfig.calibrated("ils", "reduced").ils_perturb_max == 4
    assert MetaConfig.calibrated("ils", "cropped").ils_perturb_min == 1
    assert MetaConfig.calibrated("ils", "cropped").ils_perturb_max == 3
    assert MetaConfig.calibrated("grasp", "reduced").grasp_alpha == 0.38
    assert MetaConfig.calibrated("grasp", "cropped").grasp_alpha == 0.59
    assert MetaConfig.calibrated("ts", "reduced").ts_factor == 0.9
    assert MetaConfig.calibrated("ts", "cropped").ts_factor == 0.5
    sa = MetaConfig.calibrated("sa", "reduced")
    assert (sa.sa_sweep, sa.sa_t0_p, sa.sa_t0_m) == (3, 0.78, 0.79)
    assert (sa.sa_tf, sa.sa_delta) == (1e-3, 0.82)
    override = MetaConfig.calibrated("ts", "reduced", ts_factor=0.4, seed=7)
    assert override.ts_factor == 0.4
    assert override.seed == 7


def test_config_validation():
    with pytest.raises(ValueError):
        MetaConfig(algo="bogus")
    with pytest.raises(ValueError):
        MetaConfig(mode="bogus")
    with pytest.raises(ValueError):
        MetaConfig(ils_perturb_min=5, ils_perturb_max=3)
    with pytest.raises(ValueError):
        MetaConfig(sa_delta=1.0)
    with pytest.raises(ValueError):
        MetaConfig(sa_tf=0.0)


def test_sa_initial_temperature():
    cfg = MetaConfig(algo="sa")
    assert cfg.sa_t0() == pytest.approx(-0.78 / math.log(0.79))
    # geometric cooling reaches and then sticks to the floor
    t = cfg.sa_t0()
    for _ in range(200):
        t = max(cfg.sa_delta * t, cfg.sa_tf)
    assert t == cfg.sa_tf


def test_tabu_list_size(fig1):
    # ceil((5 + 2) * 0.9) = 7
    assert MetaConfig.calibrated("ts", "reduced").ts_list_size(fig1) == 7
    assert MetaConfig.calibrated("ts", "cropped").ts_list_size(fig1) == 4


def test_perturb_scripted_move(fig1, fig2a):
    # draw op 2, machine 2 (index 1), position 2: the known 658 -> 528 move
    rng = ScriptedRNG(randints=[2, 2], randranges=[1])
    sched = perturb(fig1, fig2a, rng)
    assert sched.makespan == 528
    assert sched.sequences == ((), (1, 2, 4, 5, 3))


def test_perturb_ignores_the_longest_path_reduction(fig1, fig2a):
    # machine 1's reduced window for op 2 is empty (no critical operation
    # there), but the cycle-free slot 1 is still available to a perturbation
    rng = ScriptedRNG(randints=[2, 1], randranges=[0])
    sched = perturb(fig1, fig2a, rng)
    assert validate_schedule(fig1, sched) == []
    assert sched.key() == fig2a.key()  # op 2 lands back on machine 1


def test_perturb_fuzz_keeps_feasibility():
    rng = random.Random(53)
    for _ in range(10):
        inst = random_instance(rng)
        sched = best_of_est_ect(inst)
        for _ in range(20):
            sched = perturb(inst, sched, rng)
            assert validate_schedule(inst, sched) == []


@pytest.mark.parametrize("algo", ["ils", "grasp", "ts", "sa"])
def test_each_algorithm_finds_the_optimum(fig1, algo):
    cfg = MetaConfig.calibrated(algo, "reduced", max_iterations=40, seed=1)
    record = run(fig1, cfg)
    assert record.best_makespan == FIG1_OPTIMUM
    assert record.algorithm == f"{algo}-reduced"
    assert record.stop_reason in ("iteration-cap", "target")
    assert validate_schedule(fig1, record.schedule) == []


@pytest.mark.parametrize("algo", ["ils", "grasp", "ts", "sa"])
def test_seeded_runs_are_reproducible(fig1, algo):
    cfg = MetaConfig.calibrated(algo, "reduced", max_iterations=15, seed=9)
    a = run(fig1, cfg)
    b = run(fig1, cfg)
    assert a.best_makespan == b.best_makespan
    assert a.iterations == b.iterations
    assert a.neighbors_evaluated == b.neighbors_evaluated
    assert a.schedule.key() == b.schedule.key()


def test_target_makespan_stops_immediately(fig1):
    cfg = MetaConfig(algo="ils", target_makespan=10**6, max_iterations=50)
    record = run_ils(fig1, cfg)
    assert record.stop_reason == "target"
    assert record.iterations == 0


def test_zero_budget_still_returns_a_feasible_solution(fig1):
    start = best_of_est_ect(fig1)
    for runner in (run_ils, run_ts, run_sa):
        record = runner(fig1, MetaConfig(algo="sa", time_budget=0.0))
        assert record.best_makespan == start.makespan
        assert record.stop_reason == "budget"
        assert validate_schedule(fig1, record.schedule) == []
    # GRASP always completes at least one construction + descent
    record = run_grasp(fig1, MetaConfig(algo="grasp", time_budget=0.0))
    assert record.iterations >= 1
    assert validate_schedule(fig1, record.schedule) == []


def test_iteration_cap_counts_outer_iterations(fig1):
    cfg = MetaConfig(algo="ils", max_iterations=3)
    record = run_ils(fig1, cfg)
    assert record.iterations == 3
    assert record.stop_reason == "iteration-cap"


def test_incumbent_never_worsens(fig1):
    start = best_of_est_ect(fig1)
    for algo in ("ils", "grasp", "ts", "sa"):
        for seed in range(4):
            cfg = MetaConfig.calibrated(algo, "reduced", max_iterations=10,
                                        seed=seed)
            record = run(fig1, cfg)
            assert record.best_makespan <= start.makespan
            assert record.time_to_best <= record.total_runtime + 1e-9


def test_cropped_mode_runs(fig1):
    for algo in ("ils", "grasp", "ts", "sa"):
        cfg = MetaConfig.calibrated(algo, "cropped", max_iterations=20, seed=3)
        record = run(fig1, cfg)
        assert record.algorithm == f"{algo}-cropped"
        assert validate_schedule(fig1, record.schedule) == []


def test_sa_always_accepts_improvements():
    cfg = MetaConfig(algo="sa")
    temperature = cfg.sa_tf  # coldest possible
    for delta in (-0.5, -1e-9, 0.0):
        # acceptance draw r < 1 always passes for non-worsening moves
        assert math.exp(-delta / temperature) >= 0.999999
