import json

import pytest

from flexshop.cli import main

from conftest import FIG1_OPTIMUM, FIG1_TEXT


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "fig1.txt"
    path.write_text(FIG1_TEXT)
    return path


def test_construct(instance_file, capsys):
    assert main(["construct", "--instance", str(instance_file)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"assignment", "sequences", "start", "completion",
                            "makespan"}
    assert payload["makespan"] > 0


def test_localsearch(instance_file, capsys):
    assert main(["localsearch", "--instance", str(instance_file),
                 "--neighborhood", "reduced"]) == 0
    captured = capsys.readouterr()
    payload = json.loads(captured.out)
    assert payload["makespan"] == FIG1_OPTIMUM
    assert "neighbors evaluated" in captured.err


def test_solve(instance_file, capsys):
    assert main(["solve", "--instance", str(instance_file), "--algo", "ils",
                 "--iterations", "10", "--seed", "4"]) == 0
    captured = capsys.readouterr()
    payload = json.loads(captured.out)
    assert payload["makespan"] == FIG1_OPTIMUM
    assert "iterations" in captured.err


def test_solve_deterministic_output(instance_file, capsys):
    argv = ["solve", "--instance", str(instance_file), "--algo", "sa",
            "--iterations", "8", "--seed", "2"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second


def test_oracle(instance_file, capsys):
    assert main(["oracle", "--instance", str(instance_file)]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["makespan"] == FIG1_OPTIMUM
    assert "152 feasible" in captured.err


def test_oracle_limit(instance_file, capsys):
    assert main(["oracle", "--instance", str(instance_file),
                 "--limit", "3"]) == 1
    assert "error" in capsys.readouterr().err


def test_alpha_override(instance_file, capsys):
    assert main(["oracle", "--instance", str(instance_file),
                 "--alpha", "0.0001"]) == 0
    payload = json.loads(capsys.readouterr().out)
    # with a near-zero learning rate no position discount applies:
    # 5 operations of standard times 1,1,1,10,1 on 2 machines
    assert payload["makespan"] > FIG1_OPTIMUM


def test_bench_and_stats(instance_file, tmp_path, capsys):
    out = tmp_path / "results.csv"
    assert main(["bench", "--instances", str(instance_file.parent),
                 "--algos", "ils,sa", "--runs", "2", "--iterations", "2",
                 "--out", str(out)]) == 0
    assert "wrote 4 records" in capsys.readouterr().err
    assert main(["stats", "--in", str(out),
                 "--wilcoxon", "ils-reduced,sa-reduced"]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert "fig1" in stats["per_instance"]
    assert "wilcoxon" in stats  # may be absent only if undefined
    assert stats["wilcoxon"]["methods"] == ["ils-reduced", "sa-reduced"]


def test_bench_json_output(instance_file, tmp_path, capsys):
    out = tmp_path / "results.json"
    assert main(["bench", "--instances", str(instance_file.parent),
                 "--algos", "ils", "--runs", "1", "--iterations", "1",
                 "--out", str(out)]) == 0
    capsys.readouterr()
    payload = json.loads(out.read_text())
    assert payload["records"][0]["instance"] == "fig1"
    assert "stats" in payload and "configs" in payload


def test_validate_accepts_own_output(instance_file, tmp_path, capsys):
    assert main(["construct", "--instance", str(instance_file)]) == 0
    solution = tmp_path / "solution.json"
    solution.write_text(capsys.readouterr().out)
    assert main(["validate", "--instance", str(instance_file),
                 "--solution", str(solution)]) == 0
    assert "valid" in capsys.readouterr().out


def test_validate_rejects_wrong_makespan(instance_file, tmp_path, capsys):
    assert main(["construct", "--instance", str(instance_file)]) == 0
    payload = json.loads(capsys.readouterr().out)
    payload["makespan"] += 1
    solution = tmp_path / "solution.json"
    solution.write_text(json.dumps(payload))
    assert main(["validate", "--instance", str(instance_file),
                 "--solution", str(solution)]) == 1
    assert "differs" in capsys.readouterr().err


def test_validate_rejects_infeasible(instance_file, tmp_path, capsys):
    solution = tmp_path / "solution.json"
    solution.write_text(json.dumps({
        "assignment": {"1": 1, "2": 1, "3": 1, "4": 2, "5": 2},
        "sequences": [[2, 1, 3], [4, 5]],  # contradicts precedence 1 -> 2
    }))
    assert main(["validate", "--instance", str(instance_file),
                 "--solution", str(solution)]) == 1
    assert "infeasible" in capsys.readouterr().err
