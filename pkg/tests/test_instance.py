import random

import pytest

from flexshop import (
    Instance,
    InstanceError,
    import_classical_fjs,
    parse_instance,
    serialize_instance,
    validate_instance,
)

from conftest import FIG1_TEXT, random_instance


def test_parse_fig1():
    inst = parse_instance(FIG1_TEXT, "fig1")
    assert inst.num_operations == 5
    assert inst.num_machines == 2
    assert inst.learning_rate == 1.0
    assert inst.eligible == ((1, 2),) * 5
    assert inst.std_time[(4, 1)] == 10
    assert inst.std_time[(4, 2)] == 10
    assert inst.std_time[(1, 1)] == 1
    assert inst.precedence_arcs == frozenset({(1, 2), (2, 3), (4, 5)})
    assert sorted(inst.predecessors(3)) == [2]
    assert sorted(inst.successors(1)) == [2]
    assert sorted(inst.predecessors(1)) == []


def test_comments_and_whitespace():
    text = "# header comment\n1 1 0.5\n1 1 7  # inline\n\n0\n"
    inst = parse_instance(text)
    assert inst.num_operations == 1
    assert inst.std_time[(1, 1)] == 7
    assert inst.learning_rate == 0.5


def test_round_trip_fig1():
    inst = parse_instance(FIG1_TEXT, "fig1")
    assert parse_instance(serialize_instance(inst), "fig1") == inst


def test_round_trip_random_instances():
    rng = random.Random(7)
    for _ in range(30):
        inst = random_instance(rng)
        assert parse_instance(serialize_instance(inst)) == inst


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "operation count"),
        ("1 1 1.0\n1 1", "standard time"),
        ("1 1 1.0\n1 1 x\n0", "expected"),
        ("1 1 1.0\n1 1 5\n0\nextra", "trailing"),
        ("1 1 1.0\n1 1 5\n1\n1 1", "self-loop"),
        ("2 1 1.0\n1 1 5\n1 1 5\n2\n1 2\n2 1", "cycle"),
        ("1 1 1.0\n0\n0", "empty eligibility"),
        ("1 1 0.0\n1 1 5\n0", "learning_rate"),
        ("1 1 1.0\n1 2 5\n0", "out of range"),
        ("2 1 1.0\n1 1 5\n1 1 5\n1\n1 3", "out of range"),
    ],
)
def test_parse_rejects_bad_input(text, fragment):
    with pytest.raises(InstanceError, match=fragment):
        parse_instance(text)


def test_error_reports_line_number():
    with pytest.raises(InstanceError, match="line 2"):
        parse_instance("1 1 1.0\n1 oops 5\n0")


def test_validate_reports_all_violations():
    inst = Instance(2, 1, ((1,), ()), {(1, 1): -3}, frozenset({(1, 2), (2, 1)}),
                    0.0)
    violations = validate_instance(inst)
    text = "\n".join(violations)
    assert "learning_rate" in text
    assert "empty eligibility" in text
    assert "negative standard time" in text
    assert "cycle" in text


def test_validate_clean_instance(fig1):
    assert validate_instance(fig1) == []


def test_classical_import_chains_jobs():
    # two jobs; job 1 has two operations, job 2 one operation
    text = "2 2\n2  2 1 1 2 2  1 2 3\n1  1 1 4\n"
    inst = import_classical_fjs(text, learning_rate=0.3, name="mini")
    assert inst.num_operations == 3
    assert inst.num_machines == 2
    assert inst.precedence_arcs == frozenset({(1, 2)})
    assert inst.eligible == ((1, 2), (2,), (1,))
    assert inst.std_time == {(1, 1): 1, (1, 2): 2, (2, 2): 3, (3, 1): 4}
    assert inst.learning_rate == 0.3
    assert validate_instance(inst) == []


def test_classical_import_skips_flexibility_figure():
    text = "1 2 1.5\n1  1 1 9\n"
    inst = import_classical_fjs(text)
    assert inst.num_operations == 1
    assert inst.std_time == {(1, 1): 9}


def test_classical_import_rejects_truncation():
    with pytest.raises(InstanceError, match="end of file"):
        import_classical_fjs("1 1\n2  1 1 5\n")


def test_with_learning_rate(fig1):
    other = fig1.with_learning_rate(0.2)
    assert other.learning_rate == 0.2
    assert other.std_time == fig1.std_time
    assert fig1.learning_rate == 1.0  # original untouched


def test_name_not_part_of_identity(fig1):
    assert fig1 == parse_instance(FIG1_TEXT, "other-name")
