import cmath
import math

import pytest

twaff = pytest.importorskip("twaff")


def test_fold_table_rows():
    assert twaff.fold("A3^2")["folded_type"] == "C2"
    assert twaff.fold("A4^2")["r1"] == "C2"
    assert twaff.fold("D4^3")["folded_type"] == "G2"
    assert twaff.fold("E6^2")["r1"] == "F4"


def test_twisted_character_at_identity_is_twining_dimension():
    value = twaff.twisted_character("A3^2", [0, 1, 0], [0.0, 0.0])
    dim = int(twaff.twining_dimension("A3^2", [0, 1, 0]))
    assert abs(abs(value) - abs(dim)) < 1e-8


def test_poisson_identity():
    lhs, rhs = twaff.poisson_sides("A2^2", 1.0, [0.4 + 0.3j], [-0.7 + 0.2j])
    assert abs(lhs - rhs) <= 1e-8 * abs(lhs)


def test_zero_weight_character_is_one():
    value = twaff.character_value("A2^2", [0, 0], 0.4, [0.37])
    assert cmath.isclose(value, 1.0, abs_tol=1e-10)


def test_constant_loop_round_trip():
    coords = twaff.classify_constant_loop(3, 2, [0.15], intervals=32)
    assert math.isclose(coords[0], 0.15, abs_tol=1e-8)


def test_cli_contract():
    code, report, _ = twaff.run("fold", "--type", "A", "--rank", "3", "--order", "2")
    assert code == 0
    assert report["result"]["folded_type"] == "C2"
    assert {"version", "seed", "tolerances", "wall_time"} <= report.keys()
    code, report, err = twaff.run("fold", "--nope")
    assert code == 2 and report is None and err


def test_acceptance_criterion_record():
    record = twaff.run_criterion(1)
    assert record["pass"] is True
    assert record["id"] == 1
