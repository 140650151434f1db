import json
import math

import pytest

import bsloc


def centroid_scenario():
    return {
        "dimension": 2,
        "users": [
            {"position": [0.0, 0.0], "beta": 1.0, "nu": 2.0},
            {"position": [2.0, 0.0], "beta": 3.0, "nu": 2.0},
        ],
    }


def test_solve_weighted_centroid():
    result = bsloc.solve(centroid_scenario())
    assert result["method"] == "weighted_centroid"
    assert result["converged"] is True
    assert result["c_star"] == pytest.approx([1.5, 0.0], abs=1e-12)
    assert result["certificate"]["passed"] is True


def test_solve_accepts_json_text():
    result = bsloc.solve(json.dumps(centroid_scenario()))
    assert result["c_star"] == pytest.approx([1.5, 0.0], abs=1e-12)


def test_mixed_exponents_round_trip():
    scenario = {
        "dimension": 2,
        "users": [
            {"position": [0.0, 0.0], "beta": 1.0, "nu": 1.5},
            {"position": [4.0, 0.0], "beta": 2.0, "nu": 3.0},
            {"position": [0.0, 3.0], "beta": 1.0, "nu": 2.0},
        ],
    }
    result = bsloc.solve(scenario)
    assert result["converged"] is True
    certificate = bsloc.verify(scenario, result["c_star"])
    assert certificate["passed"] is True
    assert certificate["hull"]["member"] is True
    value = bsloc.objective(scenario, result["c_star"])
    assert value == pytest.approx(result["total_power_w"], rel=1e-12)


def test_enclosing_ball():
    scenario = {
        "dimension": 1,
        "users": [{"position": [x], "beta": 1.0, "nu": 1.0} for x in (0, 1, 2, 10)],
    }
    ball = bsloc.enclosing_ball(scenario)
    assert ball["center"] == pytest.approx([5.0], abs=1e-9)
    assert ball["radius"] == pytest.approx(5.0, abs=1e-9)


def test_validation_error_raises():
    bad = {"dimension": 2, "users": [{"position": [0.0, 0.0], "beta": 1.0, "nu": 0.5}]}
    with pytest.raises(ValueError):
        bsloc.solve(bad)


def test_constrained_solution_reports_duals():
    scenario = {
        "dimension": 2,
        "users": [{"position": [10.0, 0.0], "beta": 1.0, "nu": 2.0}],
        "constraints": [{"center": [0.0, 0.0], "radius": 1.0}],
    }
    result = bsloc.solve(scenario)
    assert result["c_star"] == pytest.approx([1.0, 0.0], abs=1e-8)
    assert result["mu"] == pytest.approx([9.0], abs=1e-6)

    distance = math.dist(result["c_star"], [10.0, 0.0])
    assert result["total_power_w"] == pytest.approx(distance**2, rel=1e-9)
