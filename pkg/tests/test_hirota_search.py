import math

import pytest

from pfaffell.errors import NoSolutionFound, VariantMismatch
from pfaffell.hirota import TimePoint, eval_equation, quadratic_solution_search, random_point
from pfaffell.hirota.search import derivative_name, parse_derivative_name
from pfaffell.numerics import sample_rng


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_simp1_with_f01_fixed(seed):
    model = quadratic_solution_search(["SIMP1A", "SIMP1B"], fixed={"F01": 0}, seed=seed)
    H = model.hessian(TimePoint.kp([0.0]))
    assert abs(H[1, 1]) == pytest.approx(math.sqrt(2), rel=1e-12)
    H[1, 1] = 0
    assert abs(H).max() < 1e-12


def test_simp2_with_diagonal_fixed():
    model = quadratic_solution_search(["SIMP2A", "SIMP2B"], fixed={"F00": 0, "F0b0b": 0}, seed=0)
    H = model.hessian(TimePoint.toda([0.0]))
    a, b = H[0, 2].real, H[1, 3].real
    assert a != 0
    assert b == pytest.approx(2 * math.sinh(2 * a), rel=1e-10)
    rng = sample_rng(3)
    for _ in range(20):
        p = random_point(model, rng)
        assert eval_equation("SIMP2A", model, p).rel_res < 1e-12
        assert eval_equation("SIMP2B", model, p).rel_res < 1e-12


def test_infeasible_constraints():
    with pytest.raises(NoSolutionFound) as info:
        quadratic_solution_search(["SIMP1A"], fixed={"F00": 0, "F11": 0, "F22": 0, "F13": 0}, seed=0)
    assert info.value.best_residual == pytest.approx(12)


def test_bad_requests():
    with pytest.raises(VariantMismatch):
        quadratic_solution_search(["SIMP1A", "SIMP2A"])
    with pytest.raises(ValueError):
        quadratic_solution_search(["D1"])
    with pytest.raises(ValueError):
        quadratic_solution_search(["SIMP1A"], fixed={"F77": 0})


def test_derivative_names():
    assert parse_derivative_name("F0b1", "Toda", 1) == (1, 2)
    assert parse_derivative_name("F00b", "Toda", 1) == (0, 2)
    assert derivative_name(1, 2, "Toda", 1) == "F10b"
    with pytest.raises(VariantMismatch):
        parse_derivative_name("F0b1", "KP", 3)
