import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffell.errors import EvaluationFailure, NoSignChange
from pfaffell.numerics import Bracket, Tolerance, central_diff, find_root_monotone, rel_residual, sample_rng


def test_rel_residual_uses_unit_floor():
    assert rel_residual(1e-3, 0.0) == 1e-3
    assert rel_residual(200.0, 100.0) == 0.5
    assert rel_residual(1 + 1j, 1 + 1j) == 0.0


def test_tolerance_rejects_nonpositive():
    with pytest.raises(ValueError):
        Tolerance(rel_tol=0.0)
    with pytest.raises(ValueError):
        Bracket(1.0, 1.0)


@pytest.mark.parametrize("target", [0.1, 2.0, 17.5])
def test_root_increasing_and_decreasing(target):
    tol = Tolerance(abs_tol=1e-14)
    x = find_root_monotone(lambda x: x**3 - target, Bracket(0.0, 5.0), tol)
    assert abs(x - target ** (1 / 3)) < 1e-12
    y = find_root_monotone(lambda x: target - x**3, Bracket(0.0, 5.0), tol)
    assert abs(y - x) < 1e-12


def test_root_without_sign_change():
    with pytest.raises(NoSignChange):
        find_root_monotone(lambda x: x + 10, Bracket(0.0, 1.0))


@given(st.floats(-3, 3), st.floats(0.1, 4))
@settings(max_examples=50, deadline=None)
def test_central_diff_matches_derivative(x, k):
    val = central_diff(lambda y: math.sin(k * y), x)
    assert abs(val - k * math.cos(k * x)) < 1e-7 * max(1.0, k**3)


def test_central_diff_failures():
    with pytest.raises(EvaluationFailure):
        central_diff(lambda y: 1 / y if y > 0 else 1 / 0, 0.0)
    with pytest.raises(ValueError):
        central_diff(math.sin, 0.0, h=-1.0)


def test_sample_rng_is_counter_based():
    a = sample_rng(7, 3, 2).uniform(size=4)
    b = sample_rng(7, 3, 2).uniform(size=4)
    c = sample_rng(7, 2, 3).uniform(size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
