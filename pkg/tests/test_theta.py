import cmath
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffell.errors import UnsupportedOrder
from pfaffell.numerics import central_diff, rel_residual
from pfaffell.theta import (
    ModularParam,
    as_modular,
    half_period,
    lam,
    modular_invariant_m,
    quasi_periodicity_sides,
    theta,
    theta_constants,
    theta_deriv,
    zero_distance,
)


def oracle(a, u, t, K=30):
    """Bilateral sums over |k| <= K, written independently of the package."""
    q = math.exp(-math.pi * t)
    s = 0j
    for k in range(-K, K + 1):
        if a == 3:
            s += q ** (k * k) * cmath.exp(2j * math.pi * k * u)
        elif a == 4:
            s += (-1) ** k * q ** (k * k) * cmath.exp(2j * math.pi * k * u)
        elif a == 2:
            s += q ** ((k + 0.5) ** 2) * cmath.exp(2j * math.pi * (k + 0.5) * u)
        else:
            s += 1j * (-1) ** k * q ** ((k + 0.5) ** 2) * cmath.exp(2j * math.pi * (k + 0.5) * u) * -1
    return s


u_strategy = st.complex_numbers(max_magnitude=0.6, allow_nan=False, allow_infinity=False)


@given(st.sampled_from([1, 2, 3, 4]), u_strategy, st.floats(0.8, 3.0))
@settings(max_examples=200, deadline=None)
def test_matches_direct_sum(a, u, t):
    want = oracle(a, u, t)
    assert abs(theta(a, u, t) - want) <= 1e-13 * max(1.0, abs(want))


def test_matches_mpmath():
    mp = pytest.importorskip("mpmath")
    t = 1.37
    q = math.exp(-math.pi * t)
    for a in (1, 2, 3, 4):
        for u in (0.1, 0.3 + 0.2j, -0.45 + 0.5j):
            assert abs(theta(a, u, t) - complex(mp.jtheta(a, math.pi * u, q))) < 1e-14


def test_far_from_origin_uses_periodicity():
    t = 1.2
    u = 0.3 + 0.1j
    far = u + 7 + 5j * t
    ref = theta(3, u, t) * cmath.exp(-1j * math.pi * 25 * 1j * t - 10j * math.pi * u)
    assert abs(theta(3, far, t) - ref) <= 1e-12 * abs(ref)


@pytest.mark.parametrize("t", [1.0, 1.5, 3.0])
def test_constants(t):
    th2, th3, th4, th1p = theta_constants(t)
    assert abs(th1p - math.pi * th2 * th3 * th4) < 1e-14
    assert abs(th3**4 - th2**4 - th4**4) < 1e-14
    assert abs(lam(t) + 1 / lam(t) - modular_invariant_m(t)) < 1e-14


def test_threshold_value():
    assert abs(modular_invariant_m(1.0) - 3 / math.sqrt(2)) < 1e-14


@pytest.mark.parametrize("a", [1, 2, 3, 4])
@pytest.mark.parametrize("order", [1, 2, 3])
def test_derivatives_against_differences(a, order):
    t, u = 1.3, 0.17 + 0.11j
    lower = (lambda x: theta(a, x, t)) if order == 1 else (lambda x: theta_deriv(a, x, t, order - 1))
    assert abs(theta_deriv(a, u, t, order) - central_diff(lower, u)) < 1e-6


def test_derivative_order_cap():
    with pytest.raises(UnsupportedOrder):
        theta_deriv(1, 0.1, 1.0, 5)
    with pytest.raises(UnsupportedOrder):
        theta_deriv(1, 0.1, 1.0, 0)


@given(st.sampled_from([1, 2, 3, 4]), u_strategy)
@settings(max_examples=60, deadline=None)
def test_parity_and_periodicity(a, u):
    t = 1.4
    sign = -1 if a == 1 else 1
    assert abs(theta(a, -u, t) - sign * theta(a, u, t)) < 1e-13
    for lhs, rhs in quasi_periodicity_sides(a, u, t):
        assert rel_residual(lhs, rhs) < 1e-12


@pytest.mark.parametrize("a", [1, 2, 3, 4])
def test_zeros_at_half_periods(a):
    t = 1.6
    w = half_period(a - 1, t)
    assert abs(theta(a, w, t)) < 1e-15
    assert zero_distance(a, w + 2 + 1j * t, t) < 1e-14


def test_modular_param_validation():
    with pytest.raises(ValueError):
        ModularParam(0.0)
    with pytest.raises(ValueError):
        as_modular(0.1 + 1j)
    assert as_modular(2j).t == 2.0
