"""Shared model generators for the test suite."""

import math

import numpy as np
import pytest

from pfaffell.curves import m_threshold
from pfaffell.hirota import PolynomialTauModel, TimePoint
from pfaffell.numerics import sample_rng


def random_even_kp_model(rng, M=None, max_degree=4, n_terms=6):
    """KP model depending on t0 and even times only."""
    M = int(rng.integers(2, 7)) if M is None else M
    even = [0] + list(range(2, M + 1, 2))
    terms = {}
    for _ in range(n_terms):
        deg = int(rng.integers(1, max_degree + 1))
        e = [0] * (M + 1)
        for _ in range(deg):
            e[int(rng.choice(even))] += 1
        terms[tuple(e)] = rng.uniform(-1, 1)
    return PolynomialTauModel("KP", M, terms)


def random_real_toda_model(rng, M=2, max_degree=3, n_terms=6):
    """Toda model invariant under t_k <-> tbar_k with real coefficients."""
    n = M + 1
    terms = {}
    for _ in range(n_terms):
        deg = int(rng.integers(1, max_degree + 1))
        e = [0] * (2 * n)
        for _ in range(deg):
            e[int(rng.integers(0, 2 * n))] += 1
        c = rng.uniform(-0.5, 0.5)
        swapped = tuple(e[n:] + e[:n])
        terms[tuple(e)] = terms.get(tuple(e), 0.0) + c
        terms[swapped] = terms.get(swapped, 0.0) + c
    return PolynomialTauModel("Toda", M, terms)


def conjugate_point(rng, M, scale=0.5):
    t = rng.uniform(-scale, scale, M + 1) + 1j * rng.uniform(-scale, scale, M + 1)
    return TimePoint.toda(t)


def synthetic_kp_model(rng, M=3):
    """Quadratic KP model whose curve data v / r^2 lie above the threshold,
    plus cubic terms in t2, t3; returns (model, point)."""
    F00 = rng.uniform(-0.5, 0.5)
    F01, F02, F13, F22 = rng.uniform(-0.5, 0.5, 4)
    m = m_threshold() * rng.uniform(1.05, 3.0)
    F11 = (m * math.exp(2 * F00) - F01**2 + F02) / 2
    second = {(0, 0): F00, (0, 1): F01, (0, 2): F02, (1, 1): F11, (1, 3): F13, (2, 2): F22}
    base = PolynomialTauModel.from_second_derivatives("KP", M, second)
    cubic = {(0, 0, 1, 2): rng.uniform(-0.2, 0.2), (0, 0, 0, 3): rng.uniform(-0.2, 0.2)}
    model = PolynomialTauModel("KP", M, list(base.terms) + list(cubic.items()))
    point = TimePoint.kp([rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), 0.0, 0.0])
    return model, point


@pytest.fixture
def rng():
    return sample_rng(1234)
