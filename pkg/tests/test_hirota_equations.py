import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import conjugate_point, random_real_toda_model
from pfaffell.errors import SingularArgs, VariantMismatch
from pfaffell.hirota import (
    EQUATION_IDS,
    PolynomialTauModel,
    TimePoint,
    conjugation_defect,
    dtc_omega,
    equation_sides,
    eval_equation,
    partial,
)
from pfaffell.numerics import sample_rng


def random_kp_model(rng, M=3, n_terms=8, max_degree=3):
    terms = {}
    for _ in range(n_terms):
        e = [0] * (M + 1)
        for _ in range(int(rng.integers(1, max_degree + 1))):
            e[int(rng.integers(0, M + 1))] += 1
        terms[tuple(e)] = rng.uniform(-0.4, 0.4)
    return PolynomialTauModel("KP", M, terms)


def d1_oracle(model, point, z, x):
    """D1 sides from mixed partials, bypassing the Hessian path."""
    M = model.M

    def F(i, j):
        return partial(model, [f"t{i}", f"t{j}"], point)

    def D(w, i):  # d_{t_i} D(w) F
        return sum(w ** (-k) / k * F(i, k) for k in range(1, M + 1))

    DD = sum(z ** (-k) * x ** (-l) / (k * l) * F(k, l) for k in range(1, M + 1) for l in range(1, M + 1))
    lhs = cmath.exp(DD) * (1 - cmath.exp(4 * F(0, 0) + 2 * D(z, 0) + 2 * D(x, 0)) / (z * z * x * x))
    rhs = 1 - (D(z, 1) - D(x, 1)) / (z - x)
    return lhs, rhs


def test_d1_against_partials():
    rng = sample_rng(21)
    for _ in range(10):
        model = random_kp_model(rng)
        point = TimePoint.kp(rng.uniform(-1, 1, 4))
        z, x = complex(*rng.uniform(1, 3, 2)), complex(*rng.uniform(1, 3, 2))
        got = equation_sides("D1", model, point, {"z": z, "zeta": x})
        want = d1_oracle(model, point, z, x)
        assert np.allclose(got, want, rtol=1e-13, atol=0)


def test_compact_forms_agree():
    rng = sample_rng(22)
    for _ in range(10):
        model = random_kp_model(rng)
        point = TimePoint.kp(rng.uniform(-1, 1, 4))
        args = {"z": complex(*rng.uniform(1, 3, 2)), "zeta": complex(*rng.uniform(1, 3, 2))}
        for a, b in (("D1", "D1A"), ("D2", "D2A")):
            assert np.allclose(equation_sides(a, model, point, args), equation_sides(b, model, point, args), rtol=1e-13)


def test_zero_model_statements():
    zero = PolynomialTauModel.zero("KP", 3)
    p = TimePoint.kp([0.0])
    d1 = eval_equation("D1", zero, p, {"z": 2, "zeta": 3})
    assert d1.lhs == 1 - 1 / 36 and d1.rhs == 1
    assert math.isclose(d1.rel_res, 1 / 36, rel_tol=1e-14)
    assert not d1.passed
    for z, x in ((2, 3), (1.5 + 1j, -4), (7, 0.5)):
        assert eval_equation("DMKP", zero, p, {"z": z, "zeta": x}).abs_res == 0
    assert eval_equation("THREE_TERM", zero, p, {"zs": [2, 3 + 1j, -5]}).abs_res == 0
    assert eval_equation("DMKP_DET3", zero, p, {"zs": [2, 3, 5]}).abs_res == 0


def test_simp1_solution():
    f = PolynomialTauModel.from_monomials("KP", 3, {"t1^2": math.sqrt(2) / 2})
    rep = eval_equation("SIMP1A", f, TimePoint.kp([0.2, 0.4]))
    assert rep.lhs == pytest.approx(12, rel=1e-15) and rep.rhs == 12
    assert eval_equation("SIMP1B", f, TimePoint.kp([0.2, 0.4])).abs_res == 0


def test_simp2_solution_family():
    for a in (0.1, 0.3, -0.2):
        b = 2 * math.sinh(2 * a)
        m = PolynomialTauModel.from_second_derivatives("Toda", 1, {(0, 2): a, (1, 3): b})
        p = TimePoint.toda([0.3 + 0.1j, -0.2j])
        assert eval_equation("SIMP2A", m, p).abs_res == 0
        assert eval_equation("SIMP2B", m, p).rel_res < 1e-15


def test_omega():
    zero = PolynomialTauModel.zero("KP", 2)
    assert dtc_omega(zero, 3, TimePoint.kp([0])) == 3
    lin = PolynomialTauModel.from_monomials("KP", 2, {"t0": 0.7})
    assert dtc_omega(lin, 2 + 1j, TimePoint.kp([0.4])) == 2 + 1j
    rng = sample_rng(23)
    m = random_kp_model(rng, M=2)
    p = TimePoint.kp(rng.uniform(-1, 1, 3))
    z = 1.7 + 0.2j
    D0 = sum(z ** (-k) / k * partial(m, ["t0", f"t{k}"], p) for k in (1, 2))
    want = z * cmath.exp(-partial(m, ["t0", "t0"], p) / 2 - D0)
    assert dtc_omega(m, z, p) == pytest.approx(want, rel=1e-14)
    zero_res = eval_equation("DTC2", zero, TimePoint.kp([0]), {"z": 3})
    assert zero_res.rhs == pytest.approx(3 + 1 / 3)


def test_three_term_continuity():
    # first-order terms telescope, so the residual is O(eps^2)
    p = TimePoint.kp([0.0])
    zs = [2, 3, 5]
    prev = None
    for eps in (1e-2, 1e-3, 1e-4):
        m = PolynomialTauModel.from_monomials("KP", 2, {"t1^2": eps})
        r = eval_equation("THREE_TERM", m, p, {"zs": zs}).abs_res
        assert 0 < r < 10 * eps
        if prev is not None:
            assert r == pytest.approx(prev / 100, rel=0.05)
        prev = r


def test_dtc3_variants_differ():
    f = PolynomialTauModel.from_monomials("KP", 2, {"t0*t2": 0.3, "t2^2": 0.1})
    p = TimePoint.kp([0.1, 0, 0.2])
    a = equation_sides("DTC3_1", f, p, {"z": 2, "zeta": 3})
    b = equation_sides("DTC3_1_ALT", f, p, {"z": 2, "zeta": 3})
    assert a[0] == b[0] and a[1] != b[1]
    with pytest.raises(SingularArgs):
        equation_sides("DTC3_1", f, p, {"z": 2, "zeta": -2})


def test_errors():
    kp = PolynomialTauModel.zero("KP", 2)
    toda = PolynomialTauModel.zero("Toda", 1)
    p = TimePoint.kp([0])
    with pytest.raises(VariantMismatch):
        eval_equation("PFT1", kp, p, {"z": 2, "zeta": 3})
    with pytest.raises(VariantMismatch):
        eval_equation("D1", toda, TimePoint.toda([0]), {"z": 2, "zeta": 3})
    with pytest.raises(SingularArgs):
        eval_equation("D1", kp, p, {"z": 2, "zeta": 2})
    with pytest.raises(SingularArgs):
        eval_equation("D1", kp, p, {"z": 0, "zeta": 2})
    with pytest.raises(SingularArgs):
        eval_equation("THREE_TERM", kp, p, {"zs": [1, 2, 1]})
    with pytest.raises(ValueError):
        eval_equation("D1", kp, p, {"z": 2})
    with pytest.raises(ValueError):
        eval_equation("NOPE", kp, p)


@pytest.mark.parametrize("eq", EQUATION_IDS)
def test_every_equation_evaluates(eq):
    rng = sample_rng(24)
    from pfaffell.hirota import REGISTRY

    spec = REGISTRY[eq]
    if spec.variant == "KP":
        model, point = random_kp_model(rng), TimePoint.kp(rng.uniform(-0.5, 0.5, 4))
    else:
        model = random_real_toda_model(rng)
        point = conjugate_point(rng, model.M)
    vals = {"z": 2.0 + 0.5j, "zeta": 3.0 - 1j, "zbar": 2.5 + 0.3j, "zetabar": 1.5 - 0.2j}
    n = {"DMKP_DET4": 4}.get(eq, 3)
    args = {k: ([2, 3 + 1j, 5, -4][:n] if k == "zs" else vals[k]) for k in spec.args}
    rep = eval_equation(eq, model, point, args, seed=5)
    assert math.isfinite(rep.rel_res)
    assert rep.eq == eq and rep.seed == 5


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_conjugation_covariance(seed):
    rng = sample_rng(seed)
    model = random_real_toda_model(rng)
    point = conjugate_point(rng, model.M)
    a, b = complex(*rng.uniform(1, 3, 2)), complex(*rng.uniform(1, 3, 2))
    for eq in ("PFT1", "PFT2"):
        assert conjugation_defect(eq, model, point, {"z": a, "zeta": b}) < 1e-12
    for eq in ("PFT1A", "PFT2A"):
        assert conjugation_defect(eq, model, point, {"zbar": a, "zetabar": b}) < 1e-12
    for eq in ("PFT3", "PFT4"):
        assert conjugation_defect(eq, model, point, {"z": a, "zetabar": b}) < 1e-12
