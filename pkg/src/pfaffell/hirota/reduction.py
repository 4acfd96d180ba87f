"""Toda-chain reduction of even KP models, omega(z), and determinant relations."""

from __future__ import annotations

import numpy as np

from ..elliptic import DEFAULT_EXCLUSION, check_regular
from ..errors import OddTimeDependence, SingularArgs, VariantMismatch
from ..theta import as_modular, theta
from .equations import Ctx, equation_sides, omega
from .model import PolynomialTauModel, TimePoint


def _require_kp(model: PolynomialTauModel):
    if model.variant != "KP":
        raise VariantMismatch("the reduction acts on KP models")


def odd_time_terms(model: PolynomialTauModel) -> list:
    """Terms depending on some odd time t_{2k+1}."""
    _require_kp(model)
    return [(e, c) for e, c in model.terms if any(e[k] for k in range(1, model.M + 1, 2))]


def reduction_map(model: PolynomialTauModel, check_even: bool = True) -> PolynomialTauModel:
    """Rewrite F(t0, 0, t2, 0, t4, ...) in the variables ~t0 = t0/2, ~t_n = 2 t_{2n}.

    With ``check_even`` a model depending on odd times is rejected; without it
    the odd times are set to zero first.
    """
    _require_kp(model)
    odd = odd_time_terms(model)
    if odd and check_even:
        raise OddTimeDependence(f"{len(odd)} term(s) depend on odd times, e.g. exponents {odd[0][0]}")
    Mt = model.M // 2
    terms = []
    for e, c in model.terms:
        if any(e[k] for k in range(1, model.M + 1, 2)):
            continue
        et = [e[0]] + [e[2 * n] for n in range(1, Mt + 1)]
        # t0 = 2 ~t0, t_{2n} = ~t_n / 2
        scale = 2.0 ** e[0] * 0.5 ** sum(et[1:])
        terms.append((tuple(et), c * scale))
    return PolynomialTauModel("KP", Mt, terms)


def reduce_point(point: TimePoint, M: int) -> TimePoint:
    """Image of a KP point in the reduced times; odd times are dropped."""
    t = list(point.t) + [0j] * (M + 1 - len(point.t))
    return TimePoint.kp([t[0] / 2] + [2 * t[2 * n] for n in range(1, M // 2 + 1)])


def dtc_omega(model: PolynomialTauModel, z: complex, point: TimePoint) -> complex:
    """omega(z) = z exp(-F00/2 - d_{t0} D(z) F)."""
    _require_kp(model)
    z = complex(z)
    if z == 0:
        raise SingularArgs("z must be nonzero")
    return omega(Ctx(model, point), z)


def three_term_check(model: PolynomialTauModel, zs, point: TimePoint) -> float:
    """Absolute value of z12 e^{D1 D2 F} + z23 e^{D2 D3 F} + z31 e^{D1 D3 F}."""
    lhs, _ = equation_sides("THREE_TERM", model, point, {"zs": list(zs)})
    return abs(lhs)


# --------------------------------------------------------------------------
# four-point determinant with theta-function entries


def _ratio(u, tau):
    return theta(1, u, tau) / theta(4, u, tau)


def e99_rows(zs, us, tau) -> np.ndarray:
    """Rows (1, 1/z_i, 1/z_i^2, E_i) with E_i the product, over pairs {j, k} not
    containing i, of [theta_1(u_jk)/theta_4(u_jk)] / (1/z_j - 1/z_k)."""
    zs = [complex(z) for z in zs]
    us = [complex(u) for u in us]
    tau = as_modular(tau)
    if len(zs) != 4 or len(us) != 4:
        raise ValueError("need four spectral points and four uniformizing values")
    if any(z == 0 for z in zs):
        raise SingularArgs("spectral points must be nonzero")
    for i in range(4):
        for j in range(i):
            if zs[i] == zs[j]:
                raise SingularArgs(f"z{j + 1} and z{i + 1} coincide")
            check_regular(us[i] - us[j], tau, DEFAULT_EXCLUSION)
    rows = []
    for i in range(4):
        j, k, l = (m for m in range(4) if m != i)
        E = 1 + 0j
        for a, b in ((j, k), (k, l), (l, j)):
            E *= _ratio(us[a] - us[b], tau) / (1 / zs[a] - 1 / zs[b])
        rows.append([1, 1 / zs[i], 1 / zs[i] ** 2, E])
    return np.array(rows, dtype=complex)


def e99_determinant(zs, us, tau) -> complex:
    return complex(np.linalg.det(e99_rows(zs, us, tau)))


def det_check_e99(zs, us, tau) -> float:
    """|det| divided by the product of the row norms (Hadamard bound), in [0, 1]."""
    A = e99_rows(zs, us, tau)
    scale = float(np.prod(np.linalg.norm(A, axis=1)))
    return abs(complex(np.linalg.det(A))) / scale
