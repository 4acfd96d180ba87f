"""Extraction of the uniformizing series u(z) = c1/z + c2/z^2 + ... from a KP model."""

from __future__ import annotations

import math

import numpy as np

from ..curves import FSecondDerivsKP, uniformization_from_F
from ..elliptic import KPCurveData
from ..errors import PivotFailure
from ..report import ResidualReport
from ..series import DEFAULT_ORDER, TruncatedSeries, theta_ratio_of_series
from ..theta import theta, theta_constants
from .equations import Ctx
from .model import PolynomialTauModel, TimePoint, op_vector

PIVOT_FLOOR = 1e-300


def second_derivs_kp(model: PolynomialTauModel, point: TimePoint) -> FSecondDerivsKP:
    """The second derivatives entering the KP curve coefficients."""
    H = model.hessian(point)

    def F(i, j):
        return float(H[i, j].real) if max(i, j) <= model.M else 0.0

    return FSecondDerivsKP(F(0, 0), F(0, 1), F(0, 2), F(1, 1), F(1, 3), F(2, 2))


def rhs_series(model: PolynomialTauModel, point: TimePoint, N: int) -> TruncatedSeries:
    """exp(d_{t0} Nabla(z) F) = exp(F00 + sum_k F0k z^{-k} / k) through z^{-N}."""
    H = model.hessian(point)
    terms = {0: H[0, 0]}
    for k in range(1, min(model.M, N) + 1):
        terms[k] = H[0, k] / k
    return TruncatedSeries.from_dict(terms, N, 0).exp()


def lhs_series(u: TruncatedSeries, tau, N: int) -> TruncatedSeries:
    """z theta_1(u(z)) / theta_4(u(z)) through z^{-N}."""
    ratio = theta_ratio_of_series(u, tau, N + 1)
    return ratio.shift(-1).with_range(0, N)


def extract_u_series(
    model: PolynomialTauModel,
    point: TimePoint,
    curve: KPCurveData | None = None,
    N: int = DEFAULT_ORDER,
) -> TruncatedSeries:
    """Solve z theta_1(u)/theta_4(u) = exp(d_{t0} Nabla(z) F) order by order.

    The coefficient of z^{-k} on the left is pi theta_2(0) theta_3(0) c_{k+1}
    plus terms in c_1..c_k, so each c enters linearly at its own order. The
    returned series holds c_1..c_{N+1}, enough to match the relation through
    z^{-N}.

    Parameters
    ----------
    curve : KPCurveData, optional
        Uniformization at the same point; computed from the model when omitted
        (DomainError propagates if the curve data are not solvable).
    """
    if curve is None:
        curve = uniformization_from_F(second_derivs_kp(model, point))
    tau = curve.tau
    th2, th3, _, _ = theta_constants(tau)
    pivot = math.pi * th2 * th3
    if not abs(pivot) > PIVOT_FLOOR:
        raise PivotFailure(f"pivot pi theta_2 theta_3 = {pivot!r} underflows")
    target = rhs_series(model, point, N)
    coeffs = np.zeros(N + 2, dtype=complex)
    for k in range(1, N + 2):
        # order k - 1 of the relation fixes c_k
        u = TruncatedSeries(coeffs[: k + 1], 0).with_range(1, k)
        current = lhs_series(u, tau, k - 1)[k - 1]
        coeffs[k] = (target[k - 1] - current) / pivot
    return TruncatedSeries(coeffs[1:], 1)


def e6_residual(model: PolynomialTauModel, point: TimePoint, u: TruncatedSeries, tau, N: int = DEFAULT_ORDER) -> float:
    """Largest relative coefficient mismatch of the series relation through z^{-N}."""
    lhs = lhs_series(u, tau, N)
    rhs = rhs_series(model, point, N)
    scale = max(1.0, max(abs(rhs[k]) for k in range(N + 1)))
    return max(abs(lhs[k] - rhs[k]) for k in range(N + 1)) / scale


def e4_diagnostic(
    model: PolynomialTauModel,
    point: TimePoint,
    u: TruncatedSeries,
    tau,
    z1: complex,
    z2: complex,
) -> ResidualReport:
    """(1/z1 - 1/z2) exp(Nabla(z1) Nabla(z2) F) against theta_1(u12)/theta_4(u12).

    u(z) is evaluated from its truncated series. The report measures how far
    the model is from solving the hierarchy; it makes no pass claim beyond the
    default tolerance.
    """
    z1, z2 = complex(z1), complex(z2)
    ctx = Ctx(model, point)
    N1, N2 = op_vector(model, "Nabla", z1), op_vector(model, "Nabla", z2)
    lhs = (1 / z1 - 1 / z2) * np.exp(ctx.B(N1, N2))
    u12 = u(z1) - u(z2)
    rhs = theta(1, u12, tau) / theta(4, u12, tau)
    return ResidualReport.from_sides(
        "E4",
        lhs,
        rhs,
        point=point.to_dict(),
        args={"z1": z1, "z2": z2},
    )
