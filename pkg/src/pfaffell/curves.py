"""Inversion of curve coefficients to the modular parameter (tau = i t, t >= 1)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

from .elliptic import KPCurveData, S_prime, TodaCurveData, UniformPoint, exp_S, toda_C
from .errors import DomainError, InconsistentData, NoSignChange
from .numerics import Bracket, Tolerance, find_root_monotone
from .theta import ModularParam, modular_invariant_m, theta_constants

T_MIN = 1.0
T_MAX = 50.0
ETA_MARGIN = 1e-6
THRESHOLD_SLACK = 1e-12
CONSISTENCY_TOL = 1e-6
_SOLVER_TOL = Tolerance(abs_tol=1e-14)


@lru_cache(maxsize=1)
def m_threshold() -> float:
    """Smallest admissible v/r^2, i.e. lambda + 1/lambda at tau = i (= 3/sqrt 2)."""
    return modular_invariant_m(T_MIN)


@lru_cache(maxsize=1)
def m_ceiling() -> float:
    return modular_invariant_m(T_MAX)


def solve_modulus(m: float) -> float:
    """t in [1, 50] with lambda(t) + 1/lambda(t) = m."""
    lo, hi = m_threshold(), m_ceiling()
    if not math.isfinite(m) or m < lo - THRESHOLD_SLACK:
        raise DomainError(f"m = {m!r} is below the threshold {lo!r} attained at tau = i")
    if m > hi:
        raise DomainError(f"m = {m!r} exceeds the attainable range [{lo!r}, {hi!r}] for t <= {T_MAX}")
    if m <= lo:
        return T_MIN
    # solve in log(m): m grows like exp(pi t / 2) / 4
    target = math.log(m)
    return find_root_monotone(
        lambda t: math.log(modular_invariant_m(t)) - target,
        Bracket(T_MIN, T_MAX),
        _SOLVER_TOL,
    )


def solve_tau_kp(curve_r: float, v: float) -> KPCurveData:
    """(r, v) -> (tau, gamma, c1) with r = gamma theta_2 theta_3,
    v = gamma^2 (theta_2^4 + theta_3^4)."""
    if not curve_r > 0:
        raise DomainError(f"curve_r must be positive, got {curve_r!r}")
    t = solve_modulus(v / curve_r**2)
    tau = ModularParam(t)
    th2, th3, _, _ = theta_constants(tau)
    gamma = curve_r / (th2 * th3)
    return KPCurveData(float(curve_r), float(v), gamma, tau, gamma / math.pi)


def toda_m(R: float, C: float) -> float:
    return R**2 + R**-2 * (1 - C**2 / 4)


def solve_eta(R: float, tau) -> float:
    """eta in (0, 1/2) with exp(S(eta)) = R."""
    target = math.log(R)

    def f(x):
        return math.log(exp_S(UniformPoint(x, 1e-12), tau).real) - target

    try:
        return find_root_monotone(
            f,
            Bracket(ETA_MARGIN, 0.5 - ETA_MARGIN),
            _SOLVER_TOL,
        )
    except NoSignChange as exc:
        lo = math.exp(f(ETA_MARGIN) + target)
        hi = math.exp(f(0.5 - ETA_MARGIN) + target)
        raise DomainError(f"R = {R!r} outside attainable range ({lo:.6g}, {hi:.6g}) at t = {tau.t}") from exc


def solve_tau_toda(R: float, C: float) -> TodaCurveData:
    """(R, C) -> (tau, eta) with R = theta_1(eta)/theta_4(eta) and C from the
    companion formula; the recomputed C is reported as a consistency residual."""
    if not R > 0:
        raise DomainError(f"R must be positive, got {R!r}")
    if R >= 1:
        raise DomainError(f"R = {R!r} >= 1 is not reachable with real eta")
    if not C > 0:
        raise DomainError(f"C must be positive, got {C!r}")
    tau = ModularParam(solve_modulus(toda_m(R, C)))
    eta = solve_eta(R, tau)
    c_back = toda_C(eta, tau)
    dev = abs(c_back - C) / abs(C)
    if dev > CONSISTENCY_TOL:
        raise InconsistentData(f"recomputed C = {c_back!r} deviates from {C!r} by {dev:.3g}")
    return TodaCurveData(float(R), float(C), eta, tau, diagnostics={"C_consistency": dev})


# --------------------------------------------------------------------------
# from second derivatives of the tau-function


@dataclass(frozen=True)
class FSecondDerivsKP:
    F00: float
    F01: float
    F02: float
    F11: float
    F13: float | None = None
    F22: float | None = None

    @property
    def curve_r(self) -> float:
        return math.exp(self.F00)

    @property
    def v(self) -> float:
        return 2 * self.F11 + self.F01**2 - self.F02


@dataclass(frozen=True)
class FSecondDerivsToda:
    """Mixed second derivatives; ``F0b1`` is d_{tbar_0} d_{t_1} F, ``F01b`` is
    d_{t_0} d_{tbar_1} F."""

    F00: complex
    F0b0b: complex
    F00b: float
    F0b1: complex
    F01b: complex

    @property
    def R(self) -> float:
        return math.exp(self.F00b.real)

    @property
    def C(self) -> complex:
        return 2 * math.exp(self.F00b.real) * _cexp(-self.F00) * self.F0b1

    def m_from_derivatives(self) -> complex:
        """2 cosh(2 F_{0 0b}) - exp(-F_00 - F_0b0b) F_0b1 F_01b."""
        return 2 * math.cosh(2 * self.F00b.real) - _cexp(-self.F00 - self.F0b0b) * self.F0b1 * self.F01b


def _cexp(x):
    return cmath.exp(x) if isinstance(x, complex) else math.exp(x)


def uniformization_from_F(d: FSecondDerivsKP) -> KPCurveData:
    return solve_tau_kp(d.curve_r, d.v)


def toda_data_from_F(d: FSecondDerivsToda) -> TodaCurveData:
    """Curve data, tau, eta and c1 from second derivatives of F.

    ``diagnostics`` carries the residual of exp(F_00) = pi c1 theta_2 theta_3,
    the two evaluations of lambda + 1/lambda and the reality of C.
    """
    if d.F0b1 == 0:
        raise InconsistentData("F_{0b 1} = 0 forces c1 = 0, contradicting exp(F_00) > 0")
    C = d.C
    if abs(complex(C).imag) > CONSISTENCY_TOL * max(1.0, abs(C)):
        raise InconsistentData(f"C = {C!r} is not real")
    base = solve_tau_toda(d.R, complex(C).real)
    tau = base.tau
    c1 = complex(d.F0b1) / S_prime(base.eta, tau)
    th2, th3, _, _ = theta_constants(tau)
    lhs = _cexp(d.F00)
    rhs = math.pi * c1 * th2 * th3
    e00 = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
    m_rc = toda_m(base.R, base.C)
    m_f = d.m_from_derivatives()
    diagnostics = dict(base.diagnostics)
    diagnostics.update(
        {
            "exp_F00_consistency": e00,
            "m_from_RC": m_rc,
            "m_from_F": m_f,
            "m_agreement": abs(m_rc - m_f) / max(1.0, abs(m_rc)),
        }
    )
    c1_out = c1.real if abs(c1.imag) <= 1e-12 * max(1.0, abs(c1)) else c1
    return TodaCurveData(base.R, base.C, base.eta, tau, c1_out, diagnostics)
