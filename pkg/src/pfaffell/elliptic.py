"""Elliptic uniformization of the Pfaff-KP and Pfaff-Toda spectral curves.

KP curve ``p^2 = r^2 (w + 1/w) - v`` is parametrized by::

    w = theta_4(u)^2 / theta_1(u)^2
    p = gamma theta_4(0)^2 theta_2(u) theta_3(u) / (theta_1(u) theta_4(u))

and the Toda curve ``R^2 (f^2 g^2 + 1) + C f g = f^2 + g^2`` by
``f = theta_4(u)/theta_1(u)``, ``g = f(u + eta)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import PoleOrZero
from .numerics import rel_residual
from .theta import ModularParam, as_modular, theta, theta_constants, zero_distance

DEFAULT_EXCLUSION = 1e-3


@dataclass(frozen=True)
class UniformPoint:
    u: complex
    delta: float = DEFAULT_EXCLUSION

    def check(self, tau) -> complex:
        check_regular(self.u, tau, self.delta)
        return complex(self.u)


def _unwrap(u) -> tuple[complex, float]:
    if isinstance(u, UniformPoint):
        return complex(u.u), u.delta
    return complex(u), DEFAULT_EXCLUSION


def check_regular(u: complex, tau, delta: float = DEFAULT_EXCLUSION) -> None:
    """Raise PoleOrZero if u lies within delta of a zero of theta_1 or theta_4."""
    for a in (1, 4):
        d = zero_distance(a, u, tau)
        if d <= delta:
            raise PoleOrZero(f"u={u} is {d:.3g} from a zero of theta_{a}")


def is_regular(u: complex, tau, delta: float = DEFAULT_EXCLUSION) -> bool:
    return all(zero_distance(a, u, tau) > delta for a in (1, 4))


# --------------------------------------------------------------------------
# curve data


@dataclass(frozen=True)
class KPCurveData:
    """Coefficients of the KP curve tied to a modular parameter.

    ``curve_r`` is the curve constant exp(F_00), distinct from the Toda time r.
    """

    curve_r: float
    v: float
    gamma: float
    tau: ModularParam
    c1: float

    @classmethod
    def from_modulus(cls, t: float, gamma: float) -> "KPCurveData":
        """Forward map (t, gamma) -> (r, v)."""
        tau = as_modular(t)
        th2, th3, _, _ = theta_constants(tau)
        r = gamma * th2 * th3
        v = gamma**2 * (th2**4 + th3**4)
        return cls(r, v, float(gamma), tau, gamma / math.pi)

    @property
    def t(self) -> float:
        return self.tau.t

    def to_dict(self) -> dict:
        return {"curve_r": self.curve_r, "v": self.v, "gamma": self.gamma, "t": self.t, "c1": self.c1}


@dataclass(frozen=True)
class TodaCurveData:
    R: float
    C: float
    eta: float
    tau: ModularParam
    c1: float | None = None
    diagnostics: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_modulus(cls, t: float, eta: float) -> "TodaCurveData":
        """Forward map (t, eta) -> (R, C)."""
        tau = as_modular(t)
        return cls(toda_R(eta, tau), toda_C(eta, tau), float(eta), tau)

    @property
    def t(self) -> float:
        return self.tau.t

    def to_dict(self) -> dict:
        out = {"R": self.R, "C": self.C, "eta": self.eta, "t": self.t}
        if self.c1 is not None:
            out["c1"] = self.c1
        if self.diagnostics:
            out["diagnostics"] = dict(self.diagnostics)
        return out


def toda_R(eta: float, tau) -> float:
    return (theta(1, eta, tau) / theta(4, eta, tau)).real


def toda_C(eta: float, tau) -> float:
    tau = as_modular(tau)
    th2, th3, th4, _ = theta_constants(tau)
    num = 2 * th4**2 * theta(2, eta, tau) * theta(3, eta, tau)
    den = theta(4, eta, tau) ** 2 * th2 * th3
    return (num / den).real


# --------------------------------------------------------------------------
# the S-function


def S(u, tau) -> complex:
    """log(theta_1(u) / theta_4(u)), principal branch.

    The quasi-periodicity S(u+1) = S(u) + i pi only holds up to 2 pi i on the
    principal branch; compare exponentials instead.
    """
    u, delta = _unwrap(u)
    check_regular(u, tau, delta)
    return cmath.log(theta(1, u, tau) / theta(4, u, tau))


def exp_S(u, tau) -> complex:
    u, delta = _unwrap(u)
    check_regular(u, tau, delta)
    return theta(1, u, tau) / theta(4, u, tau)


def S_prime(u, tau) -> complex:
    """pi theta_4(0)^2 theta_2(u) theta_3(u) / (theta_1(u) theta_4(u))."""
    u, delta = _unwrap(u)
    check_regular(u, tau, delta)
    _, _, th4, _ = theta_constants(tau)
    return (
        math.pi * th4**2 * theta(2, u, tau) * theta(3, u, tau)
        / (theta(1, u, tau) * theta(4, u, tau))
    )


# --------------------------------------------------------------------------
# KP uniformization


def wp_pair(u, data: KPCurveData) -> tuple[complex, complex]:
    u, delta = _unwrap(u)
    tau = data.tau
    check_regular(u, tau, delta)
    _, _, th4, _ = theta_constants(tau)
    t1, t2, t3, t4 = (theta(a, u, tau) for a in (1, 2, 3, 4))
    w = t4**2 / t1**2
    p = data.gamma * th4**2 * t2 * t3 / (t1 * t4)
    return w, p


def kp_curve_sides(u, data: KPCurveData) -> tuple[complex, complex]:
    w, p = wp_pair(u, data)
    return p * p, data.curve_r**2 * (w + 1 / w) - data.v


def kp_curve_residual(u, data: KPCurveData) -> float:
    """Relative residual of p^2 = r^2 (w + 1/w) - v."""
    return rel_residual(*kp_curve_sides(u, data))


# --------------------------------------------------------------------------
# Toda uniformization


def fg_pair(u, data: TodaCurveData) -> tuple[complex, complex]:
    u, delta = _unwrap(u)
    tau = data.tau
    check_regular(u, tau, delta)
    check_regular(u + data.eta, tau, delta)
    f = theta(4, u, tau) / theta(1, u, tau)
    g = theta(4, u + data.eta, tau) / theta(1, u + data.eta, tau)
    return f, g


def toda_curve_sides(f: complex, g: complex, R: float, C: float) -> tuple[complex, complex]:
    return R**2 * (f * f * g * g + 1) + C * f * g, f * f + g * g


def toda_curve_residual(u, data: TodaCurveData, swap: bool = False) -> float:
    """Relative residual of R^2 (f^2 g^2 + 1) + C f g = f^2 + g^2."""
    f, g = fg_pair(u, data)
    if swap:
        f, g = g, f
    return rel_residual(*toda_curve_sides(f, g, data.R, data.C))


def toda_constant_combination(u, data: TodaCurveData) -> complex:
    """W + 1/W - R^2 (P + 1/P) with P = f g, W = f / g; equals C on the curve."""
    f, g = fg_pair(u, data)
    P, W = f * g, f / g
    return W + 1 / W - data.R**2 * (P + 1 / P)
