"""Jacobi theta functions for purely imaginary modular parameter tau = i t.

Conventions (nome q = exp(i pi tau) = exp(-pi t))::

    theta_1(u) = -sum_k exp(i pi tau (k+1/2)^2 + 2 pi i (u+1/2)(k+1/2))
    theta_2(u) =  sum_k exp(i pi tau (k+1/2)^2 + 2 pi i u (k+1/2))
    theta_3(u) =  sum_k exp(i pi tau k^2 + 2 pi i u k)
    theta_4(u) =  sum_k exp(i pi tau k^2 + 2 pi i (u+1/2) k)

theta_1 has simple zeros on Z + Z tau; theta_a on omega_{a-1} + Z + Z tau with
half-periods 0, 1/2, (1+tau)/2, tau/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import UnsupportedOrder

MAX_TERMS = 24
EARLY_EXIT = 1e-16
MAX_PUBLIC_ORDER = 4

# (characteristic shift of k, shift of u, overall sign)
_CHAR = {
    1: (0.5, 0.5, -1.0),
    2: (0.5, 0.0, 1.0),
    3: (0.0, 0.0, 1.0),
    4: (0.0, 0.5, 1.0),
}
# multiplier of theta_a under u -> u + 1 and u -> u + tau (the latter times
# exp(-i pi tau - 2 pi i u))
_PHASE_1 = {1: -1.0, 2: -1.0, 3: 1.0, 4: 1.0}
_PHASE_TAU = {1: -1.0, 2: 1.0, 3: 1.0, 4: -1.0}


@dataclass(frozen=True)
class ModularParam:
    """Modular parameter tau = i t with t > 0."""

    t: float
    q: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = float(self.t)
        if not (t > 0 and math.isfinite(t)):
            raise ValueError(f"need t > 0, got {self.t!r}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "q", math.exp(-math.pi * t))

    @property
    def tau(self) -> complex:
        return complex(0.0, self.t)


def as_modular(tau) -> ModularParam:
    """Accept a ModularParam, a positive real t, or a purely imaginary tau."""
    if isinstance(tau, ModularParam):
        return tau
    if isinstance(tau, complex):
        if tau.real != 0:
            raise ValueError("only purely imaginary tau is supported")
        return ModularParam(tau.imag)
    return ModularParam(float(tau))


def index(a: int) -> int:
    """Reduce a theta index modulo 4 into {1, 2, 3, 4}."""
    return (int(a) - 1) % 4 + 1


def half_period(k: int, tau) -> complex:
    """omega_k for k in {0, 1, 2, 3}."""
    tau = as_modular(tau).tau
    return (0j, 0.5 + 0j, (1 + tau) / 2, tau / 2)[k % 4]


def _series(a: int, u: complex, t: float, order: int) -> complex:
    # direct q-series of d^order/du^order theta_a at u (no lattice reduction)
    alpha, beta, sign = _CHAR[a]
    itau = -math.pi * t  # i*pi*tau
    arg = 2j * math.pi * (u + beta)
    k0 = -round(u.imag / t) if t > 0 else 0
    k0 = max(-MAX_TERMS, min(MAX_TERMS, k0))

    def term(k):
        n = k + alpha
        val = cmath.exp(itau * n * n + arg * n)
        if order:
            val *= (2j * math.pi * n) ** order
        return val

    total = term(k0)
    scale = abs(total)
    for j in range(1, 2 * MAX_TERMS + 1):
        lo, hi = k0 - j, k0 + j
        contrib = 0j
        mags = 0.0
        if lo >= -MAX_TERMS:
            v = term(lo)
            contrib += v
            mags += abs(v)
        if hi <= MAX_TERMS:
            v = term(hi)
            contrib += v
            mags += abs(v)
        total += contrib
        scale = max(scale, abs(total), mags)
        if mags <= EARLY_EXIT * scale:
            break
        if lo < -MAX_TERMS and hi > MAX_TERMS:
            break
    return sign * total


def _reduce(u: complex, t: float) -> tuple[complex, int, int]:
    n = round(u.imag / t)
    u1 = u - complex(0.0, n * t)
    m = round(u1.real)
    return u1 - m, m, n


def _theta_any(a: int, u: complex, tau: ModularParam, order: int) -> complex:
    a = index(a)
    u = complex(u)
    t = tau.t
    u0, m, n = _reduce(u, t)
    if n == 0:
        return _PHASE_1[a] ** m * _series(a, u0, t, order)
    # theta_a(u0 + m + n tau) = phase * exp(-i pi n^2 tau - 2 pi i n (u0 + m)) theta_a(u0)
    # the exponential factor has u-derivative -2 pi i n times itself
    pref = _PHASE_1[a] ** m * _PHASE_TAU[a] ** n
    expo = cmath.exp(math.pi * n * n * t - 2j * math.pi * n * (u0 + m))
    if order == 0:
        return pref * expo * _series(a, u0, t, 0)
    c = -2j * math.pi * n
    total = 0j
    for j in range(order + 1):
        total += math.comb(order, j) * c**j * _series(a, u0, t, order - j)
    return pref * expo * total


def theta_direct(a: int, u: complex, tau, order: int = 0) -> complex:
    """Plain q-series sum without lattice reduction.

    Used as an independent route when checking the shift rules; accurate for
    moderate ``Im u / t``.
    """
    return _series(index(a), complex(u), as_modular(tau).t, int(order))


def theta(a: int, u: complex, tau) -> complex:
    """theta_a(u | tau)."""
    return _theta_any(a, u, as_modular(tau), 0)


def theta_deriv(a: int, u: complex, tau, order: int = 1) -> complex:
    """``order``-th u-derivative of theta_a by term-wise differentiation."""
    order = int(order)
    if order < 1 or order > MAX_PUBLIC_ORDER:
        raise UnsupportedOrder(f"derivative order must be in 1..{MAX_PUBLIC_ORDER}, got {order}")
    return _theta_any(a, u, as_modular(tau), order)


def theta_derivative_unchecked(a: int, u: complex, tau, order: int) -> complex:
    """Same as :func:`theta_deriv` without the order cap (used for Taylor data)."""
    if order < 0:
        raise UnsupportedOrder("negative order")
    return _theta_any(a, u, as_modular(tau), int(order))


@lru_cache(maxsize=4096)
def _constants(t: float) -> tuple[float, float, float, float]:
    tau = ModularParam(t)
    th2 = _series(2, 0j, t, 0).real
    th3 = _series(3, 0j, t, 0).real
    th4 = _series(4, 0j, t, 0).real
    th1p = _theta_any(1, 0j, tau, 1).real
    return th2, th3, th4, th1p


def theta_constants(tau) -> tuple[float, float, float, float]:
    """(theta_2(0), theta_3(0), theta_4(0), theta_1'(0)), all real for tau = i t."""
    return _constants(as_modular(tau).t)


def lam(tau) -> float:
    """theta_2(0)^2 / theta_3(0)^2."""
    th2, th3, _, _ = theta_constants(tau)
    return (th2 / th3) ** 2


def modular_invariant_m(tau) -> float:
    """lambda + 1/lambda, the quantity v / r^2 of the KP curve."""
    x = lam(tau)
    return x + 1.0 / x


# d omega_{a-1} / d tau for the half-periods 0, 1/2, (1+tau)/2, tau/2
_DOMEGA = {1: 0.0, 2: 0.0, 3: 0.5, 4: 0.5}


def shift_phases(a: int) -> tuple[complex, complex]:
    """exp(i pi (1 + 2 d omega)) and exp(i pi (a + 2 d omega)) from the shift rules."""
    a = index(a)
    d = _DOMEGA[a]
    return cmath.exp(1j * math.pi * (1 + 2 * d)), cmath.exp(1j * math.pi * (a + 2 * d))


def quasi_periodicity_sides(a: int, u: complex, tau) -> tuple[tuple[complex, complex], tuple[complex, complex]]:
    """((theta(u+1), rhs_1), (theta(u+tau), rhs_tau)) evaluated by plain summation."""
    tau = as_modular(tau)
    a = index(a)
    u = complex(u)
    ph1, phtau = shift_phases(a)
    base = theta_direct(a, u, tau)
    side_1 = (theta_direct(a, u + 1, tau), ph1 * base)
    factor = phtau * cmath.exp(-1j * math.pi * tau.tau - 2j * math.pi * u)
    side_tau = (theta_direct(a, u + tau.tau, tau), factor * base)
    return side_1, side_tau


def quasi_periodicity_residual(a: int, u: complex, tau) -> tuple[float, float]:
    """Absolute residuals of the shift rules under u -> u + 1 and u -> u + tau."""
    (l1, r1), (lt, rt) = quasi_periodicity_sides(a, u, tau)
    return abs(l1 - r1), abs(lt - rt)


def lattice_distance(u: complex, shift: complex, tau) -> float:
    """Distance from u to the lattice shift + Z + Z tau."""
    tau = as_modular(tau)
    w = complex(u) - shift
    n = round(w.imag / tau.t)
    w -= complex(0.0, n * tau.t)
    w -= round(w.real)
    best = abs(w)
    for dm in (-1, 0, 1):
        for dn in (-1, 0, 1):
            best = min(best, abs(w + dm + complex(0.0, dn * tau.t)))
    return best


def zero_distance(a: int, u: complex, tau) -> float:
    """Distance from u to the zero lattice of theta_a."""
    return lattice_distance(u, half_period(index(a) - 1, tau), tau)
