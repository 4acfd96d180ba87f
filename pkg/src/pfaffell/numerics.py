"""Shared numeric substrate: tolerances, residuals, root finding, finite differences."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationFailure, MaxIterations, NoSignChange

MAX_ROOT_STEPS = 200


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    fd_tol: float = 1e-6

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "fd_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")


DEFAULT_TOL = Tolerance()


def rel_residual(lhs: complex, rhs: complex) -> float:
    """|lhs - rhs| / max(1, |lhs|, |rhs|)."""
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def find_root_monotone(
    f: Callable[[float], float],
    bracket: Bracket,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Root of a monotone function on a bracket with a sign change.

    Illinois-style false position with a bisection fallback whenever the
    interpolated step fails to shrink the bracket by half.

    Raises
    ------
    NoSignChange
        If ``f(lo) * f(hi) > 0``.
    MaxIterations
        If not converged within 200 steps.
    """
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise NoSignChange(f"f({a})={fa:.6g} and f({b})={fb:.6g} have equal sign")

    last = 0
    for _ in range(MAX_ROOT_STEPS):
        width = b - a
        x = (a * fb - b * fa) / (fb - fa)
        if not (a < x < b):
            x = 0.5 * (a + b)
        fx = f(x)
        if abs(fx) <= tol.abs_tol or width <= tol.abs_tol:
            return x
        if (fx > 0) == (fa > 0):
            a, fa = x, fx
            if last == -1:
                fb *= 0.5
            last = -1
        else:
            b, fb = x, fx
            if last == 1:
                fa *= 0.5
            last = 1
        if b - a > 0.5 * width:
            m = 0.5 * (a + b)
            fm = f(m)
            if abs(fm) <= tol.abs_tol:
                return m
            if (fm > 0) == (fa > 0):
                a, fa = m, fm
            else:
                b, fb = m, fm
            last = 0
    raise MaxIterations(f"no convergence in {MAX_ROOT_STEPS} steps on [{a}, {b}]")


def default_step(x: complex) -> float:
    return 1e-6 * max(1.0, abs(x))


def central_diff(
    f: Callable[[complex], complex], x: complex, h: float | None = None
) -> complex:
    """Symmetric difference quotient (f(x+h) - f(x-h)) / 2h, error O(h^2)."""
    if h is None:
        h = default_step(x)
    if not h > 0:
        raise ValueError("step must be positive")
    try:
        fp = f(x + h)
        fm = f(x - h)
    except (ArithmeticError, ValueError) as exc:
        raise EvaluationFailure(f"cannot evaluate stencil around {x}") from exc
    val = (fp - fm) / (2 * h)
    if isinstance(val, complex) and not cmath.isfinite(val):
        raise EvaluationFailure(f"non-finite difference quotient at {x}")
    if isinstance(val, float) and not math.isfinite(val):
        raise EvaluationFailure(f"non-finite difference quotient at {x}")
    return val


def sample_rng(seed: int, *counter: int) -> np.random.Generator:
    """Counter-based generator keyed by ``(seed, *counter)``.

    Every sample gets its own stream, so results do not depend on the order
    or the worker in which samples are evaluated.
    """
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, counter)])
    return np.random.Generator(np.random.Philox(ss))
