"""Quadratic tau models solving the lowest equations of the hierarchies.

For a quadratic F all second derivatives are constants, so the lowest
equations become a finite algebraic system in those constants. The search
looks for the sparsest nontrivial solution: supports (sets of nonzero
unknowns) are tried in order of increasing size; a support qualifies when it
contains an unknown that enters the system nonlinearly and every active
unknown is nonzero at the solution. Each support is solved by damped
Gauss-Newton from seeded random starts.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..errors import NoSolutionFound, VariantMismatch
from ..numerics import sample_rng
from .equations import REGISTRY, Ctx, eval_equation
from .model import PolynomialTauModel, TimePoint, _partner

SEARCHABLE = {"SIMP1A": ("KP", 3), "SIMP1B": ("KP", 3), "SIMP2A": ("Toda", 1), "SIMP2B": ("Toda", 1)}
RESTARTS = 8
MAX_ITER = 80
SOLVE_TOL = 1e-14
CERT_TOL = 1e-12
CERT_POINTS = 20
NONZERO = 1e-8
_FD = 1e-6

_TOKEN = re.compile(r"(\d)(b?)")


@dataclass(frozen=True)
class Unknown:
    """One independent second derivative (a conjugate orbit for Toda)."""

    i: int
    j: int
    complex_valued: bool

    @property
    def dof(self) -> int:
        return 2 if self.complex_valued else 1


def parse_derivative_name(name: str, variant: str, M: int) -> tuple[int, int]:
    """``"F01"`` -> (0, 1); ``"F0b1"`` is d_{tbar0} d_{t1}; ``"F00b"`` is d_{t0} d_{tbar0}."""
    body = name[1:] if name.startswith("F") else name
    toks = _TOKEN.findall(body)
    if "".join(a + b for a, b in toks) != body or len(toks) != 2:
        raise ValueError(f"cannot parse second derivative {name!r}")
    idx = []
    for digit, bar in toks:
        k = int(digit)
        if k > M:
            raise ValueError(f"{name!r} exceeds max time index {M}")
        if bar and variant != "Toda":
            raise VariantMismatch(f"{name!r} needs a Toda model")
        idx.append(k + (M + 1 if bar else 0))
    return tuple(sorted(idx))


def derivative_name(i: int, j: int, variant: str, M: int) -> str:
    def tok(k):
        return f"{k - M - 1}b" if k > M else str(k)

    return "F" + tok(i) + tok(j)


def _unknowns(variant: str, M: int) -> list[Unknown]:
    n = (M + 1) * (2 if variant == "Toda" else 1)
    seen = set()
    out = []
    for i in range(n):
        for j in range(i, n):
            if (i, j) in seen:
                continue
            seen.add((i, j))
            if variant == "KP":
                out.append(Unknown(i, j, False))
                continue
            partner = tuple(sorted((_partner(i, M), _partner(j, M))))
            seen.add(partner)
            out.append(Unknown(i, j, partner != (i, j)))
    return out


class _System:
    def __init__(self, eqs, variant, M, fixed):
        self.eqs = list(eqs)
        self.variant = variant
        self.M = M
        self.template = PolynomialTauModel.zero(variant, M)
        self.unknowns = _unknowns(variant, M)
        self.fixed: dict[int, complex] = {}
        for name, value in fixed.items():
            i, j = parse_derivative_name(name, variant, M) if isinstance(name, str) else tuple(sorted(name))
            k = self._locate(i, j)
            u = self.unknowns[k]
            value = complex(value)
            if (i, j) != (u.i, u.j):
                value = value.conjugate()
            if not u.complex_valued and abs(value.imag) > 0:
                raise ValueError(f"{name} must be real")
            self.fixed[k] = value

    def _locate(self, i, j) -> int:
        for k, u in enumerate(self.unknowns):
            if (u.i, u.j) == (i, j):
                return k
            if self.variant == "Toda" and tuple(sorted((_partner(u.i, self.M), _partner(u.j, self.M)))) == (i, j):
                return k
        raise ValueError(f"no unknown for indices {(i, j)}")

    def values(self, active: tuple[int, ...], x: np.ndarray) -> dict[int, complex]:
        vals = dict(self.fixed)
        pos = 0
        for k in active:
            u = self.unknowns[k]
            if u.complex_valued:
                vals[k] = complex(x[pos], x[pos + 1])
            else:
                vals[k] = complex(x[pos])
            pos += u.dof
        return vals

    def hessian(self, vals: Mapping[int, complex]) -> np.ndarray:
        n = self.template.nvars
        H = np.zeros((n, n), dtype=complex)
        for k, v in vals.items():
            u = self.unknowns[k]
            H[u.i, u.j] = H[u.j, u.i] = v
            if self.variant == "Toda":
                pi, pj = _partner(u.i, self.M), _partner(u.j, self.M)
                H[pi, pj] = H[pj, pi] = v.conjugate()
        return H

    def residual(self, vals) -> np.ndarray:
        ctx = Ctx(self.template, H=self.hessian(vals))
        out = []
        for eq in self.eqs:
            lhs, rhs = REGISTRY[eq].sides(ctx, {})
            d = complex(lhs) - complex(rhs)
            out += [d.real, d.imag]
        return np.array(out)

    def balanced(self, vals, tol: float = 1e-12) -> bool:
        """Every equation holds relative to the size of its own sides.

        Rejects spurious roots where an exponential has merely underflowed.
        """
        ctx = Ctx(self.template, H=self.hessian(vals))
        for eq in self.eqs:
            lhs, rhs = (complex(v) for v in REGISTRY[eq].sides(ctx, {}))
            if abs(lhs - rhs) > tol * max(abs(lhs), abs(rhs)) and (lhs, rhs) != (0, 0):
                return False
        return True

    def model(self, vals) -> PolynomialTauModel:
        spec = {}
        for k, v in vals.items():
            u = self.unknowns[k]
            if v != 0:
                spec[(u.i, u.j)] = v
        return PolynomialTauModel.from_second_derivatives(self.variant, self.M, spec)


def _dofs(sys: _System, active) -> int:
    return sum(sys.unknowns[k].dof for k in active)


def _appears(sys: _System, rng) -> tuple[list[int], set[int]]:
    """Free unknowns the system depends on, and all unknowns entering nonlinearly.

    Probed by first and second differences at a random base point where
    every unknown, fixed or not, is varied.
    """
    everything = tuple(range(len(sys.unknowns)))
    probe = _System.__new__(_System)
    probe.__dict__.update(sys.__dict__)
    probe.fixed = {}
    base_x = rng.uniform(-0.7, 0.7, size=_dofs(sys, everything))
    r0 = probe.residual(probe.values(everything, base_x))
    used, nonlinear = [], set()
    pos = 0
    for k in everything:
        for d in range(sys.unknowns[k].dof):
            step = np.zeros_like(base_x)
            step[pos + d] = 0.3
            rp = probe.residual(probe.values(everything, base_x + step))
            rm = probe.residual(probe.values(everything, base_x - step))
            moved = max(np.max(np.abs(rp - r0)), np.max(np.abs(rm - r0))) > 1e-12
            if moved and k not in sys.fixed and k not in used:
                used.append(k)
            if np.max(np.abs(rp - 2 * r0 + rm)) > 1e-9:
                nonlinear.add(k)
        pos += sys.unknowns[k].dof
    return used, nonlinear


def _gauss_newton(f, x0: np.ndarray) -> tuple[np.ndarray, float]:
    x = x0.copy()
    r = f(x)
    norm = float(np.linalg.norm(r))
    for _ in range(MAX_ITER):
        if norm < SOLVE_TOL:
            break
        J = np.empty((r.size, x.size))
        for c in range(x.size):
            h = _FD * max(1.0, abs(x[c]))
            e = np.zeros_like(x)
            e[c] = h
            J[:, c] = (f(x + e) - f(x - e)) / (2 * h)
        step = np.linalg.lstsq(J, r, rcond=None)[0]
        alpha = 1.0
        while alpha > 1e-6:
            xn = x - alpha * step
            rn = f(xn)
            nn = float(np.linalg.norm(rn))
            if np.isfinite(nn) and nn < norm:
                x, r, norm = xn, rn, nn
                break
            alpha /= 2
        else:
            break
    return x, norm


def quadratic_solution_search(
    eq_set,
    fixed: Mapping | None = None,
    seed: int = 0,
    restarts: int = RESTARTS,
) -> PolynomialTauModel:
    """Sparsest nontrivial quadratic model satisfying the given equations.

    Parameters
    ----------
    eq_set : iterable of str
        Subset of SIMP1A, SIMP1B (KP, times t0..t3) or SIMP2A, SIMP2B
        (Toda, times t0, t1 and their conjugates).
    fixed : mapping, optional
        Prescribed second derivatives, e.g. ``{"F01": 0}`` or
        ``{"F00": 0, "F0b0b": 0}``. Unlisted ones are unknowns.
    seed : int
        Seed of the restart generator.

    Raises
    ------
    NoSolutionFound
        If no support admits a solution; ``best_residual`` holds the smallest
        residual norm reached.
    """
    eqs = list(dict.fromkeys(eq_set))
    if not eqs or any(e not in SEARCHABLE for e in eqs):
        raise ValueError(f"eq_set must be a nonempty subset of {sorted(SEARCHABLE)}")
    kinds = {SEARCHABLE[e] for e in eqs}
    if len(kinds) != 1:
        raise VariantMismatch("cannot mix KP and Toda equations")
    variant, M = kinds.pop()
    sys = _System(eqs, variant, M, dict(fixed or {}))
    rng = sample_rng(seed, 0)
    used, nonlinear = _appears(sys, rng)
    fixed_nonlinear = any(k in nonlinear for k, v in sys.fixed.items() if v != 0)

    best = float("inf")
    # empty support: the fixed values alone
    r = float(np.linalg.norm(sys.residual(sys.values((), np.zeros(0)))))
    best = min(best, r)
    if r < SOLVE_TOL and fixed_nonlinear and sys.balanced(sys.values((), np.zeros(0))):
        return _certify(sys, sys.values((), np.zeros(0)), seed)

    for size in range(1, len(used) + 1):
        for active in itertools.combinations(used, size):
            if not (fixed_nonlinear or any(k in nonlinear for k in active)):
                continue
            f = lambda x, a=active: sys.residual(sys.values(a, x))  # noqa: E731
            for attempt in range(restarts):
                n = _dofs(sys, active)
                x0 = rng.uniform(0.25, 1.5, size=n)
                if attempt:
                    x0 *= rng.choice([-1.0, 1.0], size=n)
                x, norm = _gauss_newton(f, x0)
                best = min(best, norm)
                if norm >= SOLVE_TOL:
                    continue
                vals = sys.values(active, x)
                if all(abs(vals[k]) > NONZERO for k in active) and sys.balanced(vals):
                    return _certify(sys, vals, seed)
    raise NoSolutionFound(f"no quadratic solution of {eqs} with fixed {dict(fixed or {})}", best)


def _certify(sys: _System, vals, seed: int) -> PolynomialTauModel:
    model = sys.model(vals)
    rng = sample_rng(seed, 1)
    for _ in range(CERT_POINTS):
        point = random_point(model, rng)
        for eq in sys.eqs:
            rep = eval_equation(eq, model, point)
            if not rep.rel_res < CERT_TOL:
                raise NoSolutionFound(f"certificate failed for {eq}: {rep.rel_res:.3g}", rep.rel_res)
    return model


def random_point(model: PolynomialTauModel, rng, scale: float = 1.0) -> TimePoint:
    """Random point of the right kind: real for KP, conjugate-symmetric for Toda."""
    if model.variant == "KP":
        return TimePoint.kp(rng.uniform(-scale, scale, model.M + 1))
    t = rng.uniform(-scale, scale, model.M + 1) + 1j * rng.uniform(-scale, scale, model.M + 1)
    return TimePoint.toda(t)
