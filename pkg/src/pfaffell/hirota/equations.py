"""Registry of Hirota-form equations and their literal evaluation on tau models.

Every equation involves F only through second derivatives, so each evaluator
works with the exact Hessian H at the point and linear operators given as
coefficient vectors: ``B(X, Y) = X^T H Y`` is the action of the product of
operators X and Y on F.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from ..errors import SingularArgs, VariantMismatch
from ..numerics import DEFAULT_TOL, rel_residual
from ..report import ResidualReport
from .model import PolynomialTauModel, TimePoint, op_vector

exp = cmath.exp


class Ctx:
    """Hessian of a model at a point plus operator constructors."""

    def __init__(self, model: PolynomialTauModel, point: TimePoint | None = None, H: np.ndarray | None = None):
        self.model = model
        self.point = point
        self.H = model.hessian(point) if H is None else np.asarray(H, dtype=complex)
        self.n = model.nvars
        self.M = model.M

    def B(self, X: np.ndarray, Y: np.ndarray) -> complex:
        return complex(X @ self.H @ Y)

    def e(self, k: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=complex)
        if k <= self.M:
            v[k] = 1.0
        return v

    def eb(self, k: int) -> np.ndarray:
        v = np.zeros(self.n, dtype=complex)
        if k <= self.M:
            v[self.M + 1 + k] = 1.0
        return v

    def D(self, z) -> np.ndarray:
        return op_vector(self.model, "D", z)

    def Db(self, z) -> np.ndarray:
        return op_vector(self.model, "Dbar", z)

    def N(self, z) -> np.ndarray:
        return op_vector(self.model, "Nabla", z)

    def Nb(self, z) -> np.ndarray:
        return op_vector(self.model, "Nablabar", z)

    @property
    def ds(self) -> np.ndarray:
        return self.e(0) + self.eb(0)

    @property
    def dr(self) -> np.ndarray:
        return self.e(0) - self.eb(0)

    def F(self, i: int, j: int) -> complex:
        return complex(self.H[i, j])


@dataclass(frozen=True)
class Equation:
    name: str
    variant: str
    args: tuple[str, ...]
    sides: Callable[[Ctx, dict], tuple[complex, complex]]
    doc: str = ""


REGISTRY: dict[str, Equation] = {}


def _register(name, variant, args, doc=""):
    def deco(fn):
        REGISTRY[name] = Equation(name, variant, tuple(args), fn, doc)
        return fn

    return deco


def _distinct(a, b, what="z and zeta"):
    if a == b:
        raise SingularArgs(f"{what} coincide ({a!r})")


# --------------------------------------------------------------------------
# dPfaff-KP


@_register("D1", "KP", ("z", "zeta"))
def _d1(c: Ctx, a):
    z, x = a["z"], a["zeta"]
    _distinct(z, x)
    X, Y = c.D(z), c.D(x)
    e0, e1 = c.e(0), c.e(1)
    lhs = exp(c.B(X, Y)) * (1 - exp(2 * c.B(e0, 2 * e0 + X + Y)) / (z * z * x * x))
    rhs = 1 - (c.B(e1, X) - c.B(e1, Y)) / (z - x)
    return lhs, rhs


@_register("D2", "KP", ("z", "zeta"))
def _d2(c: Ctx, a):
    z, x = a["z"], a["zeta"]
    _distinct(z, x)
    X, Y = c.D(z), c.D(x)
    e0, e1 = c.e(0), c.e(1)
    num = z * z * exp(-2 * c.B(e0, X)) - x * x * exp(-2 * c.B(e0, Y))
    lhs = exp(-c.B(X, Y)) * num / (z - x)
    rhs = z + x - c.B(e1, 2 * e0 + X + Y)
    return lhs, rhs


def p_aux(c: Ctx, z) -> complex:
    """p(z) = z - d_{t1} Nabla(z) F."""
    return z - c.B(c.e(1), c.N(z))


def w_aux(c: Ctx, z) -> complex:
    """w(z) = z^2 exp(-2 d_{t0} Nabla(z) F)."""
    return z * z * exp(-2 * c.B(c.e(0), c.N(z)))


@_register("D1A", "KP", ("z", "zeta"))
def _d1a(c: Ctx, a):
    z, x = a["z"], a["zeta"]
    _distinct(z, x)
    lhs = exp(c.B(c.D(z), c.D(x))) * (1 - 1 / (w_aux(c, z) * w_aux(c, x)))
    rhs = (p_aux(c, z) - p_aux(c, x)) / (z - x)
    return lhs, rhs


@_register("D2A", "KP", ("z", "zeta"))
def _d2a(c: Ctx, a):
    z, x = a["z"], a["zeta"]
    _distinct(z, x)
    lhs = exp(-c.B(c.D(z), c.D(x)) + 2 * c.F(0, 0)) * (w_aux(c, z) - w_aux(c, x)) / (z - x)
    rhs = p_aux(c, z) + p_aux(c, x)
    return lhs, rhs


@_register("SIMP1A", "KP", ())
def _simp1a(c: Ctx, a):
    F = _kp_second(c)
    return 6 * F(1, 1) ** 2 + 3 * F(2, 2) - 4 * F(1, 3), 12 * exp(4 * F(0, 0))


@_register("SIMP1B", "KP", ())
def _simp1b(c: Ctx, a):
    F = _kp_second(c)
    f01 = F(0, 1)
    lhs = 2 * F(0, 3) + 4 * f01**3 + 6 * f01 * F(1, 1) - 6 * f01 * F(0, 2)
    return lhs, 3 * F(1, 2)


def _kp_second(c: Ctx):
    # F_mn with indices past M reading as zero
    def F(i, j):
        return c.F(i, j) if i <= c.M and j <= c.M else 0j

    return F


# --------------------------------------------------------------------------
# dPfaff-Toda


def _pair(a, k1, k2):
    z, x = a[k1], a[k2]
    _distinct(z, x, f"{k1} and {k2}")
    return z, x


@_register("PFT1", "Toda", ("z", "zeta"))
def _pft1(c: Ctx, a):
    z, x = _pair(a, "z", "zeta")
    X, Y = c.D(z), c.D(x)
    ds, dr = c.ds, c.dr
    lhs = exp(c.B(X, Y)) * (1 - exp(c.B(ds, ds + dr + X + Y)) / (z * x))
    rhs = (z * exp(-c.B(dr, X)) - x * exp(-c.B(dr, Y))) / (z - x)
    return lhs, rhs


@_register("PFT1A", "Toda", ("zbar", "zetabar"))
def _pft1a(c: Ctx, a):
    z, x = _pair(a, "zbar", "zetabar")
    X, Y = c.Db(z), c.Db(x)
    ds, dr = c.ds, c.dr
    lhs = exp(c.B(X, Y)) * (1 - exp(c.B(ds, ds - dr + X + Y)) / (z * x))
    rhs = (z * exp(c.B(dr, X)) - x * exp(c.B(dr, Y))) / (z - x)
    return lhs, rhs


@_register("PFT2", "Toda", ("z", "zeta"))
def _pft2(c: Ctx, a):
    z, x = _pair(a, "z", "zeta")
    X, Y = c.D(z), c.D(x)
    ds, dr = c.ds, c.dr
    lhs = exp(c.B(X, Y)) * (1 - exp(c.B(dr, ds + dr + X + Y)) / (z * x))
    rhs = (z * exp(-c.B(ds, X)) - x * exp(-c.B(ds, Y))) / (z - x)
    return lhs, rhs


@_register("PFT2A", "Toda", ("zbar", "zetabar"))
def _pft2a(c: Ctx, a):
    z, x = _pair(a, "zbar", "zetabar")
    X, Y = c.Db(z), c.Db(x)
    ds, dr = c.ds, c.dr
    lhs = exp(c.B(X, Y)) * (1 - exp(-c.B(dr, ds - dr + X + Y)) / (z * x))
    rhs = (z * exp(-c.B(ds, X)) - x * exp(-c.B(ds, Y))) / (z - x)
    return lhs, rhs


@_register("PFT3", "Toda", ("z", "zetabar"))
def _pft3(c: Ctx, a):
    z, xb = a["z"], a["zetabar"]
    X, Yb = c.D(z), c.Db(xb)
    ds, dr = c.ds, c.dr
    lhs = exp(-c.B(X, Yb)) * (1 - exp(c.B(dr, dr + X - Yb)) / (z * xb))
    rhs = 1 - exp(c.B(ds, ds + X + Yb)) / (z * xb)
    return lhs, rhs


def _pft4_parts(c: Ctx, z, xb):
    X, Yb = c.D(z), c.Db(xb)
    ds, dr = c.ds, c.dr
    L = exp(-c.B(ds + dr + X, Yb)) - 1
    E = exp(-c.B(dr, ds + X + Yb))
    Y = exp(-c.B(ds - dr + Yb, X)) - 1
    return L, E, Y


@_register("PFT4", "Toda", ("z", "zetabar"))
def _pft4(c: Ctx, a):
    z, xb = a["z"], a["zetabar"]
    L, E, Y = _pft4_parts(c, z, xb)
    return L, (z / xb) * E * Y


def P_aux(c: Ctx, z) -> complex:
    return z * exp(-c.B(c.e(0) + c.eb(0), c.N(z)))


def W_aux(c: Ctx, z) -> complex:
    return z * exp(-c.B(c.e(0) - c.eb(0), c.N(z)))


def Pbar_aux(c: Ctx, zb) -> complex:
    return zb * exp(-c.B(c.e(0) + c.eb(0), c.Nb(zb)))


def Wbar_aux(c: Ctx, zb) -> complex:
    return zb * exp(c.B(c.e(0) - c.eb(0), c.Nb(zb)))


@_register("T2_1", "Toda", ("z", "zeta"))
def _t2_1(c: Ctx, a):
    z, x = _pair(a, "z", "zeta")
    lhs = exp(c.B(c.D(z), c.D(x))) * (1 - 1 / (P_aux(c, z) * P_aux(c, x)))
    rhs = (W_aux(c, z) - W_aux(c, x)) / (z - x) * exp(c.B(c.e(0) - c.eb(0), c.e(0)))
    return lhs, rhs


@_register("T2_2", "Toda", ("z", "zeta"))
def _t2_2(c: Ctx, a):
    z, x = _pair(a, "z", "zeta")
    lhs = exp(c.B(c.D(z), c.D(x))) * (1 - 1 / (W_aux(c, z) * W_aux(c, x)))
    rhs = (P_aux(c, z) - P_aux(c, x)) / (z - x) * exp(c.B(c.e(0) + c.eb(0), c.e(0)))
    return lhs, rhs


@_register("T2_3", "Toda", ("z", "zetabar"))
def _t2_3(c: Ctx, a):
    z, xb = a["z"], a["zetabar"]
    lhs = exp(c.B(c.D(z), c.Db(xb))) * (1 - 1 / (P_aux(c, z) * Pbar_aux(c, xb)))
    rhs = 1 - 1 / (W_aux(c, z) * Wbar_aux(c, xb))
    return lhs, rhs


@_register("T2_4", "Toda", ("z", "zetabar"))
def _t2_4(c: Ctx, a):
    z, xb = a["z"], a["zetabar"]
    lhs = exp(c.B(c.D(z), c.Db(xb))) * (W_aux(c, z) - Wbar_aux(c, xb))
    rhs = (P_aux(c, z) - Pbar_aux(c, xb)) * exp(2 * c.B(c.e(0), c.eb(0)))
    return lhs, rhs


@_register("SIMP2A", "Toda", ())
def _simp2a(c: Ctx, a):
    e0, e1, eb0, eb1 = c.e(0), c.e(1), c.eb(0), c.eb(1)
    F = c.B
    return exp(F(e0, e0)) * F(e0, eb1), exp(F(eb0, eb0)) * F(eb0, e1)


@_register("SIMP2B", "Toda", ())
def _simp2b(c: Ctx, a):
    e0, e1, eb0, eb1 = c.e(0), c.e(1), c.eb(0), c.eb(1)
    F = c.B
    rhs = 2 * exp(F(e0, e0) + F(eb0, eb0)) * cmath.sinh(2 * F(e0, eb0))
    return F(e1, eb1), rhs


# --------------------------------------------------------------------------
# comparison hierarchies


def _dmkp_sides(c: Ctx, z, x, zr=None, xr=None):
    # e^{D(z)D(x)F} = (z e^{-d0 D(z)F} - x e^{-d0 D(x)F}) / (zr - xr)
    X, Y = c.D(z), c.D(x)
    e0 = c.e(0)
    zn, xn = (z, x) if zr is None else (zr, xr)
    lhs = exp(c.B(X, Y))
    rhs = (zn * exp(-c.B(e0, X)) - xn * exp(-c.B(e0, Y))) / (z - x)
    return lhs, rhs


@_register("DKP", "KP", ("z", "zeta"))
def _dkp(c: Ctx, a):
    z, x = _pair(a, "z", "zeta")
    e1 = c.e(1)
    lhs = exp(c.B(c.D(z), c.D(x)))
    rhs = 1 - (c.B(e1, c.D(z)) - c.B(e1, c.D(x))) / (z - x)
    return lhs, rhs


@_register("DMKP", "KP", ("z", "zeta"))
def _dmkp(c: Ctx, a):
    return _dmkp_sides(c, *_pair(a, "z", "zeta"))


@_register("DTODA_1", "Toda", ("z", "zeta"))
def _dtoda1(c: Ctx, a):
    return _dmkp_sides(c, *_pair(a, "z", "zeta"))


@_register("DTODA_2", "Toda", ("z", "zetabar"))
def _dtoda2(c: Ctx, a):
    z, xb = a["z"], a["zetabar"]
    X, Yb = c.D(z), c.Db(xb)
    e0 = c.e(0)
    return exp(-c.B(X, Yb)), 1 - exp(c.B(e0, e0 + X + Yb)) / (z * xb)


@_register("DTC_1", "KP", ("z", "zeta"))
def _dtc_1(c: Ctx, a):
    return _dmkp_sides(c, *_pair(a, "z", "zeta"))


def _dtc_second(c: Ctx, z, x):
    X, Y = c.D(z), c.D(x)
    e0 = c.e(0)
    return exp(-c.B(X, Y)), 1 - exp(c.B(e0, e0 + X + Y)) / (z * x)


@_register("DTC_2", "KP", ("z", "zeta"))
def _dtc_2(c: Ctx, a):
    return _dtc_second(c, a["z"], a["zeta"])


def omega(c: Ctx, z) -> complex:
    """omega(z) = z exp(-F00/2 - d_{t0} D(z) F)."""
    return z * exp(-c.F(0, 0) / 2 - c.B(c.e(0), c.D(z)))


@_register("DTC1_1", "KP", ("z", "zeta"))
def _dtc1_1(c: Ctx, a):
    z, x = _pair(a, "z", "zeta")
    lhs = exp(-c.F(0, 0) / 2 + c.B(c.D(z), c.D(x)))
    return lhs, (omega(c, z) - omega(c, x)) / (z - x)


@_register("DTC1_2", "KP", ("z", "zeta"))
def _dtc1_2(c: Ctx, a):
    z, x = a["z"], a["zeta"]
    return exp(-c.B(c.D(z), c.D(x))), 1 - 1 / (omega(c, z) * omega(c, x))


@_register("DTC2", "KP", ("z",))
def _dtc2(c: Ctx, a):
    z = a["z"]
    w = omega(c, z)
    return z, exp(c.F(0, 0) / 2) * (w + 1 / w) + (c.F(0, 1) if c.M >= 1 else 0j)


def _tilde_pair(a):
    z, x = a["z"], a["zeta"]
    if z * z == x * x:
        raise SingularArgs(f"z^2 and zeta^2 coincide ({z!r}, {x!r})")
    return z, x


@_register("DTC3_1", "KP", ("z", "zeta"), "numerator with z, as displayed")
def _dtc3_1(c: Ctx, a):
    z, x = _tilde_pair(a)
    X, Y = c.D(z * z), c.D(x * x)
    e0 = c.e(0)
    lhs = exp(c.B(X, Y))
    rhs = (z * exp(-c.B(e0, X)) - x * exp(-c.B(e0, Y))) / (z * z - x * x)
    return lhs, rhs


@_register("DTC3_1_ALT", "KP", ("z", "zeta"), "numerator with z^2, as obtained by substitution")
def _dtc3_1_alt(c: Ctx, a):
    z, x = _tilde_pair(a)
    return _dmkp_sides(c, z * z, x * x)


@_register("DTC3_2", "KP", ("z", "zeta"))
def _dtc3_2(c: Ctx, a):
    z, x = a["z"], a["zeta"]
    return _dtc_second(c, z * z, x * x)


# --------------------------------------------------------------------------
# determinant relations


def _points(a, n):
    zs = [complex(v) for v in a["zs"]]
    if len(zs) != n:
        raise ValueError(f"need exactly {n} spectral points, got {len(zs)}")
    for i in range(n):
        if zs[i] == 0:
            raise SingularArgs("spectral points must be nonzero")
        for j in range(i):
            _distinct(zs[i], zs[j], f"z{j + 1} and z{i + 1}")
    return zs


@_register("DMKP_DET3", "KP", ("zs",))
def _det3(c: Ctx, a):
    zs = _points(a, 3)
    N = [c.N(z) for z in zs]
    col = [exp(c.B(N[1], N[2])), exp(c.B(N[0], N[2])), exp(c.B(N[0], N[1]))]
    A = np.array([[1, 1 / zs[i], col[i]] for i in range(3)], dtype=complex)
    return complex(np.linalg.det(A)), 0j


@_register("DMKP_DET4", "KP", ("zs",))
def _det4(c: Ctx, a):
    zs = _points(a, 4)
    N = [c.N(z) for z in zs]
    rows = []
    for i in range(4):
        j, k, l = (m for m in range(4) if m != i)
        expo = c.B(N[j], N[k]) + c.B(N[k], N[l]) + c.B(N[l], N[j])
        rows.append([1, 1 / zs[i], 1 / zs[i] ** 2, exp(expo)])
    return complex(np.linalg.det(np.array(rows, dtype=complex))), 0j


@_register("THREE_TERM", "KP", ("zs",))
def _three_term(c: Ctx, a):
    z1, z2, z3 = _points(a, 3)
    D1, D2, D3 = c.D(z1), c.D(z2), c.D(z3)
    lhs = (
        (z1 - z2) * exp(c.B(D1, D2))
        + (z2 - z3) * exp(c.B(D2, D3))
        + (z3 - z1) * exp(c.B(D1, D3))
    )
    return lhs, 0j


EQUATION_IDS = tuple(REGISTRY)


# --------------------------------------------------------------------------
# public evaluation


def _normalize_args(eq: Equation, args: Mapping | None) -> dict:
    args = dict(args or {})
    out = {}
    for name in eq.args:
        if name not in args or args[name] is None:
            raise ValueError(f"{eq.name} needs argument {name!r}")
        if name == "zs":
            out[name] = [complex(v) for v in args[name]]
        else:
            v = complex(args[name])
            if v == 0:
                raise SingularArgs(f"{name} must be nonzero")
            out[name] = v
    return out


def equation_sides(eq: str, model: PolynomialTauModel, point: TimePoint, args: Mapping | None = None):
    """(lhs, rhs) of the named equation."""
    try:
        spec = REGISTRY[eq]
    except KeyError:
        raise ValueError(f"unknown equation id {eq!r}") from None
    if model.variant != spec.variant:
        raise VariantMismatch(f"{eq} needs a {spec.variant} model, got {model.variant}")
    a = _normalize_args(spec, args)
    lhs, rhs = spec.sides(Ctx(model, point), a)
    return complex(lhs), complex(rhs)


def eval_equation(
    eq: str,
    model: PolynomialTauModel,
    point: TimePoint,
    args: Mapping | None = None,
    tol: float | None = None,
    seed: int | None = None,
) -> ResidualReport:
    """Evaluate both sides of ``eq`` and wrap them in a ResidualReport."""
    lhs, rhs = equation_sides(eq, model, point, args)
    spec = REGISTRY[eq]
    shown = {k: (v if k != "zs" else list(v)) for k, v in _normalize_args(spec, args).items()}
    return ResidualReport.from_sides(
        eq,
        lhs,
        rhs,
        tol=DEFAULT_TOL.rel_tol if tol is None else tol,
        seed=seed,
        point=point.to_dict(),
        args=shown,
    )


# --------------------------------------------------------------------------
# conjugation covariance


def _close(a: complex, b: complex) -> float:
    return rel_residual(a, b)


def conjugation_defect(eq: str, model: PolynomialTauModel, point: TimePoint, args: Mapping) -> float:
    """Defect of the bar-operation covariance for a PFT equation.

    For a real model at a conjugate-symmetric point:

    * PFT1/PFT2 sides at (z, zeta) are the conjugates of PFT1A/PFT2A sides
      at (conj z, conj zeta), and vice versa;
    * PFT3 sides at (a, b) are the conjugates of PFT3 sides at (conj b, conj a);
    * PFT4 residuals obey conj(res(a, b)) = -(b'/a') E'^{-1} res(a', b') with
      a' = conj b, b' = conj a and E' the exponential prefactor at (a', b').
    """
    pairs = {"PFT1": "PFT1A", "PFT1A": "PFT1", "PFT2": "PFT2A", "PFT2A": "PFT2"}
    if eq in pairs:
        other = pairs[eq]
        keys = REGISTRY[eq].args
        okeys = REGISTRY[other].args
        oargs = {ok: complex(args[k]).conjugate() for k, ok in zip(keys, okeys)}
        l1, r1 = equation_sides(eq, model, point, args)
        l2, r2 = equation_sides(other, model, point, oargs)
        return max(_close(l1.conjugate(), l2), _close(r1.conjugate(), r2))
    if eq not in ("PFT3", "PFT4"):
        raise ValueError(f"no bar-covariance rule for {eq}")
    a, b = complex(args["z"]), complex(args["zetabar"])
    a2, b2 = b.conjugate(), a.conjugate()
    swapped = {"z": a2, "zetabar": b2}
    if eq == "PFT3":
        l1, r1 = equation_sides(eq, model, point, args)
        l2, r2 = equation_sides(eq, model, point, swapped)
        return max(_close(l1.conjugate(), l2), _close(r1.conjugate(), r2))
    l1, r1 = equation_sides(eq, model, point, args)
    l2, r2 = equation_sides(eq, model, point, swapped)
    _, E2, _ = _pft4_parts(Ctx(model, point), a2, b2)
    predicted = -(b2 / a2) / E2 * (l2 - r2)
    scale = max(1.0, abs(l1), abs(r1), abs(l2), abs(r2))
    return abs((l1 - r1).conjugate() - predicted) / scale
