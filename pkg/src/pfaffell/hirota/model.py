"""Exact sparse polynomial tau-function models and time points.

A KP model is a polynomial in ``t0..tM``. A Toda model is a polynomial in
``t0..tM, tb0..tbM`` (``tb`` for the barred times) whose coefficients obey
``coeff(alpha, beta) = conj(coeff(beta, alpha))``, so that it is real on the
slice ``tbar = conj(t)``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from ..errors import IndexOutOfRange, ModelFormatError, VariantMismatch

VARIANTS = ("KP", "Toda")
SYMMETRY_TOL = 1e-12

_LABEL = re.compile(r"^(t|tb|tbar)(\d+)$")


def n_vars(variant: str, M: int) -> int:
    return (M + 1) * (2 if variant == "Toda" else 1)


def var_label(variant: str, M: int, i: int) -> str:
    if i <= M:
        return f"t{i}"
    return f"tb{i - M - 1}"


def var_index(variant: str, M: int, label) -> int:
    """Flat index of a variable given as ``"t3"``, ``"tb3"`` or an int."""
    n = n_vars(variant, M)
    if isinstance(label, (int, np.integer)):
        i = int(label)
    else:
        m = _LABEL.match(str(label).strip())
        if not m:
            raise IndexOutOfRange(f"unknown time variable {label!r}")
        k = int(m.group(2))
        if m.group(1) != "t" and variant != "Toda":
            raise VariantMismatch(f"{label!r} needs a Toda model")
        if k > M:
            raise IndexOutOfRange(f"{label!r} exceeds max time index {M}")
        i = k if m.group(1) == "t" else M + 1 + k
    if not 0 <= i < n:
        raise IndexOutOfRange(f"variable index {i} outside 0..{n - 1}")
    return i


# --------------------------------------------------------------------------
# time points


@dataclass(frozen=True)
class TimePoint:
    """Values of the times. ``tbar`` is None for KP points.

    Missing trailing times are read as zero; times beyond a model's M are ignored.
    """

    t: tuple[complex, ...]
    tbar: tuple[complex, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(complex(x) for x in self.t))
        if self.tbar is not None:
            object.__setattr__(self, "tbar", tuple(complex(x) for x in self.tbar))

    @classmethod
    def kp(cls, values: Iterable[float]) -> "TimePoint":
        return cls(tuple(values))

    @classmethod
    def toda(cls, t: Iterable[complex], tbar: Iterable[complex] | None = None) -> "TimePoint":
        """Toda point; ``tbar`` defaults to the complex conjugate of ``t``."""
        t = tuple(complex(x) for x in t)
        tb = tuple(x.conjugate() for x in t) if tbar is None else tuple(tbar)
        return cls(t, tb)

    @classmethod
    def from_s_r(cls, s: float, r_time: complex, higher: Iterable[complex] = ()) -> "TimePoint":
        """t0 = s + r, tbar0 = s - r, higher times conjugate."""
        higher = tuple(complex(x) for x in higher)
        t = (s + r_time,) + higher
        tb = (s - r_time,) + tuple(x.conjugate() for x in higher)
        return cls(t, tb)

    @property
    def s(self) -> complex:
        return (self.t[0] + self.tbar[0]) / 2 if self.tbar else self.t[0]

    @property
    def r_time(self) -> complex:
        return (self.t[0] - self.tbar[0]) / 2 if self.tbar else 0j

    def is_conjugate_symmetric(self, tol: float = 0.0) -> bool:
        if self.tbar is None:
            return all(abs(x.imag) <= tol for x in self.t)
        n = max(len(self.t), len(self.tbar))
        t = self.t + (0j,) * (n - len(self.t))
        tb = self.tbar + (0j,) * (n - len(self.tbar))
        return all(abs(a.conjugate() - b) <= tol for a, b in zip(t, tb))

    def vector(self, variant: str, M: int) -> np.ndarray:
        def pad(vals):
            # times beyond M do not enter F and are ignored
            out = np.zeros(M + 1, dtype=complex)
            n = min(len(vals), M + 1)
            out[:n] = vals[:n]
            return out

        if variant == "Toda":
            tb = self.tbar if self.tbar is not None else tuple(x.conjugate() for x in self.t)
            return np.concatenate([pad(self.t), pad(tb)])
        if self.tbar is not None and any(self.tbar):
            raise VariantMismatch("KP models take no barred times")
        return pad(self.t)

    @classmethod
    def parse(cls, text: str) -> "TimePoint":
        """Parse ``"t0=0.1,t1=0.2,tb1=0.3"``; complex values use Python syntax (``1+2j``)."""
        t: dict[int, complex] = {}
        tb: dict[int, complex] = {}
        text = text.strip()
        if text:
            for item in text.split(","):
                if "=" not in item:
                    raise ValueError(f"expected name=value, got {item!r}")
                name, value = (s.strip() for s in item.split("=", 1))
                m = _LABEL.match(name)
                if not m:
                    raise ValueError(f"unknown time {name!r}")
                (t if m.group(1) == "t" else tb)[int(m.group(2))] = complex(value.replace(" ", ""))
        nt = max(t, default=-1) + 1
        tvals = tuple(t.get(i, 0j) for i in range(max(nt, 1)))
        if not tb:
            return cls(tvals)
        n = max(nt, max(tb) + 1)
        tvals = tuple(t.get(i, 0j) for i in range(n))
        return cls(tvals, tuple(tb.get(i, 0j) for i in range(n)))

    def to_dict(self) -> dict:
        out = {"t": list(self.t)}
        if self.tbar is not None:
            out["tbar"] = list(self.tbar)
        return out


# --------------------------------------------------------------------------
# polynomial models


def _normalize_terms(terms, n: int) -> tuple[tuple[tuple[int, ...], complex], ...]:
    acc: dict[tuple[int, ...], complex] = {}
    for exps, c in (terms.items() if isinstance(terms, Mapping) else terms):
        exps = tuple(int(e) for e in exps)
        if len(exps) < n:
            exps = exps + (0,) * (n - len(exps))
        if len(exps) != n or any(e < 0 for e in exps):
            raise ModelFormatError(f"bad exponent vector {exps} for {n} variables")
        acc[exps] = acc.get(exps, 0j) + complex(c)
    return tuple(sorted((k, v) for k, v in acc.items() if v != 0))


@dataclass(frozen=True)
class PolynomialTauModel:
    """Finite polynomial F with exact derivatives.

    Parameters
    ----------
    variant : {"KP", "Toda"}
    M : int
        Largest time index.
    terms : mapping or iterable of pairs
        Exponent vector (length ``M+1`` for KP, ``2(M+1)`` for Toda with the
        barred exponents last) to coefficient.
    """

    variant: str
    M: int
    terms: tuple = field(default=())

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ModelFormatError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if int(self.M) < 0:
            raise ModelFormatError("M must be non-negative")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "terms", _normalize_terms(self.terms, self.nvars))

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, variant: str = "KP", M: int = 1) -> "PolynomialTauModel":
        return cls(variant, M, ())

    @classmethod
    def from_monomials(cls, variant: str, M: int, monomials: Mapping[str, complex]) -> "PolynomialTauModel":
        """Build from strings like ``{"t1^2": 0.5, "t0*tb0": 1.0}``."""
        n = n_vars(variant, M)
        terms = []
        for mono, c in monomials.items():
            exps = [0] * n
            mono = mono.strip()
            if mono not in ("", "1"):
                for factor in mono.split("*"):
                    name, _, power = factor.strip().partition("^")
                    exps[var_index(variant, M, name)] += int(power) if power else 1
            terms.append((tuple(exps), c))
        return cls(variant, M, terms)

    @classmethod
    def from_second_derivatives(
        cls, variant: str, M: int, values: Mapping[tuple[int, int], complex]
    ) -> "PolynomialTauModel":
        """Quadratic model with prescribed constant second derivatives.

        ``values[(i, j)]`` is d_i d_j F for flat indices i <= j. For Toda the
        conjugate partners are filled in, so only one of each pair is needed.
        """
        n = n_vars(variant, M)
        coeffs: dict[tuple[int, ...], complex] = {}

        def put(i, j, v):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            coeffs[tuple(e)] = v / 2 if i == j else v

        for (i, j), v in values.items():
            i, j = sorted((int(i), int(j)))
            put(i, j, complex(v))
            if variant == "Toda":
                ci, cj = sorted((_partner(i, M), _partner(j, M)))
                if (ci, cj) not in values and (cj, ci) not in values:
                    put(ci, cj, complex(v).conjugate())
        return cls(variant, M, coeffs)

    # -- basic properties -------------------------------------------------
    @property
    def nvars(self) -> int:
        return n_vars(self.variant, self.M)

    @property
    def labels(self) -> list[str]:
        return [var_label(self.variant, self.M, i) for i in range(self.nvars)]

    @property
    def coeff_map(self) -> dict[tuple[int, ...], complex]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def index(self, label) -> int:
        return var_index(self.variant, self.M, label)

    def symmetry_defect(self) -> float:
        """Largest violation of the reality condition on the coefficients."""
        cm = self.coeff_map
        if self.variant == "KP":
            return max((abs(c.imag) for c in cm.values()), default=0.0)
        m1 = self.M + 1
        worst = 0.0
        for e, c in cm.items():
            swapped = e[m1:] + e[:m1]
            worst = max(worst, abs(c - cm.get(swapped, 0j).conjugate()))
        return worst

    # -- calculus ---------------------------------------------------------
    def diff(self, *variables) -> "PolynomialTauModel":
        """Exact partial derivative with respect to the listed variables."""
        terms = self.terms
        for v in variables:
            i = self.index(v)
            out = []
            for e, c in terms:
                if e[i]:
                    e2 = list(e)
                    e2[i] -= 1
                    out.append((tuple(e2), c * e[i]))
            terms = out
        return PolynomialTauModel(self.variant, self.M, terms)

    def evaluate(self, point: TimePoint) -> complex:
        x = point.vector(self.variant, self.M)
        total = 0j
        for e, c in self.terms:
            total += c * np.prod([x[i] ** k for i, k in enumerate(e) if k])
        return complex(total)

    __call__ = evaluate

    def gradient(self, point: TimePoint) -> np.ndarray:
        x = point.vector(self.variant, self.M)
        g = np.zeros(self.nvars, dtype=complex)
        for e, c in self.terms:
            for i, k in enumerate(e):
                if k:
                    g[i] += c * k * _mono(x, e, i)
        return g

    def hessian(self, point: TimePoint) -> np.ndarray:
        """Matrix of all second partials at ``point``, exact up to rounding."""
        x = point.vector(self.variant, self.M)
        n = self.nvars
        H = np.zeros((n, n), dtype=complex)
        for e, c in self.terms:
            active = [i for i, k in enumerate(e) if k]
            for a, i in enumerate(active):
                for j in active[a:]:
                    if i == j:
                        if e[i] < 2:
                            continue
                        val = c * e[i] * (e[i] - 1) * _mono(x, e, i, i)
                    else:
                        val = c * e[i] * e[j] * _mono(x, e, i, j)
                    H[i, j] += val
                    if i != j:
                        H[j, i] += val
        return H

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        m1 = self.M + 1
        out = []
        for e, c in self.terms:
            item = {"t": list(e[:m1]), "coeff": [c.real, c.imag]}
            if self.variant == "Toda":
                item["tbar"] = list(e[m1:])
            out.append(item)
        return {"variant": self.variant, "M": self.M, "terms": out}

    @classmethod
    def from_dict(cls, obj: Mapping) -> "PolynomialTauModel":
        try:
            variant = obj["variant"]
            M = int(obj["M"])
            raw = obj["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelFormatError(f"model needs variant, M and terms: {exc}") from exc
        if variant not in VARIANTS:
            raise ModelFormatError(f"unknown variant {variant!r}")
        terms = []
        for item in raw:
            try:
                t = list(item["t"])
                tb = list(item.get("tbar", []))
                coeff = item["coeff"]
                c = complex(coeff[0], coeff[1]) if isinstance(coeff, (list, tuple)) else complex(coeff)
            except (KeyError, TypeError, ValueError, IndexError) as exc:
                raise ModelFormatError(f"bad term {item!r}") from exc
            if len(t) > M + 1 or len(tb) > M + 1:
                raise ModelFormatError(f"term {item!r} exceeds M = {M}")
            if tb and variant != "Toda":
                raise ModelFormatError("KP terms cannot carry tbar exponents")
            t += [0] * (M + 1 - len(t))
            if variant == "Toda":
                tb += [0] * (M + 1 - len(tb))
            terms.append((tuple(t + tb), c))
        model = cls(variant, M, terms)
        defect = model.symmetry_defect()
        if defect > SYMMETRY_TOL:
            what = "conjugation symmetry" if variant == "Toda" else "real coefficients"
            raise ModelFormatError(f"{what} violated by {defect:.3g}")
        return model

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "PolynomialTauModel":
        try:
            obj = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"{path}: {exc}") from exc
        return cls.from_dict(obj)


def _partner(i: int, M: int) -> int:
    m1 = M + 1
    return i + m1 if i < m1 else i - m1


def _mono(x: np.ndarray, e: tuple[int, ...], *drop: int) -> complex:
    # product of x^e with one power removed for each index in ``drop``
    e = list(e)
    for i in drop:
        e[i] -= 1
    val = 1 + 0j
    for i, k in enumerate(e):
        if k:
            val *= x[i] ** k
    return val


# --------------------------------------------------------------------------
# functional interface


def _flatten_multi_index(model: PolynomialTauModel, multi_index) -> list:
    if isinstance(multi_index, Mapping):
        out = []
        for name, count in multi_index.items():
            out += [name] * int(count)
        return out
    if isinstance(multi_index, str):
        return [s for s in re.split(r"[,\s]+", multi_index) if s]
    return list(multi_index)


def partial(model: PolynomialTauModel, multi_index, point: TimePoint) -> complex:
    """Mixed partial derivative at ``point``.

    ``multi_index`` lists the variables to differentiate by (labels such as
    ``"t1"``/``"tb0"`` or flat indices), or maps labels to counts.
    """
    return model.diff(*_flatten_multi_index(model, multi_index)).evaluate(point)


def hessian(model: PolynomialTauModel, point: TimePoint) -> np.ndarray:
    return model.hessian(point)


FLAVORS = ("D", "Dbar", "Nabla", "Nablabar")


def op_vector(model: PolynomialTauModel, flavor: str, z: complex) -> np.ndarray:
    """Coefficients of D(z), Dbar(z), Nabla(z) or Nablabar(z) on the flat variables.

    For the barred flavors ``z`` is the barred spectral parameter itself.
    """
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}")
    z = complex(z)
    if z == 0:
        raise ZeroDivisionError("operators need z != 0")
    barred = flavor in ("Dbar", "Nablabar")
    if barred and model.variant != "Toda":
        raise VariantMismatch(f"{flavor} needs a Toda model")
    base = model.M + 1 if barred else 0
    v = np.zeros(model.nvars, dtype=complex)
    for k in range(1, model.M + 1):
        v[base + k] = z ** (-k) / k
    if flavor.startswith("Nabla"):
        v[base] = 1.0
    return v


def dop(model: PolynomialTauModel, flavor: str, z: complex, target_derivs, point: TimePoint) -> complex:
    """Operator of the given flavor applied to d^{target_derivs} F at ``point``."""
    inner = model.diff(*_flatten_multi_index(model, target_derivs))
    return complex(op_vector(model, flavor, z) @ inner.gradient(point))
