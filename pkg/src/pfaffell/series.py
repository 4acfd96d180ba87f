"""Truncated Laurent series in 1/z and theta-function compositions.

A :class:`TruncatedSeries` stores ``sum_{k=min_deg}^{order} a_k z^{-k}`` and is
exact through ``z^{-order}``; ``min_deg = -1`` admits a linear head ``a_{-1} z``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import OrderMismatch, ZeroLeadingCoefficient
from .theta import as_modular, theta_derivative_unchecked

DEFAULT_ORDER = 8
MAX_TAYLOR_ORDER = 16


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    coeffs: np.ndarray
    min_deg: int = 0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a series needs at least one coefficient")
        if self.min_deg < -1:
            raise OrderMismatch("min_deg must be >= -1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "min_deg", int(self.min_deg))

    # -- construction -----------------------------------------------------
    @classmethod
    def from_dict(cls, terms: dict[int, complex], order: int, min_deg: int | None = None):
        """Build from ``{degree_in_1/z: coefficient}``."""
        if min_deg is None:
            min_deg = min(0, *terms) if terms else 0
        c = np.zeros(order - min_deg + 1, dtype=complex)
        for k, v in terms.items():
            if k < min_deg:
                raise OrderMismatch(f"degree {k} below min_deg {min_deg}")
            if k <= order:
                c[k - min_deg] = v
        return cls(c, min_deg)

    @classmethod
    def constant(cls, value: complex, order: int):
        return cls.from_dict({0: value}, order, 0)

    @classmethod
    def zero(cls, order: int, min_deg: int = 0):
        return cls(np.zeros(order - min_deg + 1, dtype=complex), min_deg)

    # -- access -----------------------------------------------------------
    @property
    def order(self) -> int:
        return self.min_deg + self.coeffs.size - 1

    def __getitem__(self, k: int) -> complex:
        """Coefficient of z^{-k} (zero outside the stored range)."""
        if k < self.min_deg or k > self.order:
            if k > self.order:
                raise OrderMismatch(f"coefficient {k} beyond order {self.order}")
            return 0j
        return complex(self.coeffs[k - self.min_deg])

    def as_dict(self) -> dict[int, complex]:
        return {self.min_deg + i: complex(v) for i, v in enumerate(self.coeffs)}

    def with_range(self, min_deg: int, order: int) -> "TruncatedSeries":
        """Re-frame onto [min_deg, order]; dropped low terms must vanish."""
        if order > self.order:
            raise OrderMismatch(f"cannot extend order {self.order} to {order}")
        for k in range(self.min_deg, min_deg):
            if self[k] != 0:
                raise OrderMismatch(f"nonzero coefficient at degree {k}")
        return TruncatedSeries([self[k] if k >= self.min_deg else 0j for k in range(min_deg, order + 1)], min_deg)

    def truncate(self, order: int) -> "TruncatedSeries":
        return self.with_range(self.min_deg, min(order, self.order))

    def __call__(self, z: complex) -> complex:
        """Evaluate the truncated sum at a point."""
        x = 1 / complex(z)
        return sum(v * x ** (self.min_deg + i) for i, v in enumerate(self.coeffs))

    def __repr__(self):
        return f"TruncatedSeries({self.as_dict()!r}, order={self.order})"

    def to_dict(self) -> dict:
        return {
            "min_deg": self.min_deg,
            "order": self.order,
            "coeffs": [[v.real, v.imag] for v in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TruncatedSeries":
        coeffs = [complex(re, im) for re, im in obj["coeffs"]]
        s = cls(coeffs, obj["min_deg"])
        if s.order != obj["order"]:
            raise OrderMismatch("order field disagrees with coefficient count")
        return s

    def allclose(self, other: "TruncatedSeries", atol=1e-12, through: int | None = None) -> bool:
        top = min(self.order, other.order) if through is None else through
        lo = min(self.min_deg, other.min_deg)
        return all(abs(self[k] - other[k]) <= atol for k in range(lo, top + 1))

    # -- ring operations --------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(complex(other), self.order)

    def __add__(self, other):
        other = self._coerce(other)
        lo = min(self.min_deg, other.min_deg)
        hi = min(self.order, other.order)
        return TruncatedSeries([self[k] + other[k] for k in range(lo, hi + 1)], lo)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs, self.min_deg)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(self.coeffs * complex(other), self.min_deg)
        lo = self.min_deg + other.min_deg
        if lo < -1:
            raise OrderMismatch("product would have a z^2 head")
        hi = min(self.order + min(other.min_deg, 0), other.order + min(self.min_deg, 0))
        full = np.convolve(self.coeffs, other.coeffs)
        return TruncatedSeries(full[: hi - lo + 1], lo)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self * (1 / complex(other))
        return self * other.reciprocal()

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by z^{-k} (k = -1 multiplies by z)."""
        return TruncatedSeries(self.coeffs, self.min_deg + k)

    def reciprocal(self) -> "TruncatedSeries":
        lead = self.coeffs[0]
        if lead == 0:
            raise ZeroLeadingCoefficient("leading coefficient is zero")
        m = self.min_deg
        n = self.coeffs.size  # relative precision
        b = np.zeros(n, dtype=complex)
        b[0] = 1 / lead
        for k in range(1, n):
            b[k] = -np.dot(self.coeffs[1 : k + 1], b[k - 1 :: -1][:k]) / lead
        if -m < -1:
            raise OrderMismatch("reciprocal would have a z^2 head")
        return TruncatedSeries(b, -m)

    def derivative(self) -> "TruncatedSeries":
        """d/dz, term-wise: a z^{-k} -> -k a z^{-k-1}."""
        if self.min_deg == -1:
            return TruncatedSeries(_dz_head(self), 0)
        ks = np.arange(self.min_deg, self.order + 1)
        return TruncatedSeries(-ks * self.coeffs, self.min_deg + 1)

    dz = derivative

    def exp(self) -> "TruncatedSeries":
        if self.min_deg < 0 and self[-1] != 0:
            raise OrderMismatch("exp of a series with a z head")
        a = self.with_range(0, self.order)
        a0 = a.coeffs[0]
        n = a.coeffs.size
        e = np.zeros(n, dtype=complex)
        e[0] = cmath.exp(a0)
        # e' = a' e in the variable x = 1/z
        for k in range(1, n):
            e[k] = sum(j * a.coeffs[j] * e[k - j] for j in range(1, k + 1)) / k
        return TruncatedSeries(e, 0)

    def log(self) -> "TruncatedSeries":
        if self.min_deg < 0 and self[-1] != 0:
            raise OrderMismatch("log of a series with a z head")
        a = self.with_range(0, self.order)
        a0 = a.coeffs[0]
        if a0 == 0:
            raise ZeroLeadingCoefficient("log needs a nonzero constant term")
        n = a.coeffs.size
        out = np.zeros(n, dtype=complex)
        out[0] = cmath.log(a0)
        # x L' = x a' / a  ->  k a0 L_k = k a_k - sum_{j<k} j L_j a_{k-j}
        for k in range(1, n):
            acc = k * a.coeffs[k] - sum(j * out[j] * a.coeffs[k - j] for j in range(1, k))
            out[k] = acc / (k * a0)
        return TruncatedSeries(out, 0)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner) where self is read as a power series in its own variable.

        ``inner`` must vanish at infinity (min_deg >= 1 after trimming).
        """
        if self.min_deg < 0:
            raise OrderMismatch("outer series must be a power series")
        for k in range(inner.min_deg, min(1, inner.order + 1)):
            if inner[k] != 0:
                raise OrderMismatch("inner series must have min_deg >= 1")
        if inner.order < 1:
            raise OrderMismatch("inner series has no terms of positive degree")
        inner = inner.with_range(1, inner.order)
        # outer is known through degree N_a; missing terms start at (N_a + 1) * val(inner)
        hi = min(inner.order, (self.order + 1) * _valuation(inner) - 1)
        result = np.zeros(hi + 1, dtype=complex)
        power = TruncatedSeries.constant(1.0, hi)
        for k in range(0, min(self.order, hi) + 1):
            if k > 0:
                power = power * inner.truncate(hi)
            ck = self[k] if k >= self.min_deg else 0j
            if ck != 0:
                for d in range(0, power.order + 1):
                    result[d] += ck * power[d]
        return TruncatedSeries(result, 0)


def _valuation(s: TruncatedSeries) -> int:
    for k in range(s.min_deg, s.order + 1):
        if s[k] != 0:
            return k
    return s.order + 1


def _dz_head(s: TruncatedSeries) -> np.ndarray:
    # d/dz (a_{-1} z + a_0 + a_1/z + ...) = a_{-1} - a_1/z^2 - 2 a_2/z^3 ...
    out = np.zeros(s.order + 2, dtype=complex)
    out[0] = s[-1]
    for k in range(1, s.order + 1):
        out[k + 1] = -k * s[k]
    return out


def series_arith(op: str, a: TruncatedSeries, b: TruncatedSeries | None = None) -> TruncatedSeries:
    """Dispatch one of add, mul, exp, log, reciprocal, compose."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "exp":
        return a.exp()
    if op == "log":
        return a.log()
    if op == "reciprocal":
        return a.reciprocal()
    if op == "compose":
        return a.compose(b)
    raise ValueError(f"unknown series operation {op!r}")


# --------------------------------------------------------------------------
# theta compositions


def theta_taylor(a: int, tau, order: int) -> TruncatedSeries:
    """Taylor coefficients of theta_a at u = 0 through u^order, as a power series."""
    if order > MAX_TAYLOR_ORDER:
        raise OrderMismatch(f"Taylor order capped at {MAX_TAYLOR_ORDER}")
    tau = as_modular(tau)
    c = []
    for k in range(order + 1):
        # parity: theta_1 odd, others even
        if (a == 1) == (k % 2 == 0):
            c.append(0j)
        else:
            c.append(theta_derivative_unchecked(a, 0j, tau, k) / math.factorial(k))
    return TruncatedSeries(c, 0)


def theta_ratio_of_series(u: TruncatedSeries, tau, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Series of theta_1(u(z)) / theta_4(u(z)) through z^{-N}.

    ``u`` must vanish at infinity. The leading term is pi theta_2(0) theta_3(0) c_1 / z.
    """
    N = min(N, u.order)
    if _valuation(u) > N:
        return TruncatedSeries.zero(N)
    u = u.truncate(N)
    num = theta_taylor(1, tau, N).compose(u)
    den = theta_taylor(4, tau, N).compose(u)
    return (num * den.reciprocal()).truncate(N)


def s_of_series(u: TruncatedSeries, tau, N: int = DEFAULT_ORDER) -> TruncatedSeries:
    """Series of S(u(z)) + log z = log(z theta_1(u)/theta_4(u)) through z^{-N}.

    Needs u through z^{-(N+1)}; with less, the result is returned at the
    highest order the input determines.
    """
    ratio = theta_ratio_of_series(u, tau, min(N + 1, u.order))
    return ratio.shift(-1).with_range(0, ratio.order - 1).log().truncate(N)
