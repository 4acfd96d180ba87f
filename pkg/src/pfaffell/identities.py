"""Randomized sweep over the theta-function identities behind the uniformization."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .elliptic import (
    DEFAULT_EXCLUSION,
    KPCurveData,
    TodaCurveData,
    S_prime,
    exp_S,
    fg_pair,
    is_regular,
    kp_curve_sides,
    toda_curve_sides,
    wp_pair,
)
from .numerics import DEFAULT_TOL, Tolerance, central_diff, sample_rng
from .report import ResidualReport
from .theta import (
    ModularParam,
    as_modular,
    half_period,
    quasi_periodicity_sides,
    theta,
    theta_constants,
)

THETA_IDENTITIES = ("THETA1PRIME", "BP1A", "PARITY", "ZERO")
MAP_IDENTITIES = (
    "E222",
    "D5",
    "DIFFS",
    "SPRIME_FD",
    "E13_W",
    "E13_P",
    "KP_QUOTIENT",
    "TODA_QUOTIENT_1",
    "TODA_QUOTIENT_2",
    "T6",
    "TODA_CONSTANT",
    "E8",
)
SUITES = {
    "theta": THETA_IDENTITIES,
    "maps": MAP_IDENTITIES,
    "all": THETA_IDENTITIES + MAP_IDENTITIES,
}
FD_IDENTITIES = {"SPRIME_FD"}
DEFAULT_GRID = (1.0, 1.5, 2.0)


@dataclass(frozen=True)
class Sample:
    """Random data for one (tau, sample) cell of the sweep."""

    tau: ModularParam
    u: tuple[complex, complex, complex, complex]
    gamma: float
    eta: float


def _ratio(u, tau):
    return theta(1, u, tau) / theta(4, u, tau)


def _arguments(s: Sample) -> list[complex]:
    u1, u2, u3, u4 = s.u
    args = list(s.u)
    args += [u1 - u2, u2 - u3, u3 - u1, u2 - u4, u4 - u1, u1 - u3, u3 - u4, u4 - u2]
    args += [u + s.eta for u in s.u]
    args += [u1 + u2 + s.eta, -u1]
    return args


def draw_sample(seed: int, tau_index: int, sample: int, tau, delta=DEFAULT_EXCLUSION) -> Sample:
    """Deterministic draw keyed by (seed, tau_index, sample).

    u values are uniform in (delta, 1-delta) x (delta t, (1-delta) t); draws are
    repeated (from the same stream) until every derived argument stays
    farther than delta from the zeros of theta_1 and theta_4.
    """
    tau = as_modular(tau)
    rng = sample_rng(seed, tau_index, sample)
    while True:
        xs = rng.uniform(delta, 1 - delta, size=4)
        ys = rng.uniform(delta, 1 - delta, size=4) * tau.t
        u = tuple(complex(x, y) for x, y in zip(xs, ys))
        gamma = float(rng.uniform(0.5, 2.0))
        eta = float(rng.uniform(0.05, 0.45))
        s = Sample(tau, u, gamma, eta)
        if all(is_regular(a, tau, delta) for a in _arguments(s)):
            return s


# --------------------------------------------------------------------------
# individual identities: each returns a list of (name, lhs, rhs)


def _theta1prime(s):
    th2, th3, th4, th1p = theta_constants(s.tau)
    return [("THETA1PRIME", th1p, math.pi * th2 * th3 * th4)]


def _bp1a(s):
    out = []
    u = s.u[0]
    for a in (1, 2, 3, 4):
        (l1, r1), (lt, rt) = quasi_periodicity_sides(a, u, s.tau)
        out.append((f"BP1A_{a}_ONE", l1, r1))
        out.append((f"BP1A_{a}_TAU", lt, rt))
    return out


def _parity(s):
    u = s.u[0]
    out = [("PARITY_1", theta(1, -u, s.tau), -theta(1, u, s.tau))]
    for a in (2, 3, 4):
        out.append((f"PARITY_{a}", theta(a, -u, s.tau), theta(a, u, s.tau)))
    return out


def _zero(s):
    # real translates only: shifts by tau rescale theta by exp(pi t n^2)
    m = int(s.u[0].real * 4) - 2
    return [
        (f"ZERO_{a}", theta(a, half_period(a - 1, s.tau) + m, s.tau), 0.0)
        for a in (1, 2, 3, 4)
    ]


def _e222(s):
    th2, th3, th4, _ = theta_constants(s.tau)
    u = s.u[0]
    t1, t2, t3, t4 = (theta(a, u, s.tau) for a in (1, 2, 3, 4))
    lhs = th4**4 * t2**2 * t3**2 / (t1**2 * t4**2)
    rhs = th2**2 * th3**2 * (t4**2 / t1**2 + t1**2 / t4**2) - (th2**4 + th3**4)
    return [("E222", lhs, rhs)]


def _d5(s):
    data = KPCurveData.from_modulus(s.tau.t, s.gamma)
    lhs, rhs = kp_curve_sides(s.u[0], data)
    return [("D5", lhs, rhs)]


def _diffs(s):
    th2, th3, _, _ = theta_constants(s.tau)
    u = s.u[0]
    e = exp_S(u, s.tau)
    lhs = (S_prime(u, s.tau) / (math.pi * th2 * th3)) ** 2
    rhs = e * e + 1 / (e * e) - th2**2 / th3**2 - th3**2 / th2**2
    return [("DIFFS", lhs, rhs)]


def _sprime_fd(s):
    u = s.u[0]
    # derivative of log through the exponential: no branch bookkeeping
    fd = central_diff(lambda x: exp_S(x, s.tau), u) / exp_S(u, s.tau)
    return [("SPRIME_FD", S_prime(u, s.tau), fd)]


def _e13(s):
    data = KPCurveData.from_modulus(s.tau.t, s.gamma)
    u = s.u[0]
    w, p = wp_pair(u, data)
    e = exp_S(u, s.tau)
    return [("E13_W", w * e * e, 1.0), ("E13_P", p, data.c1 * S_prime(u, s.tau))]


def _kp_quotient(s):
    data = KPCurveData.from_modulus(s.tau.t, s.gamma)
    th2, th3, _, _ = theta_constants(s.tau)
    u1, u2 = s.u[0], s.u[1]
    w1, p1 = wp_pair(u1, data)
    w2, p2 = wp_pair(u2, data)
    lhs = (w1 - w2) / (p1 + p2)
    rhs = (
        -1.0 / (data.gamma * th2 * th3)
        * theta(4, u1, s.tau) * theta(4, u2, s.tau)
        / (theta(1, u1, s.tau) * theta(1, u2, s.tau))
        * _ratio(u1 - u2, s.tau)
    )
    return [("KP_QUOTIENT", lhs, rhs)]


def _toda_pw(u, data):
    f, g = fg_pair(u, data)
    return f * g, f / g


def _toda_quotients(s):
    data = TodaCurveData.from_modulus(s.tau.t, s.eta)
    tau, eta = s.tau, s.eta
    u1, u2 = s.u[0], s.u[1]
    P1, W1 = _toda_pw(u1, data)
    P2, W2 = _toda_pw(u2, data)
    R = _ratio(eta, tau)
    lhs1 = (W1 - W2) / (1 - P1 * P2)
    rhs1 = R * _ratio(u1 + eta, tau) * _ratio(u2 + eta, tau) * _ratio(u1 - u2, tau)
    # second identity: u2 plays the role of the independent conjugate series value
    lhs2 = (1 - W1 * W2) / (1 - P1 * P2)
    rhs2 = R * _ratio(u1 + eta, tau) * _ratio(u2 + eta, tau) * _ratio(u1 + u2 + eta, tau)
    return [("TODA_QUOTIENT_1", lhs1, rhs1), ("TODA_QUOTIENT_2", lhs2, rhs2)]


def _t6(s):
    data = TodaCurveData.from_modulus(s.tau.t, s.eta)
    f, g = fg_pair(s.u[0], data)
    lhs, rhs = toda_curve_sides(f, g, data.R, data.C)
    P, W = f * g, f / g
    comb = W + 1 / W - data.R**2 * (P + 1 / P)
    return [("T6", lhs, rhs), ("TODA_CONSTANT", comb, data.C)]


def _e8(s):
    u1, u2, u3, u4 = s.u
    T = lambda x: _ratio(x, s.tau)  # noqa: E731
    a = T(u1 - u2) * T(u2 - u3) * T(u3 - u1)
    b = T(u1 - u2) * T(u2 - u4) * T(u4 - u1)
    c = T(u1 - u3) * T(u3 - u4) * T(u4 - u1)
    d = T(u2 - u3) * T(u3 - u4) * T(u4 - u2)
    return [("E8", a + c, b + d)]


_EVALUATORS = {
    "THETA1PRIME": _theta1prime,
    "BP1A": _bp1a,
    "PARITY": _parity,
    "ZERO": _zero,
    "E222": _e222,
    "D5": _d5,
    "DIFFS": _diffs,
    "SPRIME_FD": _sprime_fd,
    "E13_W": _e13,
    "E13_P": _e13,
    "KP_QUOTIENT": _kp_quotient,
    "TODA_QUOTIENT_1": _toda_quotients,
    "TODA_QUOTIENT_2": _toda_quotients,
    "T6": _t6,
    "TODA_CONSTANT": _t6,
    "E8": _e8,
}


def _family(name: str) -> str:
    if name in _EVALUATORS:
        return name
    return name.split("_", 1)[0]


def _evaluate_cell(job) -> list[ResidualReport]:
    seed, tau_index, t, sample, identities, tol = job
    tau = ModularParam(t)
    s = draw_sample(seed, tau_index, sample, tau)
    wanted = set(identities)
    done = set()
    out = []
    for ident in identities:
        fn = _EVALUATORS[ident]
        if fn in done:
            continue
        done.add(fn)
        for name, lhs, rhs in fn(s):
            if _family(name) not in wanted:
                continue
            limit = tol.fd_tol if _family(name) in FD_IDENTITIES else tol.rel_tol
            args = {"t": t, "u": list(s.u), "gamma": s.gamma, "eta": s.eta}
            out.append(
                ResidualReport.from_sides(name, lhs, rhs, limit, seed=seed, sample=sample, args=args)
            )
    return out


def _workers(requested: int | None) -> int:
    cap = os.environ.get("PFAFF_ELL_THREADS")
    n = requested if requested is not None else 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return max(1, n)


def identity_suite(
    tau_grid=DEFAULT_GRID,
    samples: int = 100,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
    identities=None,
    workers: int | None = None,
) -> list[ResidualReport]:
    """Evaluate the identity families on ``samples`` draws per grid point.

    Entries pass iff their relative residual is below ``tol.rel_tol``
    (``tol.fd_tol`` for the finite-difference comparison). Output order is
    canonical: by identity name, then tau, then sample index.
    """
    if samples < 0:
        raise ValueError("samples must be non-negative")
    identities = tuple(identities) if identities is not None else SUITES["all"]
    unknown = set(identities) - set(_EVALUATORS)
    if unknown:
        raise ValueError(f"unknown identities: {sorted(unknown)}")
    grid = [as_modular(t).t for t in tau_grid]
    jobs = [
        (seed, i, t, k, identities, tol) for i, t in enumerate(grid) for k in range(samples)
    ]
    n = _workers(workers)
    if n > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            chunks = list(pool.map(_evaluate_cell, jobs, chunksize=max(1, len(jobs) // (4 * n))))
    else:
        chunks = [_evaluate_cell(j) for j in jobs]
    entries = [e for chunk in chunks for e in chunk]
    entries.sort(key=lambda e: (e.eq, e.args["t"], e.sample))
    return entries


def summarize(entries: list[ResidualReport]) -> dict[str, dict]:
    """Per-identity statistics: count, failures, max and mean relative residual."""
    stats: dict[str, dict] = {}
    for e in entries:
        st = stats.setdefault(e.eq, {"count": 0, "failed": 0, "max_rel": 0.0, "sum_rel": 0.0})
        st["count"] += 1
        st["failed"] += 0 if e.passed else 1
        st["max_rel"] = max(st["max_rel"], e.rel_res)
        st["sum_rel"] += e.rel_res
    for st in stats.values():
        st["mean_rel"] = st.pop("sum_rel") / st["count"]
    return dict(sorted(stats.items()))
