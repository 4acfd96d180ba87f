"""Residual records and canonical JSON serialization."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .numerics import rel_residual

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ResidualReport:
    """One evaluation of an equation or identity on concrete data."""

    eq: str
    lhs: complex
    rhs: complex
    abs_res: float
    rel_res: float
    passed: bool
    seed: int | None = None
    sample: int | None = None
    point: dict | None = None
    args: dict = field(default_factory=dict)

    @classmethod
    def from_sides(cls, eq, lhs, rhs, tol=None, **kw) -> "ResidualReport":
        lhs, rhs = complex(lhs), complex(rhs)
        rel = rel_residual(lhs, rhs)
        passed = bool(rel < tol) if tol is not None else bool(rel == 0.0 or rel < 1e-9)
        return cls(eq, lhs, rhs, abs(lhs - rhs), rel, passed, **kw)

    def to_dict(self) -> dict:
        return {
            "eq": self.eq,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_res": self.abs_res,
            "rel_res": self.rel_res,
            "pass": self.passed,
            "seed": self.seed,
            "sample": self.sample,
            "point": self.point,
            "args": self.args,
        }


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"NaN"'
    if math.isinf(x):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _escape(s: str) -> str:
    return json.dumps(s, ensure_ascii=True)


def dumps(obj: Any, indent: int | None = 2, _level: int = 0) -> str:
    """Deterministic JSON: sorted keys, floats with 17 significant digits,
    complex numbers as ``[re, im]``."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], None)
    if isinstance(obj, str):
        return _escape(obj)
    if hasattr(obj, "to_dict"):
        return dumps(obj.to_dict(), indent, _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{_escape(str(k))}: {dumps(obj[k], indent, _level + 1)}"
            for k in sorted(obj, key=str)
        ]
        return "{" + ",".join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in obj]
        return "[" + ",".join(items) + end + "]"
    # numpy scalars
    if hasattr(obj, "item"):
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")
