"""Check reports, residual conventions and truncation-tail bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class CheckReport:
    name: str
    samples: int
    max_residual: float
    tolerance: float
    witness: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "samples": int(self.samples),
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "witness": _jsonable(self.witness),
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: residual {self.max_residual:.3e} <= {self.tolerance:.1e} ({self.samples} samples)"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


def relative_residual(lhs, rhs):
    """``|lhs - rhs| / (1 + |lhs| + |rhs|)``, elementwise (last axis is the blade axis if 2-D)."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lhs.ndim >= 2:
        diff = np.linalg.norm(lhs - rhs, axis=-1)
        return diff / (1.0 + np.linalg.norm(lhs, axis=-1) + np.linalg.norm(rhs, axis=-1))
    return np.abs(lhs - rhs) / (1.0 + np.abs(lhs) + np.abs(rhs))


def linear_tail(bound: float, degree: int, r: float) -> float:
    """Upper bound of ``sum_{k>N} bound * k * r^k`` (coefficients with ``|a_k| <= C k``).

    Closed form ``C r^(N+1) ((N+1)(1-r) + r) / (1-r)^2``.
    """
    m = degree + 1
    return bound * r ** m * (m * (1 - r) + r) / (1 - r) ** 2


def power_tail(bound: float, power: int, start: int, r: float) -> float:
    """``sum_{k>=start} bound * (k+1)^power * r^k`` summed until terms are negligible."""
    if r <= 0:
        return 0.0
    # terms peak near k = power / -log r and then decay geometrically
    stop = max(start, int(power / -math.log(r))) + int(80 / -math.log(r)) + 10
    k = np.arange(start, stop, dtype=float)
    logs = np.log(bound) + power * np.log(k + 1) + k * math.log(r) if bound > 0 else None
    if logs is None:
        return 0.0
    return float(np.sum(np.exp(logs)))


def geometric_tail(bound: float, start: int, r: float) -> float:
    """``sum_{k>=start} bound * r^k``."""
    return bound * r ** start / (1 - r)
