"""Normalized univalent test functions, Koebe rotations and ball automorphisms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..clifford import QUATERNION, Multivector, SliceStructure, embed_complex, parse_multivector
from ..errors import UsageError
from ..series import ComplexSeries, SliceSeries, ext, star_product
from .report import geometric_tail, linear_tail, power_tail


def koebe_coefficients(theta: float, degree: int) -> np.ndarray:
    """Taylor coefficients of ``z / (1 - e^{i theta} z)^2``: ``c_k = k e^{i(k-1)theta}``."""
    k = np.arange(degree + 1)
    c = k * np.exp(1j * (k - 1) * theta)
    c[0] = 0.0
    return c


def koebe_series(s: SliceStructure, axis: Multivector, theta: float, degree: int) -> SliceSeries:
    """``k_{I,theta}(x) = x (1 - x e^{I theta})^{-*2}`` truncated at ``degree``."""
    if degree < 1:
        raise UsageError("Koebe series needs degree >= 1")
    return ext(ComplexSeries(koebe_coefficients(theta, degree)), axis, s)


def moebius_series(a: Multivector, u: Multivector, degree: int) -> SliceSeries:
    """Slice regular ball automorphism ``(1 - x conj(a))^{-*} * (x - a) u`` truncated at ``degree``."""
    from ..clifford import quaternion_structure

    s = quaternion_structure()
    if a.ctx is not s.ctx or u.ctx is not s.ctx:
        raise UsageError("moebius maps are defined over the quaternions")
    if np.linalg.norm(a.coeffs) >= 1.0:
        raise UsageError("moebius parameter a must lie in the open unit ball")
    if abs(np.linalg.norm(u.coeffs) - 1.0) > 1e-12:
        raise UsageError("moebius rotation u must be a unit quaternion")
    abar = a.conjugate()
    powers = np.zeros((degree + 1, s.ctx.dim))
    p = Multivector.scalar(s.ctx)
    for k in range(degree + 1):
        powers[k] = p.coeffs
        p = p * abar
    inv = SliceSeries(s, powers)
    lin = SliceSeries(s, np.array([(-a).coeffs, Multivector.scalar(s.ctx).coeffs]))
    prod = star_product(inv, lin).coeffs[: degree + 1]
    return SliceSeries(s, s.ctx.mul_arrays(prod, np.broadcast_to(u.coeffs, prod.shape)))


@dataclass(frozen=True)
class SeedFunction:
    """A catalog entry: a series plus the facts the checks rely on.

    ``coeff_bound`` is ``C`` in ``|a_k| <= C k``; ``ratio_bound`` bounds the
    coefficients of ``z F'(z)/F(z)``. Both feed the truncation-tail slack.
    """

    name: str
    series: SliceSeries
    axis: Multivector
    normalized: bool
    coeff_bound: float = 1.0
    ratio_bound: float = 2.0
    rotation: Optional[Multivector] = None
    params: dict = field(default_factory=dict)
    complex_coeffs: Optional[Callable[[int], np.ndarray]] = field(default=None, repr=False, compare=False)

    @property
    def structure(self) -> SliceStructure:
        return self.series.structure

    @property
    def degree(self) -> int:
        return self.series.degree

    def realize(self, degree: int) -> SliceSeries:
        if self.complex_coeffs is None:
            raise UsageError(f"{self.name} cannot be re-expanded")
        return SliceSeries(self.structure, embed_complex(self.axis.coeffs, self.complex_coeffs(degree)))

    def slice_coefficients(self, degree: int | None = None) -> np.ndarray:
        """Complex coefficients on the preserved slice."""
        if degree is not None and self.complex_coeffs is not None:
            return self.complex_coeffs(degree)
        a = self.series.coeffs
        return a[:, 0] + 1j * (a @ self.axis.coeffs)

    def tail_f(self, r: float, degree: int | None = None) -> float:
        return linear_tail(self.coeff_bound, self.degree if degree is None else degree, r)

    def tail_derivative(self, r: float, degree: int | None = None) -> float:
        return power_tail(self.coeff_bound, 2, self.degree if degree is None else degree, r)

    def tail_ratio(self, r: float, degree: int | None = None) -> float:
        return geometric_tail(self.ratio_bound, self.degree if degree is None else degree, r)

    def label(self) -> str:
        extra = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}({extra})" if extra else self.name

    def to_json(self) -> dict:
        return {"name": self.name, "params": self.params, "axis": self.axis.to_json(),
                "normalized": self.normalized, "degree": self.degree}


def _from_complex(name, s, axis, fn, degree, **kw) -> SeedFunction:
    series = SliceSeries(s, embed_complex(axis.coeffs, fn(degree)))
    return SeedFunction(name, series, axis, True, complex_coeffs=fn, **kw)


def identity_coefficients(degree):
    c = np.zeros(max(degree, 1) + 1, dtype=complex)
    c[1] = 1.0
    return c


def cayley_coefficients(degree):
    c = np.ones(degree + 1, dtype=complex)
    c[0] = 0.0
    return c


def halfsquare_coefficients(degree):
    c = np.zeros(max(degree, 2) + 1, dtype=complex)
    c[1] = 1.0
    c[2] = -0.5
    return c


def _tilted_axis(s: SliceStructure) -> Multivector:
    ctx = s.ctx
    if s.kind == QUATERNION:
        return parse_multivector(ctx, "e1+e2+e12") / math.sqrt(3)
    if ctx.n == 1:
        return Multivector.generator(ctx, 1)
    return parse_multivector(ctx, "e1+e2") / math.sqrt(2)


def seed_catalog(s: SliceStructure, degree: int) -> list[SeedFunction]:
    """Catalog of test functions on ``s``.

    Every normalized entry is the slice extension of a classical univalent map:
    identity; Koebe rotations (extremal); ``z/(1-z)`` (onto ``Re w > -1/2``);
    ``z - z^2/2`` (``Re F' > 0`` on the disc). Quaternionic catalogs add a ball
    automorphism preserving a rotated slice.
    """
    e1 = Multivector.generator(s.ctx, 1)
    tilted = _tilted_axis(s)
    entries = [
        _from_complex("identity", s, e1, identity_coefficients, degree, ratio_bound=1.0),
        _from_complex("koebe", s, e1, lambda d: koebe_coefficients(0.0, d), degree,
                      params={"theta": 0.0, "axis": "e1"}),
        _from_complex("koebe", s, tilted, lambda d: koebe_coefficients(math.pi / 3, d), degree,
                      params={"theta": round(math.pi / 3, 12), "axis": "tilted"}),
        _from_complex("cayley", s, e1, cayley_coefficients, degree, ratio_bound=1.0),
        _from_complex("halfsquare", s, e1, halfsquare_coefficients, degree, ratio_bound=1.0),
    ]
    if s.kind == QUATERNION:
        a = 0.5 * e1
        u = parse_multivector(s.ctx, "e1+e2") / math.sqrt(2)
        entries.append(SeedFunction("moebius", moebius_series(a, u, degree), e1, False,
                                    rotation=u, params={"a": "0.5e1", "u": "(e1+e2)/sqrt2"}))
    return entries


def is_koebe_rotation(f: SliceSeries, tol: float = 1e-9):
    """Return ``(True, axis, theta)`` if ``f`` is a truncated Koebe rotation, else ``(False, None, None)``.

    The rotation is read off ``a_2 = 2 e^{I theta}``; every coefficient must
    then match ``k e^{I(k-1) theta}`` to within ``tol * k``.
    """
    s = f.structure
    ctx = f.ctx
    if f.degree < 2:
        return False, None, None
    a1 = f.coeffs[1]
    one = np.zeros(ctx.dim)
    one[0] = 1.0
    if np.max(np.abs(f.coeffs[0])) > tol or np.max(np.abs(a1 - one)) > tol:
        return False, None, None
    half = f.coeffs[2] / 2.0
    if abs(np.linalg.norm(half) - 1.0) > tol or not s.in_variable_space(half, tol):
        return False, None, None
    imag = half.copy()
    imag[0] = 0.0
    sin_t = float(np.linalg.norm(imag))
    axis = imag / sin_t if sin_t > tol else s.default_axis.coeffs
    theta = math.atan2(sin_t, float(half[0]))
    expected = embed_complex(axis, koebe_coefficients(theta, f.degree))
    k = np.maximum(np.arange(f.degree + 1), 1)
    if np.all(np.linalg.norm(f.coeffs - expected, axis=1) <= tol * k):
        return True, Multivector(ctx, axis), theta
    return False, None, None
