"""Arithmetic in the real Clifford algebra R_n and the slice geometry of its variable spaces.

Blades are encoded as bitmasks: bit ``i - 1`` set means the generator ``e_i``
is present, so mask ``0b101`` is ``e_1 e_3 = e13``. Coefficient arrays are
indexed by mask. Generators satisfy ``e_i e_j + e_j e_i = -2 delta_ij``.

The quaternions are realised inside R_2 with ``i = e1``, ``j = e2`` and
``k = e12``; the Clifford conjugate there coincides with quaternion
conjugation.
"""
from __future__ import annotations

import functools
import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import ConfigurationError, InvalidPointError, NotInvertibleError, UsageError

MAX_GENERATORS = 8
MEMBERSHIP_TOL = 1e-12
PIVOT_RATIO = 1e-12

PARAVECTOR = "paravector"
QUATERNION = "quaternion"


def _popcount(x: int) -> int:
    return bin(x).count("1")


def blade_product(a: int, b: int) -> tuple[int, int]:
    """Return ``(sign, mask)`` with ``e_a e_b = sign * e_mask``."""
    swaps = 0
    t = a >> 1
    while t:
        swaps += _popcount(t & b)
        t >>= 1
    # each shared generator squares to -1
    swaps += _popcount(a & b)
    return (-1 if swaps & 1 else 1), a ^ b


def blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "e" + "".join(str(i + 1) for i in range(MAX_GENERATORS) if mask >> i & 1)


@dataclass(frozen=True, eq=False)
class CliffordContext:
    """Blade basis and product table of R_n.

    Contexts are cached per ``n`` by :func:`make_context`, so identity
    comparison is the intended equality test.
    """

    n: int
    dim: int = field(init=False)
    signs: np.ndarray = field(init=False, repr=False)
    grades: np.ndarray = field(init=False, repr=False)
    conj_signs: np.ndarray = field(init=False, repr=False)
    _xor: np.ndarray = field(init=False, repr=False)
    _lsign: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        dim = 1 << self.n
        signs = np.empty((dim, dim), dtype=np.int8)
        for i in range(dim):
            for j in range(dim):
                signs[i, j] = blade_product(i, j)[0]
        grades = np.array([_popcount(m) for m in range(dim)])
        conj = np.where((grades * (grades + 1) // 2) % 2 == 0, 1.0, -1.0)
        idx = np.arange(dim)
        xor = idx[:, None] ^ idx[None, :]
        # _lsign[i, k] is the sign of e_i e_{i^k}, the term landing on blade k
        lsign = signs[idx[:, None], xor].astype(float)
        for name, value in (("dim", dim), ("signs", signs), ("grades", grades),
                            ("conj_signs", conj), ("_xor", xor), ("_lsign", lsign)):
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    def product(self, a: int, b: int) -> tuple[int, int]:
        """Signed product of two blade masks, read from the table."""
        return int(self.signs[a, b]), a ^ b

    def blade_names(self) -> list[str]:
        return [blade_name(m) for m in range(self.dim)]

    # batched kernels on raw coefficient arrays; the last axis is the blade axis

    def mul_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if a.ndim == 1 and b.ndim == 1:
            return np.einsum("i,ik,ik->k", a, self._lsign, b[self._xor])
        a, b = np.broadcast_arrays(np.atleast_2d(a), np.atleast_2d(b))
        return np.einsum("mi,ik,mik->mk", a, self._lsign, b[:, self._xor])

    def left_matrices(self, a: np.ndarray) -> np.ndarray:
        """Matrices ``L`` with ``L @ b == a * b`` (batched over leading axes)."""
        a = np.asarray(a, dtype=float)
        lead = a.shape[:-1]
        out = np.zeros(lead + (self.dim, self.dim))
        rows = np.broadcast_to(np.arange(self.dim)[None, :], (self.dim, self.dim))
        out[..., rows, self._xor] = a[..., :, None] * self._lsign
        return out

    def conj_arrays(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(a, dtype=float) * self.conj_signs


@functools.lru_cache(maxsize=None)
def make_context(n: int) -> CliffordContext:
    """Build (or fetch the cached) context for R_n, ``1 <= n <= 8``."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_GENERATORS:
        raise ConfigurationError(f"generator count must be an integer in [1, {MAX_GENERATORS}], got {n!r}")
    return CliffordContext(int(n))


class Multivector:
    """Immutable element ``sum_A b_A e_A`` of R_n."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: CliffordContext, coeffs):
        arr = np.array(coeffs, dtype=float).reshape(-1)
        if arr.shape != (ctx.dim,):
            raise UsageError(f"expected {ctx.dim} coefficients for R_{ctx.n}, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise UsageError("multivector coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors
    @classmethod
    def zero(cls, ctx):
        return cls(ctx, np.zeros(ctx.dim))

    @classmethod
    def scalar(cls, ctx, value=1.0):
        c = np.zeros(ctx.dim)
        c[0] = value
        return cls(ctx, c)

    @classmethod
    def blade(cls, ctx, mask: int, value=1.0):
        c = np.zeros(ctx.dim)
        c[mask] = value
        return cls(ctx, c)

    @classmethod
    def generator(cls, ctx, i: int, value=1.0):
        if not 1 <= i <= ctx.n:
            raise UsageError(f"e{i} does not exist in R_{ctx.n}")
        return cls.blade(ctx, 1 << (i - 1), value)

    @classmethod
    def paravector(cls, ctx, values: Sequence[float]):
        """``x_0 + x_1 e_1 + ... + x_n e_n`` from ``n + 1`` reals."""
        values = list(values)
        if len(values) != ctx.n + 1:
            raise UsageError(f"paravector in R_{ctx.n} needs {ctx.n + 1} components")
        c = np.zeros(ctx.dim)
        c[0] = values[0]
        for i, x in enumerate(values[1:]):
            c[1 << i] = x
        return cls(ctx, c)

    # algebra
    def _check(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        if other.ctx is not self.ctx:
            raise UsageError(f"context mismatch: R_{self.ctx.n} vs R_{other.ctx.n}")
        return other

    def __add__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            other = Multivector.scalar(self.ctx, float(other))
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Multivector(self.ctx, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.ctx, -self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            other = Multivector.scalar(self.ctx, float(other))
        if self._check(other) is NotImplemented:
            return NotImplemented
        return Multivector(self.ctx, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.ctx, self.coeffs * float(other))
        if self._check(other) is NotImplemented:
            return NotImplemented
        return mv_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.ctx, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.ctx, self.coeffs / float(other))
        return NotImplemented

    def __abs__(self):
        return norm(self)

    def conjugate(self):
        return mv_conjugate(self)

    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def is_paravector(self, tol=MEMBERSHIP_TOL) -> bool:
        mask = self.ctx.grades > 1
        return bool(np.all(np.abs(self.coeffs[mask]) <= tol))

    def allclose(self, other, atol=1e-12) -> bool:
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.ctx, other)
        return other.ctx is self.ctx and bool(np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol))

    def __repr__(self):
        terms = [f"{c:+.6g}*{blade_name(m)}" for m, c in enumerate(self.coeffs) if c != 0]
        return f"Multivector(R_{self.ctx.n}: {' '.join(terms) or '0'})"

    def to_json(self) -> dict:
        return {"n": self.ctx.n, "coeffs": [float(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "Multivector":
        try:
            ctx = make_context(int(data["n"]))
            return cls(ctx, data["coeffs"])
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed multivector JSON: {exc}") from exc


def _same_ctx(a: Multivector, b: Multivector):
    if a.ctx is not b.ctx:
        raise UsageError(f"context mismatch: R_{a.ctx.n} vs R_{b.ctx.n}")


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    _same_ctx(a, b)
    return Multivector(a.ctx, a.ctx.mul_arrays(a.coeffs, b.coeffs))


def mv_conjugate(a: Multivector) -> Multivector:
    """Clifford conjugate: ``e_A -> (-1)^(r(r+1)/2) e_A`` for a grade-r blade."""
    return Multivector(a.ctx, a.ctx.conj_arrays(a.coeffs))


def inner(a: Multivector, b: Multivector) -> float:
    """Euclidean inner product ``Sc(a conj(b))``, i.e. the coefficient dot product."""
    _same_ctx(a, b)
    return float(np.dot(a.coeffs, b.coeffs))


def scalar_part(a: Multivector) -> float:
    return float(a.coeffs[0])


def norm(a: Multivector) -> float:
    return float(np.linalg.norm(a.coeffs))


def mv_inverse(a: Multivector) -> Multivector:
    """Two-sided inverse of ``a``.

    Paravectors use ``conj(x) / |x|^2``. Anything else goes through an LU
    solve of the left-multiplication operator; a pivot smaller than
    ``1e-12`` times the largest pivot means ``a`` is a zero divisor.
    """
    ctx = a.ctx
    nrm2 = float(np.dot(a.coeffs, a.coeffs))
    if nrm2 == 0.0:
        raise NotInvertibleError("zero has no inverse")
    if a.is_paravector(tol=0.0):
        return Multivector(ctx, ctx.conj_arrays(a.coeffs) / nrm2)
    lmat = ctx.left_matrices(a.coeffs)
    with warnings.catch_warnings():
        # an exactly singular factor is reported below as NotInvertibleError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(lmat, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < PIVOT_RATIO * pivots.max():
        raise NotInvertibleError(f"{a!r} is a zero divisor (pivot ratio {pivots.min() / pivots.max():.3e})")
    rhs = np.zeros(ctx.dim)
    rhs[0] = 1.0
    return Multivector(ctx, scipy.linalg.lu_solve((lu, piv), rhs, check_finite=False))


def wedge_half(a: Multivector, b: Multivector) -> Multivector:
    """``(ab - ba) / 2``; for 1-vectors this is the wedge product."""
    _same_ctx(a, b)
    ab = a.ctx.mul_arrays(a.coeffs, b.coeffs)
    ba = a.ctx.mul_arrays(b.coeffs, a.coeffs)
    return Multivector(a.ctx, 0.5 * (ab - ba))


_TERM = re.compile(r"\s*([+-]?)\s*(\d+\.?\d*|\.\d+)?\s*\*?\s*((?:e\d+)*)\s*")


def parse_multivector(ctx: CliffordContext, text: str) -> Multivector:
    """Parse literals such as ``"e1"``, ``"0.6e1+0.8e2"``, ``"1 - 0.5e12"``.

    A blade token ``e12`` means ``e_1 e_2`` (single-digit generator indices).
    Scientific notation is not accepted: ``0.6e1`` is ``0.6 * e_1``.
    """
    text = text.strip()
    if not text:
        raise UsageError("empty multivector literal")
    coeffs = np.zeros(ctx.dim)
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or not (m.group(2) or m.group(3)):
            raise UsageError(f"cannot parse multivector literal {text!r} at position {pos}")
        if pos > 0 and not m.group(1):
            raise UsageError(f"missing operator in multivector literal {text!r}")
        sign = -1.0 if m.group(1) == "-" else 1.0
        value = float(m.group(2)) if m.group(2) else 1.0
        sgn, mask = 1, 0
        for tok in re.findall(r"e(\d+)", m.group(3)):
            for ch in tok:
                i = int(ch)
                if not 1 <= i <= ctx.n:
                    raise UsageError(f"e{i} does not exist in R_{ctx.n}")
                s, mask = ctx.product(mask, 1 << (i - 1))
                sgn *= s
        coeffs[mask] += sign * sgn * value
        pos = m.end()
    return Multivector(ctx, coeffs)


# ---------------------------------------------------------------------------
# slice geometry


@dataclass(frozen=True)
class SliceStructure:
    """Variable space and imaginary sphere for one of the two settings.

    ``paravector``: variables in span{1, e_1..e_n}, sphere = unit 1-vectors.
    ``quaternion``: variables are all of H = R_2, sphere = unit imaginary quaternions.
    """

    kind: str
    ctx: CliffordContext

    def __post_init__(self):
        if self.kind not in (PARAVECTOR, QUATERNION):
            raise ConfigurationError(f"unknown structure kind {self.kind!r}")
        if self.kind == QUATERNION and self.ctx.n != 2:
            raise ConfigurationError("quaternion structure lives in R_2")

    @property
    def n(self) -> int:
        return self.ctx.n

    @functools.cached_property
    def variable_blades(self) -> np.ndarray:
        """Masks spanning the variable subspace, scalar first."""
        if self.kind == QUATERNION:
            return np.arange(4)
        return np.array([0] + [1 << i for i in range(self.ctx.n)])

    @functools.cached_property
    def imaginary_blades(self) -> np.ndarray:
        """Masks spanning the ambient space of the sphere."""
        return self.variable_blades[1:]

    @property
    def default_axis(self) -> Multivector:
        return Multivector.generator(self.ctx, 1)

    def in_variable_space(self, coeffs: np.ndarray, tol=MEMBERSHIP_TOL) -> bool:
        mask = np.ones(self.ctx.dim, dtype=bool)
        mask[self.variable_blades] = False
        return bool(np.all(np.abs(np.asarray(coeffs)[..., mask]) <= tol))

    def check_axis(self, axis: Multivector, tol=MEMBERSHIP_TOL) -> Multivector:
        """Raise unless ``axis`` is a unit element of the sphere."""
        if axis.ctx is not self.ctx:
            raise InvalidPointError("axis belongs to a different algebra")
        c = axis.coeffs
        mask = np.ones(self.ctx.dim, dtype=bool)
        mask[self.imaginary_blades] = False
        if np.any(np.abs(c[mask]) > tol):
            raise InvalidPointError(f"axis {axis!r} is not purely imaginary in the {self.kind} sphere")
        if abs(np.linalg.norm(c) - 1.0) > tol:
            raise InvalidPointError(f"axis {axis!r} is not a unit element")
        return axis

    def point(self, values: Sequence[float]) -> Multivector:
        """Variable-space element from its real coordinates (n+1 or 4 of them)."""
        values = np.asarray(values, dtype=float)
        if values.shape != (len(self.variable_blades),):
            raise InvalidPointError(
                f"{self.kind} point needs {len(self.variable_blades)} coordinates, got {values.size}")
        c = np.zeros(self.ctx.dim)
        c[self.variable_blades] = values
        return Multivector(self.ctx, c)

    def to_json(self) -> dict:
        return {"structure": self.kind, "n": self.ctx.n}


def paravector_structure(n: int) -> SliceStructure:
    return SliceStructure(PARAVECTOR, make_context(n))


def quaternion_structure() -> SliceStructure:
    return SliceStructure(QUATERNION, make_context(2))


def make_structure(kind: str, n: int | None = None) -> SliceStructure:
    if kind == QUATERNION:
        if n not in (None, 2):
            raise ConfigurationError("quaternion structure requires n = 2")
        return quaternion_structure()
    if kind == PARAVECTOR:
        if n is None:
            raise ConfigurationError("paravector structure requires n")
        return paravector_structure(n)
    raise ConfigurationError(f"unknown structure kind {kind!r}")


@dataclass(frozen=True)
class SlicePoint:
    """``u + v I`` with ``v >= 0`` and ``I`` a unit imaginary axis."""

    u: float
    v: float
    axis: Multivector

    def __post_init__(self):
        if self.v < 0:
            raise InvalidPointError("slice coordinate v must be non-negative")
        ctx = self.axis.ctx
        sq = ctx.mul_arrays(self.axis.coeffs, self.axis.coeffs)
        target = np.zeros(ctx.dim)
        target[0] = -1.0
        if abs(np.linalg.norm(self.axis.coeffs) - 1.0) > MEMBERSHIP_TOL or \
                np.max(np.abs(sq - target)) > MEMBERSHIP_TOL:
            raise InvalidPointError(f"axis {self.axis!r} is not a unit square root of -1")

    def to_json(self) -> dict:
        return {"u": float(self.u), "v": float(self.v), "axis": self.axis.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "SlicePoint":
        return cls(float(data["u"]), float(data["v"]), Multivector.from_json(data["axis"]))


def slice_embed(s: SliceStructure, p: SlicePoint) -> Multivector:
    s.check_axis(p.axis)
    return Multivector(s.ctx, p.v * p.axis.coeffs + np.eye(s.ctx.dim)[0] * p.u)


def slice_decompose(s: SliceStructure, x: Multivector) -> SlicePoint:
    """Write ``x = u + v I``; real points get the default axis ``e_1``."""
    if x.ctx is not s.ctx or not s.in_variable_space(x.coeffs):
        raise InvalidPointError(f"{x!r} is outside the {s.kind} variable space")
    u = float(x.coeffs[0])
    imag = x.coeffs.copy()
    imag[0] = 0.0
    v = float(np.linalg.norm(imag))
    if v == 0.0:
        return SlicePoint(u, 0.0, s.default_axis)
    return SlicePoint(u, v, Multivector(s.ctx, imag / v))


def decompose_arrays(s: SliceStructure, xs: np.ndarray):
    """Vectorised slice decomposition: returns ``(u, v, axes)`` for an ``(m, dim)`` array."""
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if not s.in_variable_space(xs):
        raise InvalidPointError(f"points outside the {s.kind} variable space")
    u = xs[:, 0].copy()
    imag = xs.copy()
    imag[:, 0] = 0.0
    v = np.linalg.norm(imag, axis=1)
    axes = np.zeros_like(imag)
    real = v == 0.0
    axes[~real] = imag[~real] / v[~real, None]
    axes[real, 1] = 1.0
    return u, v, axes


def sphere_sample_array(s: SliceStructure, count: int, seed) -> np.ndarray:
    """``(count, dim)`` array of isotropic unit axes (normalised Gaussians)."""
    if count < 1:
        raise UsageError("count must be at least 1")
    rng = np.random.default_rng(seed)
    k = len(s.imaginary_blades)
    g = rng.standard_normal((count, k))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    out = np.zeros((count, s.ctx.dim))
    out[:, s.imaginary_blades] = g
    return out


def sphere_sample(s: SliceStructure, count: int, seed) -> list[Multivector]:
    """Deterministic isotropic sample of ``count`` axes from the structure's sphere."""
    return [Multivector(s.ctx, row) for row in sphere_sample_array(s, count, seed)]


def ball_sample_array(s: SliceStructure, count: int, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Points of the variable space with ``|x| <= radius``, uniform in radius and direction."""
    k = len(s.variable_blades)
    g = rng.standard_normal((count, k))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.uniform(0.0, 1.0, count)
    out = np.zeros((count, s.ctx.dim))
    out[:, s.variable_blades] = g * r[:, None]
    return out


def embed_complex(axis: np.ndarray, z) -> np.ndarray:
    """Map complex numbers ``a + ib`` to ``a + b I`` as coefficient arrays."""
    z = np.asarray(z, dtype=complex)
    out = z.imag[..., None] * np.asarray(axis, dtype=float)
    out[..., 0] += z.real
    return out


def random_multivectors(ctx: CliffordContext, count: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((count, ctx.dim))


def as_array(xs: Iterable[Multivector] | np.ndarray) -> np.ndarray:
    if isinstance(xs, np.ndarray):
        return np.atleast_2d(xs)
    return np.array([x.coeffs for x in xs])
