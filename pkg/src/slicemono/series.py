"""Truncated power series ``f(x) = sum_k x^k a_k`` with Clifford coefficients.

Coefficients sit on the right of the powers of the variable. All calculus
here (slice derivative, *-product, conjugate, symmetrization, *-inverse,
extension of holomorphic functions, splitting) acts on the coefficient
arrays; evaluation goes through the commutative plane of the point.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.signal

from .clifford import (
    MEMBERSHIP_TOL,
    QUATERNION,
    CliffordContext,
    Multivector,
    SliceStructure,
    decompose_arrays,
    embed_complex,
    make_structure,
    mv_inverse,
)
from .errors import InvalidPointError, NotInvertibleError, UsageError, ZeroSetError

N_MAX = 512


class SliceSeries:
    """Immutable truncated series with ``degree + 1`` Multivector coefficients."""

    __slots__ = ("structure", "coeffs")

    def __init__(self, structure: SliceStructure, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] != structure.ctx.dim or arr.shape[0] < 1:
            raise UsageError(f"coefficients must have shape (N+1, {structure.ctx.dim}), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise UsageError("series coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "structure", structure)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SliceSeries is immutable")

    @property
    def ctx(self) -> CliffordContext:
        return self.structure.ctx

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def coefficient(self, k: int) -> Multivector:
        if k > self.degree:
            return Multivector.zero(self.ctx)
        return Multivector(self.ctx, self.coeffs[k])

    def __call__(self, x: Multivector) -> Multivector:
        return eval_series(self, x)

    def __repr__(self):
        return f"SliceSeries({self.structure.kind}, n={self.ctx.n}, degree={self.degree})"

    @classmethod
    def from_multivectors(cls, structure, coeffs):
        return cls(structure, [c.coeffs for c in coeffs])

    @classmethod
    def identity(cls, structure, degree: int = 1):
        c = np.zeros((max(degree, 1) + 1, structure.ctx.dim))
        c[1, 0] = 1.0
        return cls(structure, c)

    @classmethod
    def unit(cls, structure, degree: int = 0):
        c = np.zeros((degree + 1, structure.ctx.dim))
        c[0, 0] = 1.0
        return cls(structure, c)

    def padded(self, degree: int) -> np.ndarray:
        """Coefficient array zero-padded (or cut) to ``degree``."""
        out = np.zeros((degree + 1, self.ctx.dim))
        m = min(degree, self.degree) + 1
        out[:m] = self.coeffs[:m]
        return out

    def to_json(self) -> dict:
        return {
            "structure": self.structure.kind,
            "n": self.ctx.n,
            "degree": self.degree,
            "coefficients": self.coeffs.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "SliceSeries":
        try:
            structure = make_structure(data["structure"], int(data["n"]))
            coeffs = np.asarray(data["coefficients"], dtype=float)
            degree = int(data["degree"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed series JSON: {exc}") from exc
        if coeffs.ndim != 2 or coeffs.shape[0] != degree + 1:
            raise UsageError("series JSON degree does not match coefficient count")
        return cls(structure, coeffs)


@dataclass(frozen=True)
class ComplexSeries:
    """Ordinary power series ``sum_k c_k z^k`` with complex coefficients."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex).reshape(-1)
        if arr.size == 0 or not np.all(np.isfinite(arr)):
            raise UsageError("complex series needs finite coefficients")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return np.polyval(self.coeffs[::-1], np.asarray(z, dtype=complex))

    def to_json(self) -> dict:
        return {"degree": self.degree, "coefficients": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "ComplexSeries":
        try:
            pairs = np.asarray(data["coefficients"], dtype=float)
            degree = int(data["degree"])
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed complex series JSON: {exc}") from exc
        if pairs.ndim != 2 or pairs.shape != (degree + 1, 2):
            raise UsageError("complex series JSON needs degree+1 [re, im] pairs")
        return cls(pairs[:, 0] + 1j * pairs[:, 1])


# ---------------------------------------------------------------------------
# evaluation


def _horner(coeffs: np.ndarray, w: np.ndarray) -> np.ndarray:
    """``sum_k w^k coeffs[k]`` for complex ``w`` of shape (m,); returns (m, dim) complex."""
    acc = np.zeros((w.size, coeffs.shape[1]), dtype=complex)
    acc += coeffs[-1]
    for a in coeffs[-2::-1]:
        acc *= w[:, None]
        acc += a
    return acc


def eval_slice_arrays(f: SliceSeries, axis: np.ndarray, z) -> np.ndarray:
    """Evaluate at ``Re z + Im z * axis`` for complex ``z``; one axis for all points."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    s = _horner(f.coeffs, z)
    ctx = f.ctx
    return s.real + ctx.mul_arrays(np.broadcast_to(axis, s.shape), s.imag)


def eval_many(f: SliceSeries, xs: np.ndarray) -> np.ndarray:
    """Vectorised :func:`eval_series` over an ``(m, dim)`` array of points."""
    u, v, axes = decompose_arrays(f.structure, xs)
    s = _horner(f.coeffs, u + 1j * v)
    # x^k = Re(w^k) + Im(w^k) I, so f(x) = Re(S) + I Im(S)
    return s.real + f.ctx.mul_arrays(axes, s.imag)


def eval_series(f: SliceSeries, x: Multivector) -> Multivector:
    """``sum_k x^k a_k``, computed through the complex plane containing ``x``."""
    if x.ctx is not f.ctx:
        raise InvalidPointError("point and series live in different algebras")
    return Multivector(f.ctx, eval_many(f, x.coeffs[None, :])[0])


def representation_many(f: SliceSeries, axis: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Values at ``xs`` reconstructed from the slice of ``axis`` only."""
    u, v, axes_j = decompose_arrays(f.structure, xs)
    ctx = f.ctx
    axis = np.asarray(axis, dtype=float)
    f_plus = eval_slice_arrays(f, axis, u + 1j * v)
    f_minus = eval_slice_arrays(f, axis, u - 1j * v)
    ji = ctx.mul_arrays(axes_j, np.broadcast_to(axis, axes_j.shape))
    return 0.5 * (f_plus + f_minus) + 0.5 * ctx.mul_arrays(ji, f_minus - f_plus)


def eval_representation(f: SliceSeries, axis: Multivector, x: Multivector) -> Multivector:
    """``f(u+vJ) = (f(u+vI) + f(u-vI))/2 + JI (f(u-vI) - f(u+vI))/2``."""
    f.structure.check_axis(axis)
    if x.ctx is not f.ctx:
        raise InvalidPointError("point and series live in different algebras")
    return Multivector(f.ctx, representation_many(f, axis.coeffs, x.coeffs[None, :])[0])


# ---------------------------------------------------------------------------
# calculus on coefficients


def _same_structure(f: SliceSeries, g: SliceSeries):
    if f.structure != g.structure:
        raise UsageError(f"structure mismatch: {f.structure} vs {g.structure}")


def derivative(f: SliceSeries) -> SliceSeries:
    if f.degree == 0:
        return SliceSeries(f.structure, np.zeros((1, f.ctx.dim)))
    k = np.arange(1, f.degree + 1, dtype=float)
    return SliceSeries(f.structure, f.coeffs[1:] * k[:, None])


def star_coefficients(ctx: CliffordContext, a: np.ndarray, b: np.ndarray, degree: int) -> np.ndarray:
    """Cauchy product ``c_k = sum_j a_j b_{k-j}`` truncated at ``degree``."""
    dim = ctx.dim
    out = np.zeros((a.shape[0] + b.shape[0] - 1, dim))
    for p in range(dim):
        col = a[:, p]
        if not np.any(col):
            continue
        conv = scipy.signal.convolve(col[:, None], b, mode="full", method="direct")
        out[:, p ^ np.arange(dim)] += ctx.signs[p].astype(float) * conv
    return out[: degree + 1]


def star_product(f: SliceSeries, g: SliceSeries, n_max: int = N_MAX) -> SliceSeries:
    """Regular product ``f * g``; the result is truncated at ``min(N_f + N_g, n_max)``."""
    _same_structure(f, g)
    degree = min(f.degree + g.degree, n_max)
    return SliceSeries(f.structure, star_coefficients(f.ctx, f.coeffs, g.coeffs, degree))


def series_conjugate(f: SliceSeries) -> SliceSeries:
    return SliceSeries(f.structure, f.ctx.conj_arrays(f.coeffs))


def symmetrization(f: SliceSeries, n_max: int = N_MAX) -> SliceSeries:
    return star_product(f, series_conjugate(f), n_max)


def star_inverse_series(f: SliceSeries) -> SliceSeries:
    """Coefficients of ``f^{-*}`` up to ``deg f`` by the left recursion.

    ``b_0 = a_0^{-1}``, ``b_k = -a_0^{-1} sum_{j=1}^k a_j b_{k-j}``.
    """
    ctx = f.ctx
    a0_inv = mv_inverse(f.coefficient(0)).coeffs
    lmats = ctx.left_matrices(f.coeffs)
    linv = ctx.left_matrices(a0_inv)
    b = np.zeros_like(f.coeffs)
    b[0] = a0_inv
    for k in range(1, f.degree + 1):
        acc = np.einsum("jab,jb->a", lmats[1 : k + 1], b[k - 1 :: -1])
        b[k] = -linv @ acc
    return SliceSeries(f.structure, b)


def star_inverse_eval(f: SliceSeries, x: Multivector, n_max: int = N_MAX) -> Multivector:
    """Pointwise ``f^s(x)^{-1} f^c(x)``."""
    fs = eval_series(symmetrization(f, n_max), x)
    fc = eval_series(series_conjugate(f), x)
    scale = 1.0 + float(np.sum(np.abs(f.coeffs)))
    if np.linalg.norm(fs.coeffs) <= 1e-14 * scale * scale:
        raise ZeroSetError(f"{x!r} is a zero of the symmetrization")
    try:
        inv = mv_inverse(fs)
    except NotInvertibleError as exc:
        raise ZeroSetError(f"symmetrization is not invertible at {x!r}") from exc
    return inv * fc


def ext(F: ComplexSeries, axis: Multivector, s: SliceStructure) -> SliceSeries:
    """Slice extension of a holomorphic series: ``c_k -> Re c_k + Im c_k * I``.

    Values on one slice determine the whole function, so this is the only
    regular extension; nothing numerical checks that uniqueness.
    """
    s.check_axis(axis)
    return SliceSeries(s, embed_complex(axis.coeffs, F.coeffs))


def divide_by_variable(f: SliceSeries) -> SliceSeries:
    """``g`` with ``f = x g``, which needs ``a_0 = 0``."""
    if np.max(np.abs(f.coeffs[0])) > MEMBERSHIP_TOL:
        raise UsageError("divide_by_variable needs a vanishing constant term")
    if f.degree == 0:
        return SliceSeries(f.structure, np.zeros((1, f.ctx.dim)))
    return SliceSeries(f.structure, f.coeffs[1:])


def ratio_series(f: SliceSeries, n_max: int = N_MAX) -> SliceSeries:
    """Series of ``x f'(x) * f^{-*}(x)``, built as ``f' * g^{-*}`` with ``f = x g``.

    Truncated at ``deg f - 1``: up to that degree every coefficient agrees
    with the untruncated function.
    """
    g = divide_by_variable(f)
    prod = star_product(derivative(f), star_inverse_series(g), n_max)
    return SliceSeries(f.structure, prod.coeffs[: max(f.degree, 1)])


def ratio_eval(f: SliceSeries, x: Multivector, n_max: int = N_MAX) -> Multivector:
    return eval_series(ratio_series(f, n_max), x)


# ---------------------------------------------------------------------------
# splitting


@dataclass(frozen=True)
class SplittingResult:
    """``f_I(z) = sum_A F_A(z) I_A`` over the module basis built from a completion of ``I``.

    ``components`` is keyed by index tuples ``A`` drawn from ``(2, ..., n)``;
    the empty tuple is the scalar component. In the quaternion case the
    keys are ``()`` and ``(2,)`` and ``f_I = F + G K`` with ``K`` the single
    completion element.
    """

    axis: Multivector
    completion: tuple
    module_basis: dict
    components: dict
    _matrix: np.ndarray = field(repr=False, default=None)

    @property
    def F(self) -> ComplexSeries:
        return self.components[()]

    @property
    def G(self) -> ComplexSeries:
        return self.components[(2,)]

    def reconstruct(self, z) -> np.ndarray:
        """``sum_A F_A(z) I_A`` as an ``(m, dim)`` coefficient array."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        ctx = self.axis.ctx
        out = np.zeros((z.size, ctx.dim))
        for key, basis in self.module_basis.items():
            vals = embed_complex(self.axis.coeffs, self.components[key](z))
            out += ctx.mul_arrays(vals, np.broadcast_to(basis.coeffs, vals.shape))
        return out


def completion_basis(s: SliceStructure, axis: Multivector) -> list[Multivector]:
    """Orthonormal completion of ``axis`` inside the sphere's ambient space.

    Gram-Schmidt over ``[axis] + ambient blades``, skipping the ambient blade
    most aligned with ``axis`` (lowest index on ties).
    """
    s.check_axis(axis)
    ctx = s.ctx
    blades = list(s.imaginary_blades)
    overlaps = np.abs(axis.coeffs[blades])
    skip = int(np.argmax(overlaps))
    vecs = [axis.coeffs.copy()]
    for i, m in enumerate(blades):
        if i == skip:
            continue
        e = np.zeros(ctx.dim)
        e[m] = 1.0
        vecs.append(e)
    ortho = []
    for v in vecs:
        w = v.copy()
        for q in ortho:
            w -= np.dot(q, w) * q
        nrm = np.linalg.norm(w)
        assert nrm > 1e-8, "Gram-Schmidt breakdown on a valid axis"
        ortho.append(w / nrm)
    count = 1 if s.kind == QUATERNION else s.n - 1
    return [Multivector(ctx, q) for q in ortho[1 : 1 + count]]


def splitting(f: SliceSeries, axis: Multivector) -> SplittingResult:
    """Split the restriction of ``f`` to the slice of ``axis`` into holomorphic components."""
    s = f.structure
    ctx = f.ctx
    completion = completion_basis(s, axis)
    labels = list(range(2, len(completion) + 2))
    basis = {}
    for mask in range(1 << len(completion)):
        key = tuple(labels[i] for i in range(len(completion)) if mask >> i & 1)
        prod = Multivector.scalar(ctx)
        for i in range(len(completion)):
            if mask >> i & 1:
                prod = prod * completion[i]
        basis[key] = prod
    cols = []
    for prod in basis.values():
        cols.append(prod.coeffs)
        cols.append(ctx.mul_arrays(axis.coeffs, prod.coeffs))
    matrix = np.array(cols).T
    sol = np.linalg.solve(matrix, f.coeffs.T)
    components = {}
    for idx, key in enumerate(basis):
        components[key] = ComplexSeries(sol[2 * idx] + 1j * sol[2 * idx + 1])
    return SplittingResult(axis, tuple(completion), basis, components, matrix)


def complex_restriction(f: SliceSeries, axis: Multivector, tol: float = MEMBERSHIP_TOL) -> ComplexSeries:
    """Complex coefficients of ``f`` on the slice of ``axis``; needs all ``a_k`` in ``C_I``."""
    a = f.coeffs
    re = a[:, 0]
    im = a @ axis.coeffs
    resid = a - embed_complex(axis.coeffs, re + 1j * im)
    if np.max(np.abs(resid)) > tol * max(1.0, float(np.max(np.abs(a)))):
        raise UsageError("series coefficients do not lie in the slice of the given axis")
    return ComplexSeries(re + 1j * im)
