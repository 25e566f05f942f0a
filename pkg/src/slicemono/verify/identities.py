"""Identity checks: the general modulus identity, the convex combination
identity, sphere extrema, representation, splitting and *-inverse round trips."""
from __future__ import annotations

import numpy as np

from ..clifford import (
    QUATERNION,
    Multivector,
    SliceStructure,
    embed_complex,
    make_context,
    paravector_structure,
    sphere_sample_array,
)
from ..errors import PreconditionError
from ..series import (
    SliceSeries,
    eval_many,
    eval_slice_arrays,
    representation_many,
    splitting,
    star_coefficients,
    star_inverse_eval,
    star_inverse_series,
)
from .report import CheckReport, relative_residual

CROSS_TOL = 1e-12


def _slice_coords(rng, count, radius=0.9):
    """``(u, v)`` pairs with ``v >= 0`` and ``u^2 + v^2 <= radius^2``."""
    rho = radius * np.sqrt(rng.uniform(0.0, 1.0, count))
    phi = rng.uniform(0.0, np.pi, count)
    return rho * np.cos(phi), rho * np.sin(phi)


def _grid(s: SliceStructure, axis, points, axes, seed):
    """Sample ``points`` slice coordinates and ``axes`` sphere elements; return flat arrays."""
    rng = np.random.default_rng(seed)
    u, v = _slice_coords(rng, points)
    js = sphere_sample_array(s, axes, rng)
    uu = np.repeat(u, axes)
    vv = np.repeat(v, axes)
    jj = np.tile(js, (points, 1))
    return uu, vv, jj


def _wedge(ctx, a, b):
    return 0.5 * (ctx.mul_arrays(a, b) - ctx.mul_arrays(b, a))


def _modulus_terms(f: SliceSeries, axis: np.ndarray, uu, vv, jj):
    """Pieces of the modulus identity at ``x = u + vJ`` against the slice of ``I = axis``."""
    ctx = f.ctx
    m = uu.size
    ii = np.broadcast_to(axis, (m, ctx.dim))
    xs = embed_complex(np.zeros(ctx.dim), uu + 0j) + vv[:, None] * jj
    fx = eval_many(f, xs)
    fy = eval_slice_arrays(f, axis, uu + 1j * vv)
    fyb = eval_slice_arrays(f, axis, uu - 1j * vv)
    ij = jj @ axis
    wedge = _wedge(ctx, ii, jj)
    p = ctx.mul_arrays(fy, ctx.conj_arrays(fyb))
    q = ctx.mul_arrays(fyb, ctx.conj_arrays(fy))
    cross = np.einsum("mi,mi->m", p - q, wedge)
    lhs = np.einsum("mi,mi->m", fx, fx)
    convex = 0.5 * (1 + ij) * np.einsum("mi,mi->m", fy, fy) + 0.5 * (1 - ij) * np.einsum("mi,mi->m", fyb, fyb)
    return dict(xs=xs, fx=fx, fy=fy, fyb=fyb, lhs=lhs, convex=convex, cross=cross, p=p, wedge=wedge, ij=ij)


def check_identity_general(f: SliceSeries, axis: Multivector, points: int = 50, axes: int = 20,
                           seed=0, tolerance: float = 1e-9, name: str = "identity_general") -> CheckReport:
    """Modulus identity with cross term, valid for every series.

    ``|f(x)|^2 = (1+<I,J>)/2 |f(y)|^2 + (1-<I,J>)/2 |f(ybar)|^2
    - 1/2 <f(y) conj f(ybar) - f(ybar) conj f(y), I ^ J>``.
    For quaternions the cross term is also recomputed as
    ``<Im(f(y) conj f(ybar)), I ^ J>`` and compared.
    """
    s = f.structure
    s.check_axis(axis)
    uu, vv, jj = _grid(s, axis.coeffs, points, axes, seed)
    t = _modulus_terms(f, axis.coeffs, uu, vv, jj)
    rhs = t["convex"] - 0.5 * t["cross"]
    res = relative_residual(t["lhs"], rhs)
    worst = int(np.argmax(res))
    witness = {"point": t["xs"][worst], "J": jj[worst], "I": axis.coeffs}
    max_res = float(res[worst])
    if s.kind == QUATERNION:
        im = t["p"].copy()
        im[:, 0] = 0.0
        im_form = np.einsum("mi,mi->m", im, t["wedge"])
        form_res = relative_residual(im_form, 0.5 * t["cross"])
        witness["im_form_residual"] = float(form_res.max())
        # the two cross-term forms must agree to 1e-12; rescaled into this report's band
        max_res = max(max_res, float(form_res.max()) * tolerance / CROSS_TOL)
    return CheckReport(name, uu.size, max_res, tolerance, witness)


def slice_preserving_residual(f: SliceSeries, axis: Multivector, rotation: Multivector | None = None) -> float:
    """How far the coefficients are from ``C_I`` (or from ``C_I u`` when ``rotation`` is given)."""
    ctx = f.ctx
    a = f.coeffs
    if rotation is not None:
        a = ctx.mul_arrays(a, np.broadcast_to(ctx.conj_arrays(rotation.coeffs), a.shape))
    proj = embed_complex(axis.coeffs, a[:, 0] + 1j * (a @ axis.coeffs))
    return float(np.max(np.abs(a - proj)) / max(1.0, float(np.max(np.abs(a)))))


def _require_slice_preserving(f, axis, rotation):
    if rotation is not None and f.structure.kind != QUATERNION:
        raise PreconditionError("rotated slice preservation is a quaternionic notion")
    if slice_preserving_residual(f, axis, rotation) > CROSS_TOL:
        raise PreconditionError("series coefficients do not preserve the slice of the given axis")


def check_convex_combination(f: SliceSeries, axis: Multivector, points: int = 50, axes: int = 20, seed=0,
                             rotation: Multivector | None = None, tolerance: float = 1e-9,
                             name: str = "convex_combination") -> CheckReport:
    """Convex combination identity for series preserving ``C_I`` (or ``C_I u``).

    The cross term of the general identity must vanish to ``1e-12``; it is
    folded into the residual after rescaling to ``tolerance``.
    """
    f.structure.check_axis(axis)
    _require_slice_preserving(f, axis, rotation)
    uu, vv, jj = _grid(f.structure, axis.coeffs, points, axes, seed)
    t = _modulus_terms(f, axis.coeffs, uu, vv, jj)
    res = relative_residual(t["lhs"], t["convex"])
    scale = 1.0 + np.linalg.norm(t["fy"], axis=1) * np.linalg.norm(t["fyb"], axis=1)
    cross = np.abs(t["cross"]) / scale
    worst = int(np.argmax(res))
    witness = {"point": t["xs"][worst], "J": jj[worst], "I": axis.coeffs, "cross_term_max": float(cross.max())}
    max_res = max(float(res.max()), float(cross.max()) * tolerance / CROSS_TOL)
    return CheckReport(name, uu.size, max_res, tolerance, witness)


def check_affine_in_inner(f: SliceSeries, axis: Multivector, points: int = 20, axes: int = 64, seed=0,
                          rotation: Multivector | None = None, tolerance: float = 1e-9,
                          name: str = "affine_in_inner_product") -> CheckReport:
    """For fixed ``(u, v)``, ``|f(u+vJ)|^2`` is affine in ``<I,J>``: least-squares fit residual."""
    f.structure.check_axis(axis)
    _require_slice_preserving(f, axis, rotation)
    uu, vv, jj = _grid(f.structure, axis.coeffs, points, axes, seed)
    t = _modulus_terms(f, axis.coeffs, uu, vv, jj)
    worst, worst_idx = 0.0, 0
    for p in range(points):
        sl = slice(p * axes, (p + 1) * axes)
        x = t["ij"][sl]
        y = t["lhs"][sl]
        design = np.column_stack([np.ones_like(x), x])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        r = float(np.max(np.abs(design @ coef - y)) / (1.0 + np.max(np.abs(y))))
        if r > worst:
            worst, worst_idx = r, p
    witness = {"u": float(uu[worst_idx * axes]), "v": float(vv[worst_idx * axes]), "I": axis.coeffs}
    return CheckReport(name, points * axes, worst, tolerance, witness)


def sphere_extrema_check(f: SliceSeries, axis: Multivector, u: float, v: float, axis_samples: int = 256,
                         seed=0, rotation: Multivector | None = None, tolerance: float = 1e-9,
                         name: str = "sphere_extrema") -> CheckReport:
    """Max and min of ``|f|`` over the sphere ``u + v S`` sit at ``u +- vI``.

    The sampled axes always include ``I`` and ``-I`` so the endpoints are hit.
    """
    s = f.structure
    s.check_axis(axis)
    _require_slice_preserving(f, axis, rotation)
    js = np.vstack([axis.coeffs, -axis.coeffs, sphere_sample_array(s, axis_samples, seed)])
    xs = v * js
    xs[:, 0] += u
    vals = np.linalg.norm(eval_many(f, xs), axis=1)
    ends = np.linalg.norm(eval_slice_arrays(f, axis.coeffs, np.array([u + 1j * v, u - 1j * v])), axis=1)
    hi, lo = ends.max(), ends.min()
    over = max(0.0, vals.max() - hi) / (1 + hi)
    under = max(0.0, lo - vals.min()) / (1 + lo)
    res = max(abs(vals.max() - hi) / (1 + hi), abs(vals.min() - lo) / (1 + lo), over, under)
    witness = {"u": u, "v": v, "endpoint_max": hi, "endpoint_min": lo,
               "sampled_max": float(vals.max()), "sampled_min": float(vals.min()),
               "constant_on_sphere": bool(vals.max() - vals.min() <= 1e-12 * (1 + hi))}
    return CheckReport(name, js.shape[0], float(res), tolerance, witness)


def check_representation(series_list, axis: Multivector, points: int = 50, seed=0,
                         tolerance: float = 1e-10, name: str = "representation_formula") -> CheckReport:
    """``eval_representation`` against direct evaluation on random ball points."""
    from ..clifford import ball_sample_array

    rng = np.random.default_rng(seed)
    worst, witness, total = 0.0, {}, 0
    for idx, f in enumerate(series_list):
        xs = ball_sample_array(f.structure, points, 0.9, rng)
        direct = eval_many(f, xs)
        rep = representation_many(f, axis.coeffs, xs)
        res = relative_residual(direct, rep)
        total += points
        if res.max() > worst:
            worst = float(res.max())
            witness = {"series": idx, "point": xs[int(np.argmax(res))]}
    return CheckReport(name, total, worst, tolerance, witness)


def check_splitting(series_list, axis: Multivector, points: int = 50, seed=0, tolerance: float = 1e-10,
                    name: str = "splitting_round_trip") -> CheckReport:
    """Reconstruction ``sum_A F_A(z) I_A`` against ``f`` on slice points."""
    rng = np.random.default_rng(seed)
    worst, witness, total = 0.0, {}, 0
    for idx, f in enumerate(series_list):
        split = splitting(f, axis)
        rho = 0.9 * np.sqrt(rng.uniform(0, 1, points))
        z = rho * np.exp(2j * np.pi * rng.uniform(0, 1, points))
        direct = eval_slice_arrays(f, axis.coeffs, z)
        res = relative_residual(direct, split.reconstruct(z))
        total += points
        if res.max() > worst:
            worst = float(res.max())
            witness = {"series": idx, "z": complex(z[int(np.argmax(res))])}
    return CheckReport(name, total, worst, tolerance, witness)


def check_star_inverse(series_list, tolerance: float = 1e-10, name: str = "star_inverse_two_sided") -> CheckReport:
    """Both ``f * f^{-*}`` and ``f^{-*} * f`` equal the unit series up to ``deg f``."""
    worst, witness = 0.0, {}
    for idx, f in enumerate(series_list):
        inv = star_inverse_series(f)
        unit = np.zeros_like(f.coeffs)
        unit[0, 0] = 1.0
        for side, (a, b) in (("right", (f, inv)), ("left", (inv, f))):
            c = star_coefficients(f.ctx, a.coeffs, b.coeffs, f.degree)
            r = float(np.max(np.abs(c - unit)))
            if r > worst:
                worst, witness = r, {"series": idx, "side": side}
    return CheckReport(name, len(series_list), worst, tolerance, witness)


def check_inverse_routes(series_list, points: int = 20, seed=0, radius: float = 0.9, tolerance: float = 1e-8,
                         name: str = "star_inverse_routes") -> CheckReport:
    """Pointwise ``f^s(x)^{-1} f^c(x)`` against evaluation of the coefficient recursion."""
    from ..clifford import ball_sample_array

    rng = np.random.default_rng(seed)
    worst, witness, total = 0.0, {}, 0
    for idx, f in enumerate(series_list):
        inv = star_inverse_series(f)
        xs = ball_sample_array(f.structure, points, radius, rng)
        series_route = eval_many(inv, xs)
        for m, x in enumerate(xs):
            pt = Multivector(f.ctx, x)
            r = float(relative_residual(star_inverse_eval(f, pt).coeffs[None], series_route[m:m + 1])[0])
            total += 1
            if r > worst:
                worst, witness = r, {"series": idx, "point": x}
    return CheckReport(name, total, worst, tolerance, witness)


def check_algebra_axioms(n: int, trials: int = 1000, seed=0, tolerance: float = 1e-12,
                         name: str | None = None) -> CheckReport:
    """Associativity, anticommutation, conjugate anti-automorphism and the inner product symmetry."""
    ctx = make_context(n)
    rng = np.random.default_rng(seed)
    a, b, c = (rng.standard_normal((trials, ctx.dim)) for _ in range(3))
    assoc = ctx.mul_arrays(ctx.mul_arrays(a, b), c) - ctx.mul_arrays(a, ctx.mul_arrays(b, c))
    anti = ctx.conj_arrays(ctx.mul_arrays(a, b)) - ctx.mul_arrays(ctx.conj_arrays(b), ctx.conj_arrays(a))
    inner_sym = np.einsum("mi,mi->m", a, b) - np.einsum("mi,mi->m", ctx.conj_arrays(a), ctx.conj_arrays(b))
    scale = 1.0 + np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1) * np.linalg.norm(c, axis=1)
    res = max(float(np.max(np.linalg.norm(assoc, axis=1) / scale)),
              float(np.max(np.linalg.norm(anti, axis=1) / scale)),
              float(np.max(np.abs(inner_sym) / scale)))
    anticomm = 0.0
    for i in range(n):
        for j in range(n):
            ei = np.zeros(ctx.dim)
            ej = np.zeros(ctx.dim)
            ei[1 << i] = 1.0
            ej[1 << j] = 1.0
            lhs = ctx.mul_arrays(ei, ej) + ctx.mul_arrays(ej, ei)
            target = np.zeros(ctx.dim)
            target[0] = -2.0 if i == j else 0.0
            anticomm = max(anticomm, float(np.max(np.abs(lhs - target))))
    return CheckReport(name or f"algebra_axioms_n{n}", trials, max(res, anticomm), tolerance, {"n": n})


def check_norm_multiplicativity(n: int, trials: int = 1000, seed=0, tolerance: float = 1e-12,
                                name: str | None = None) -> CheckReport:
    """``|ab| = |ba| = |a||b|`` whenever one factor is a paravector."""
    s = paravector_structure(n)
    ctx = s.ctx
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((trials, ctx.dim))
    p = np.zeros((trials, ctx.dim))
    p[:, s.variable_blades] = rng.standard_normal((trials, len(s.variable_blades)))
    target = np.linalg.norm(a, axis=1) * np.linalg.norm(p, axis=1)
    res = 0.0
    for prod in (ctx.mul_arrays(a, p), ctx.mul_arrays(p, a)):
        res = max(res, float(np.max(relative_residual(np.linalg.norm(prod, axis=1), target))))
    return CheckReport(name or f"norm_multiplicativity_n{n}", trials, res, tolerance, {"n": n})
