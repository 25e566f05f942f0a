"""Splitting a quaternionic series and spotting ``f = g u``.

On the slice through ``I`` every series splits as ``f_I = F + G K`` with
``F, G`` holomorphic in one complex variable. Multiplying a slice-preserving
``g`` by a unit ``u`` on the right ties the two pieces together
(``F = lambda G``), which is what the detector looks for.

Run with ``python demos/03_splitting_and_rotations.py``.
"""
import numpy as np

from slicemono import ComplexSeries, SliceSeries, ext, make_structure, splitting
from slicemono.clifford import Multivector, parse_multivector
from slicemono.verify.identities import check_convex_combination
from slicemono.verify.rotation import detect_rotated_slice_preserving

H = make_structure("quaternion")
rng = np.random.default_rng(11)
I = parse_multivector(H.ctx, "0.6e1+0.8e2")

# g is slice preserving: complex coefficients along I.
g = ext(ComplexSeries([0, 1, 0.3 - 0.2j, 0.05j]), I, H)
u = Multivector(H.ctx, rng.standard_normal(4))
u = Multivector(H.ctx, u.coeffs / np.linalg.norm(u.coeffs))
f = SliceSeries(H, H.ctx.mul_arrays(g.coeffs, np.broadcast_to(u.coeffs, g.coeffs.shape)))

sp = splitting(f, I)
print("F coefficients:", np.round(sp.F.coeffs, 4))
print("G coefficients:", np.round(sp.G.coeffs, 4))

fit = detect_rotated_slice_preserving(f, I)
print("\nlambda  =", np.round(fit.lam, 6))
# u is only fixed up to a unit of C_I, which g absorbs, so it need not equal the planted one
print("planted u =", u)
print("found u   =", fit.u)
print("reconstruction residual", fit.residual)

# For such f, |f|^2 on a sphere is a convex combination of the two poles.
rep = check_convex_combination(f, I, points=50, axes=20, seed=1, rotation=fit.u)
print("\nconvex-combination residual", rep.max_residual, "pass" if rep.passed else "FAIL")

# A generic series is not of this form.
h = SliceSeries(H, rng.standard_normal((6, 4)))
print("generic series ->", detect_rotated_slice_preserving(h, I))
