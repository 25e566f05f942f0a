"""The quaternionic Koebe function and the one-quarter covering.

``k(x) = x (1 - x)^{-*2}`` has real coefficients, so it maps every slice
into itself. We look at how close its image gets to the origin on spheres
of growing radius, and count preimages of a point inside and outside the
quarter disc.

Run with ``python demos/02_koebe_function.py``.
"""
import numpy as np

from slicemono import eval_series, make_structure, norm, ratio_eval
from slicemono.clifford import Multivector
from slicemono.verify.bounds import growth_bounds
from slicemono.verify.catalog import seed_catalog
from slicemono.verify.covering import boundary_minimum, degree_for_radius, winding_count

H = make_structure("quaternion")
koebe = next(e for e in seed_catalog(H, 512) if e.name == "koebe")
k = koebe.series
print(koebe.name, "degree", k.degree)

# Growth: |k(x)| sits between the two bounds and touches them on the real axis.
for r in (0.3, 0.6, 0.9):
    lo, hi = growth_bounds(r)
    left = norm(eval_series(k, Multivector.scalar(H.ctx, -r)))
    right = norm(eval_series(k, Multivector.scalar(H.ctx, r)))
    print(f"r={r}:  {lo:.6f} = |k(-r)| {left:.6f}    |k(r)| {right:.6f} = {hi:.6f}")

print("|x k'(x) / k(x)| at 1/2 =", norm(ratio_eval(k, Multivector.scalar(H.ctx, 0.5))))

# The minimum modulus on |x| = r creeps up towards 1/4 from below.
print("\n   r      min |k|      r/(1+r)^2")
for r in (0.5, 0.9, 0.99, 0.999):
    m, angle = boundary_minimum(koebe, r)
    print(f"{r:6}  {m:.12f}  {r / (1 + r) ** 2:.12f}   (attained at angle {angle:.6f})")

# Counting preimages on the slice through the argument principle.
rho = 0.999
c = koebe.realize(degree_for_radius(koebe.coeff_bound, rho)).coeffs[:, 0].astype(complex)
for w in (0.2, 0.24, -0.3):
    print(f"preimages of {w:+} in |z| < {rho}: {winding_count(c, complex(w), rho)}")
