"""A short walk through the Clifford algebra layer.

Run with ``python demos/01_algebra_tour.py``.
"""
import numpy as np

from slicemono import make_context, make_structure, mv_inverse, mv_mul, norm, parse_multivector, slice_decompose
from slicemono.clifford import Multivector

# Quaternions live inside R_2: i = e1, j = e2, k = e12.
H = make_structure("quaternion")
i, j = parse_multivector(H.ctx, "e1"), parse_multivector(H.ctx, "e2")
print("i j      =", mv_mul(i, j))
print("j i      =", mv_mul(j, i))
print("i i      =", mv_mul(i, i))

# The norm is multiplicative on quaternions ...
rng = np.random.default_rng(0)
a, b = (Multivector(H.ctx, rng.standard_normal(4)) for _ in range(2))
print("|ab| - |a||b| =", norm(mv_mul(a, b)) - norm(a) * norm(b))

# ... but not in R_3, where 1 + e123 is a zero divisor.
ctx = make_context(3)
p = parse_multivector(ctx, "1+e123")
q = parse_multivector(ctx, "1-e123")
print("(1+e123)(1-e123) =", mv_mul(p, q))
print("|p||q| =", norm(p) * norm(q))

try:
    mv_inverse(p)
except ArithmeticError as exc:
    print("1+e123 has no inverse:", exc)

# A paravector point splits as x = u + I v with I on the unit sphere.
P3 = make_structure("paravector", 3)
x = P3.point([0.3, 0.0, 0.4, 0.0])
sp = slice_decompose(P3, x)
print(f"x = {x!r}: u = {sp.u}, v = {sp.v:.3f}, I = {sp.axis!r}")
