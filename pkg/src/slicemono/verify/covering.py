"""Koebe one-quarter covering: boundary minima, argument-principle root counts,
and slice injectivity on rotated slices."""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from ..clifford import QUATERNION, Multivector, sphere_sample_array
from ..errors import NumericalFailure, PreconditionError
from ..series import SliceSeries, derivative, eval_many, eval_slice_arrays
from .catalog import SeedFunction
from .report import CheckReport, linear_tail, power_tail

WINDING_NODES = 4096
NON_INTEGER_TOL = 0.1
EXPANSION_TOL = 1e-10


def degree_for_radius(bound: float, r: float, power: int = 1, tol: float = EXPANSION_TOL) -> int:
    """Smallest degree whose tail ``sum_{k>N} C k^power r^k`` is below ``tol`` (``power`` 1 or 2)."""
    def tail(n):
        if power == 1:
            return linear_tail(bound, n, r)
        return power_tail(bound, power, n, r)

    lo, hi = 1, 16
    while tail(hi) > tol:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if tail(mid) <= tol:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _poly(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.polyval(c[::-1], z)


def boundary_minimum(seed: SeedFunction, r: float, nodes: int = WINDING_NODES) -> tuple[float, float]:
    """``min |f|`` over the sphere ``|q| = r``: returns ``(value, angle)``.

    By the sphere-extrema reduction the minimum over the whole 3-sphere is
    reached on the preserved slice, so only the circle ``|z| = r`` there is
    searched: a uniform angular grid (which contains ``pi``) refined by a
    bounded scalar minimisation around the best node.
    """
    degree = degree_for_radius(seed.coeff_bound, r)
    c = seed.slice_coefficients(degree)
    phi = 2 * np.pi * np.arange(nodes) / nodes
    vals = np.abs(_poly(c, r * np.exp(1j * phi)))
    j = int(np.argmin(vals))
    h = 2 * np.pi / nodes
    res = minimize_scalar(lambda t: abs(_poly(c, np.array([r * np.exp(1j * t)]))[0]),
                          bounds=(phi[j] - h, phi[j] + h), method="bounded", options={"xatol": 1e-12})
    if res.fun < vals[j]:
        return float(res.fun), float(res.x % (2 * np.pi))
    return float(vals[j]), float(phi[j])


def winding_count(c: np.ndarray, w: complex, rho: float, nodes: int = WINDING_NODES,
                  dc: np.ndarray | None = None) -> int:
    """Roots of ``F(z) - w`` in ``|z| < rho`` by summed argument increments.

    When derivative coefficients ``dc`` are supplied the trapezoidal value of
    ``(1/2 pi i) ∮ F'/(F - w)`` is computed too; if it strays more than
    0.1 from an integer, or disagrees with the increment count, the contour
    is under-resolved and :class:`NumericalFailure` is raised.
    """
    z = rho * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    vals = _poly(c, z) - w
    if np.any(vals == 0):
        raise NumericalFailure("target value attained on the contour")
    steps = np.angle(np.roll(vals, -1) / vals)
    count = float(np.sum(steps) / (2 * np.pi))
    k = int(round(count))
    if dc is not None:
        trap = complex(np.mean(z * _poly(dc, z) / vals))
        if abs(trap.real - round(trap.real)) > NON_INTEGER_TOL or abs(trap.imag) > NON_INTEGER_TOL \
                or int(round(trap.real)) != k:
            raise NumericalFailure(f"winding integral {trap:.4f} is not the integer {k}; resample the contour")
    return k


def check_koebe_quarter(seed: SeedFunction, radii=(0.5, 0.7, 0.9, 0.95, 0.99, 0.999),
                        targets=(0.2, 0.1j, -0.2, 0.15 + 0.15j), controls=(-0.3,), rho: float = 0.999,
                        axes: int = 16, rng_seed=0, tolerance: float = 1e-8, name: str | None = None) -> CheckReport:
    """Covering of ``B(0, 1/4)`` for a normalized slice-preserving quaternionic function.

    (a) boundary minima on ``|q| = r`` stay above ``r/(1+r)^2`` and increase
    with ``r``; a few off-slice spheres confirm the slice carries the minimum;
    (b) each target with ``|w| < 1/4`` has at least one preimage in
    ``|z| < rho`` on the preserved slice. Control targets are only reported.
    """
    s = seed.structure
    if s.kind != QUATERNION:
        raise PreconditionError("the covering theorem is quaternionic")
    if not seed.normalized:
        raise PreconditionError(f"{seed.label()} is not normalized")
    worst = 0.0
    minima = []
    for r in radii:
        value, angle = boundary_minimum(seed, r)
        minima.append({"r": r, "min": value, "angle": angle, "lower_bound": r / (1 + r) ** 2})
        worst = max(worst, r / (1 + r) ** 2 - value)
    for a, b in zip(minima, minima[1:]):
        worst = max(worst, a["min"] - b["min"])

    # off-slice spheres never undercut the slice minimum (moderate radius keeps the series short)
    rng = np.random.default_rng(rng_seed)
    r_probe = min(0.9, max(radii))
    probe_deg = degree_for_radius(seed.coeff_bound, r_probe)
    f = seed.realize(probe_deg)
    js = sphere_sample_array(s, axes, rng)
    phi = 2 * np.pi * rng.uniform(0, 1, axes)
    xs = r_probe * np.sin(phi)[:, None] * js
    xs[:, 0] = r_probe * np.cos(phi)
    probe_min = float(np.min(np.linalg.norm(eval_many(f, xs), axis=1)))
    slice_min = boundary_minimum(seed, r_probe)[0]
    worst = max(worst, slice_min - probe_min)

    degree = max(degree_for_radius(seed.coeff_bound, rho),
                 degree_for_radius(seed.coeff_bound, rho, power=2) + 1)
    c = seed.slice_coefficients(degree)
    dc = c[1:] * np.arange(1, c.size)
    counts = {}
    for w in targets:
        k = winding_count(c, complex(w), rho, dc=dc)
        counts[str(complex(w))] = k
        if abs(w) < 0.25 and k < 1:
            worst = max(worst, 1.0)
    control_counts = {str(complex(w)): winding_count(c, complex(w), rho, dc=dc) for w in controls}
    witness = {"function": seed.label(), "minima": minima, "r0_estimate": minima[-1]["min"],
               "target_counts": counts, "control_counts": control_counts, "contour_radius": rho,
               "probe_min_off_slice": probe_min}
    samples = len(radii) * WINDING_NODES + axes + (len(targets) + len(controls)) * WINDING_NODES
    return CheckReport(name or f"koebe_quarter[{seed.label()}]", samples, float(max(worst, 0.0)), tolerance, witness)


def check_slice_injectivity(f: SliceSeries, axis: Multivector, grid_size: int = 64, radius: float = 0.9,
                            candidates: int = 20, name: str | None = None) -> CheckReport:
    """Grid search for collisions of ``f`` on the slice of ``axis``.

    Reports the minimum difference quotient ``c`` over distinct grid points.
    Well-separated pairs with the smallest quotients are refined by
    Gauss-Newton; a refined pair that still collides and stays apart is a
    genuine collision. Passes iff ``c > 0`` and no collision is found.
    """
    s = f.structure
    s.check_axis(axis)
    t = np.linspace(-radius, radius, grid_size)
    h = t[1] - t[0]
    gx, gy = np.meshgrid(t, t)
    z = (gx + 1j * gy).ravel()
    z = z[np.abs(z) <= radius]
    vals = eval_slice_arrays(f, axis.coeffs, z)
    m = z.size
    best_ratio = np.inf
    best_pair = (0, 1)
    far = []
    chunk = 256
    for start in range(0, m, chunk):
        stop = min(m, start + chunk)
        dz = np.abs(z[start:stop, None] - z[None, :])
        dv = np.linalg.norm(vals[start:stop, None, :] - vals[None, :, :], axis=2)
        idx = np.arange(start, stop)
        dz[idx - start, idx] = 1.0
        ratio = dv / dz
        ratio[idx - start, idx] = np.inf
        i, j = np.unravel_index(np.argmin(ratio), ratio.shape)
        if ratio[i, j] < best_ratio:
            best_ratio = float(ratio[i, j])
            best_pair = (start + i, j)
        ratio[dz < 3 * h] = np.inf
        flat = np.argsort(ratio, axis=None)[:candidates]
        for q in flat:
            i, j = np.unravel_index(q, ratio.shape)
            far.append((float(ratio[i, j]), start + i, j))
    far.sort()
    fd = derivative(f)
    collision = None
    for _, i, j in far[:candidates]:
        hit = _refine_collision(f, fd, axis, z[i], z[j], h, radius)
        if hit is not None:
            collision = hit
            break
    residual = 1.0 if (collision is not None or not best_ratio > 0) else 0.0
    witness = {"c": best_ratio, "closest_pair": [complex(z[best_pair[0]]), complex(z[best_pair[1]])],
               "collision": collision, "grid_points": int(m)}
    return CheckReport(name or "slice_injectivity", m * (m - 1) // 2, residual, 0.0, witness)


def _refine_collision(f, fd, axis, z0, w, h, radius, iters: int = 60):
    """Gauss-Newton for ``f(z) = f(w)`` along the slice, starting at ``z0``."""
    target = eval_slice_arrays(f, axis.coeffs, np.array([w]))[0]
    ctx = f.ctx
    z = complex(z0)
    for _ in range(iters):
        val = eval_slice_arrays(f, axis.coeffs, np.array([z]))[0]
        r = val - target
        d = eval_slice_arrays(fd, axis.coeffs, np.array([z]))[0]
        jac = np.column_stack([d, ctx.mul_arrays(axis.coeffs, d)])
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        z = z + complex(step[0], step[1])
        if abs(z) > 1.0:
            return None
        if np.linalg.norm(step) < 1e-15:
            break
    val = eval_slice_arrays(f, axis.coeffs, np.array([z]))[0]
    if np.linalg.norm(val - target) <= 1e-10 * (1 + np.linalg.norm(target)) and abs(z - w) > 2 * h \
            and abs(z) <= radius + h:
        return [complex(z), complex(w)]
    return None
