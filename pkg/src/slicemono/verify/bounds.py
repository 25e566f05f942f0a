"""Growth, distortion and ratio bounds for normalized slice-preserving functions."""
from __future__ import annotations

import numpy as np

from ..clifford import ball_sample_array, embed_complex
from ..errors import PreconditionError
from ..series import derivative, eval_many, ratio_series
from .catalog import SeedFunction, is_koebe_rotation
from .report import CheckReport

TAIL_TARGET = 1e-12
EQUALITY_TOL = 1e-8


def growth_bounds(r):
    r = np.asarray(r, dtype=float)
    return r / (1 + r) ** 2, r / (1 - r) ** 2


def distortion_bounds(r):
    r = np.asarray(r, dtype=float)
    return (1 - r) / (1 + r) ** 3, (1 + r) / (1 - r) ** 3


def ratio_bounds(r):
    r = np.asarray(r, dtype=float)
    return (1 - r) / (1 + r), (1 + r) / (1 - r)


def safe_radius(seed: SeedFunction, cap: float = 0.9, target: float = TAIL_TARGET) -> float:
    """Largest sampling radius ``<= cap`` at which every truncation tail stays below ``target``."""
    def worst(r):
        return max(seed.tail_f(r), seed.tail_derivative(r), seed.tail_ratio(r))

    if worst(cap) <= target:
        return cap
    lo, hi = 0.0, cap
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if worst(mid) <= target:
            lo = mid
        else:
            hi = mid
    return lo


def _anchor_points(seed: SeedFunction, radius: float) -> np.ndarray:
    """``+-0.5 e^{-I phi}`` with ``phi`` the argument of ``a_2``: where Koebe rotations are extremal."""
    c2 = seed.slice_coefficients()[2] if seed.degree >= 2 else 0.0
    phi = float(np.angle(c2)) if abs(c2) > 0 else 0.0
    rho = min(0.5, radius)
    z = np.array([rho * np.exp(-1j * phi), -rho * np.exp(-1j * phi)])
    return embed_complex(seed.axis.coeffs, z)


def check_growth_distortion(seed: SeedFunction, points: int = 1000, rng_seed=0, radius: float = 0.9,
                            tolerance: float = 1e-8, name: str | None = None):
    """Sharp growth, distortion and ratio bounds at on- and off-slice points.

    The residual is the worst signed violation of any of the six
    inequalities after granting the truncation tail as slack. Points where a
    bound is attained (within ``1e-8``, away from the origin) are counted;
    such hits must come from a Koebe rotation.
    """
    if not seed.normalized:
        raise PreconditionError(f"{seed.label()} is not normalized")
    f = seed.series
    s = f.structure
    rho_max = safe_radius(seed, radius)
    rng = np.random.default_rng(rng_seed)
    n_on = points // 2
    z = rho_max * np.sqrt(rng.uniform(0, 1, n_on)) * np.exp(2j * np.pi * rng.uniform(0, 1, n_on))
    on = embed_complex(seed.axis.coeffs, z)
    off = ball_sample_array(s, points - n_on, rho_max, rng)
    xs = np.vstack([on, off, _anchor_points(seed, rho_max)])
    r = np.linalg.norm(xs, axis=1)

    fd = derivative(f)
    fr = ratio_series(f)
    vals = {
        "growth": (np.linalg.norm(eval_many(f, xs), axis=1), growth_bounds(r), seed.tail_f(rho_max)),
        "distortion": (np.linalg.norm(eval_many(fd, xs), axis=1), distortion_bounds(r),
                       seed.tail_derivative(rho_max)),
        "ratio": (np.linalg.norm(eval_many(fr, xs), axis=1), ratio_bounds(r), seed.tail_ratio(rho_max)),
    }
    worst, witness = 0.0, {}
    hits = 0
    away = r >= 0.05
    for key, (val, (lo, hi), tail) in vals.items():
        viol = np.maximum(lo - val - tail, val - hi - tail)
        viol = np.maximum(viol, 0.0)
        i = int(np.argmax(viol))
        if viol[i] > worst or not witness:
            worst = max(worst, float(viol[i]))
            witness = {"bound": key, "point": xs[i], "value": float(val[i]),
                       "lower": float(lo[i]), "upper": float(hi[i])}
        tight = (np.abs(val - lo) <= EQUALITY_TOL) | (np.abs(val - hi) <= EQUALITY_TOL)
        hits += int(np.count_nonzero(tight & away))
    koebe, _, _ = is_koebe_rotation(f)
    witness.update({"function": seed.label(), "radius": rho_max, "equality_hits": hits,
                    "koebe_rotation": bool(koebe)})
    if hits and not koebe:
        # equality is reserved for Koebe rotations
        worst = max(worst, 1.0)
    return CheckReport(name or f"growth_distortion[{seed.label()}]", xs.shape[0], worst, tolerance, witness)
