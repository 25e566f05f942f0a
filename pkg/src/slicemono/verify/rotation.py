"""Detect quaternionic series of the form ``f = g u`` with ``g`` slice preserving."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..clifford import QUATERNION, Multivector, ball_sample_array, embed_complex, quaternion_structure
from ..errors import PreconditionError
from ..series import ComplexSeries, SliceSeries, eval_many, ext, splitting
from .report import CheckReport, relative_residual

CRITERION_TOL = 1e-10
RECON_TOL = 1e-9
G_FLOOR = 1e-8


@dataclass(frozen=True)
class RotationFit:
    lam: complex
    u: Multivector
    g: SliceSeries
    criterion: float
    residual: float


def _sample_disc(rng, count, radius=0.9):
    return radius * np.sqrt(rng.uniform(0, 1, count)) * np.exp(2j * np.pi * rng.uniform(0, 1, count))


def rotation_criterion(F: ComplexSeries, G: ComplexSeries, z: np.ndarray) -> float:
    """Worst relative defect of ``F(z) G(conj z) = F(conj z) G(z)`` over ``z``."""
    fz, fzb, gz, gzb = F(z), F(z.conj()), G(z), G(z.conj())
    lhs, rhs = fz * gzb, fzb * gz
    return float(np.max(np.abs(lhs - rhs) / (1 + np.abs(lhs) + np.abs(rhs))))


def detect_rotated_slice_preserving(f: SliceSeries, axis: Multivector, samples: int = 64,
                                    seed=0) -> Optional[RotationFit]:
    """Find ``lambda``, unit ``u`` and slice-preserving ``g`` with ``f = g u``, or ``None``.

    With ``f_I = F + G K`` the criterion is ``F(z)G(zbar) = F(zbar)G(z)``;
    then ``F = lambda G`` and ``u = (lambda + K) / sqrt(1 + |lambda|^2)``.
    """
    if f.structure.kind != QUATERNION:
        raise PreconditionError("rotation detection is defined for quaternionic series")
    s = f.structure
    rng = np.random.default_rng(seed)
    split = splitting(f, axis)
    F, G = split.F, split.G
    K = split.completion[0]
    z = _sample_disc(rng, samples)
    crit = rotation_criterion(F, G, z)
    if crit > CRITERION_TOL:
        return None
    scale = max(1.0, float(np.max(np.abs(f.coeffs))))
    if np.max(np.abs(G.coeffs)) <= 1e-12 * scale:
        return RotationFit(0j, Multivector.scalar(s.ctx), f, crit, 0.0)
    gz, fz = G(z), F(z)
    keep = np.abs(gz) > G_FLOOR
    if not np.any(keep):
        return None
    lam = complex(np.vdot(gz[keep], fz[keep]) / np.vdot(gz[keep], gz[keep]))
    norm = np.sqrt(1 + abs(lam) ** 2)
    u = Multivector(s.ctx, (embed_complex(axis.coeffs, lam) + K.coeffs) / norm)
    g = ext(ComplexSeries(np.asarray(G.coeffs) * norm), axis, s)
    xs = ball_sample_array(s, samples, 0.9, rng)
    gu = s.ctx.mul_arrays(eval_many(g, xs), np.broadcast_to(u.coeffs, xs.shape))
    resid = float(np.max(relative_residual(eval_many(f, xs), gu)))
    if resid > RECON_TOL:
        return None
    return RotationFit(lam, u, g, crit, resid)


def random_rotated_instance(rng, axis: Multivector, degree: int = 8):
    """``g u`` with random ``C_I`` coefficients for ``g`` and a random unit ``u``."""
    s = quaternion_structure()
    c = (rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)) / np.sqrt(np.arange(1, degree + 2))
    g = ext(ComplexSeries(c), axis, s)
    u = rng.standard_normal(4)
    u /= np.linalg.norm(u)
    coeffs = s.ctx.mul_arrays(g.coeffs, np.broadcast_to(u, g.coeffs.shape))
    return SliceSeries(s, coeffs), g, Multivector(s.ctx, u)


def check_rotation_detector(instances: int = 50, negatives: int = 50, seed=0, degree: int = 8,
                            tolerance: float = RECON_TOL, name: str = "rotation_detector") -> CheckReport:
    """Constructed ``g u`` instances must be recovered; generic quaternionic series rejected."""
    s = quaternion_structure()
    rng = np.random.default_rng(seed)
    from ..clifford import sphere_sample_array

    worst, missed, false_pos = 0.0, 0, 0
    for _ in range(instances):
        axis = Multivector(s.ctx, sphere_sample_array(s, 1, rng)[0])
        f, _, _ = random_rotated_instance(rng, axis, degree)
        fit = detect_rotated_slice_preserving(f, axis, seed=rng.integers(2**32))
        if fit is None:
            missed += 1
        else:
            worst = max(worst, fit.residual)
    for _ in range(negatives):
        axis = Multivector(s.ctx, sphere_sample_array(s, 1, rng)[0])
        f = SliceSeries(s, rng.standard_normal((degree + 1, 4)))
        if detect_rotated_slice_preserving(f, axis, seed=rng.integers(2**32)) is not None:
            false_pos += 1
    residual = worst + float(missed + false_pos)
    witness = {"missed": missed, "false_positives": false_pos, "worst_reconstruction": worst}
    return CheckReport(name, instances + negatives, residual, tolerance, witness)
