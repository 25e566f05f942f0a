"""Run configuration and the full verification suite."""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .clifford import (
    MAX_GENERATORS,
    PARAVECTOR,
    QUATERNION,
    Multivector,
    make_structure,
    sphere_sample_array,
)
from .errors import ConfigurationError
from .series import ComplexSeries, SliceSeries, ext
from .verify.bounds import check_growth_distortion
from .verify.catalog import seed_catalog
from .verify.covering import check_koebe_quarter, check_slice_injectivity, degree_for_radius
from .verify.identities import (
    check_affine_in_inner,
    check_algebra_axioms,
    check_convex_combination,
    check_identity_general,
    check_inverse_routes,
    check_norm_multiplicativity,
    check_representation,
    check_splitting,
    check_star_inverse,
    sphere_extrema_check,
)
from .verify.report import CheckReport
from .verify.rotation import check_rotation_detector


@dataclass(frozen=True)
class RunConfig:
    structure: str = QUATERNION
    n: int = 2
    degree: int = 128
    points: int = 200
    axes: int = 32
    seed: int = 42
    tol: float = 1e-9
    rmax: float = 0.95
    out: str | None = None
    jobs: int = 1

    def validate(self) -> "RunConfig":
        if self.structure not in (PARAVECTOR, QUATERNION):
            raise ConfigurationError(f"unknown structure {self.structure!r}")
        if self.structure == QUATERNION and self.n != 2:
            raise ConfigurationError("quaternion structure requires n = 2")
        if not 1 <= self.n <= MAX_GENERATORS:
            raise ConfigurationError(f"n must lie in [1, {MAX_GENERATORS}], got {self.n}")
        if not 0 < self.rmax < 1:
            raise ConfigurationError("rmax must lie in (0, 1)")
        if not self.tol > 0:
            raise ConfigurationError("tolerance must be positive")
        if self.degree < 2:
            raise ConfigurationError("degree must be at least 2")
        if self.points < 1 or self.axes < 1 or self.jobs < 1:
            raise ConfigurationError("points, axes and jobs must be positive")
        return self

    def report_config(self) -> dict:
        # output path and parallelism do not influence results, so they stay out of the report
        d = asdict(self)
        d.pop("out")
        d.pop("jobs")
        return d


def _random_series(s, count, degree, rng, decay=True):
    out = []
    for _ in range(count):
        c = rng.standard_normal((degree + 1, s.ctx.dim))
        if decay:
            c /= np.sqrt(np.arange(1, degree + 2))[:, None]
        out.append(SliceSeries(s, c))
    return out


def zero_free_series(s, count, degree, rng, active: int | None = None, axis=None):
    """Random series with ``a_0 = 1`` and ``sum_{k>=1} |a_k| = 1/2``.

    Only the first ``active`` coefficients (all by default) are nonzero and
    ``|f(x)| >= 1/2`` on the closed unit ball, so the *-inverse stays bounded.
    With ``axis`` given the coefficients lie in ``C_I`` (slice preserving).
    """
    out = []
    active = degree if active is None else min(active, degree)
    for _ in range(count):
        if axis is None:
            tail = rng.standard_normal((active, s.ctx.dim))
            scale = np.linalg.norm(tail, axis=1).sum()
            c = np.zeros((degree + 1, s.ctx.dim))
            c[0, 0] = 1.0
            c[1:active + 1] = 0.5 * tail / scale
            out.append(SliceSeries(s, c))
        else:
            tail = rng.standard_normal(active) + 1j * rng.standard_normal(active)
            c = np.zeros(degree + 1, dtype=complex)
            c[0] = 1.0
            c[1:active + 1] = 0.5 * tail / np.abs(tail).sum()
            out.append(ext(ComplexSeries(c), axis, s))
    return out


def _merge(name: str, reports: list[CheckReport], tolerance: float) -> CheckReport:
    worst = max(reports, key=lambda r: r.max_residual)
    return CheckReport(name, sum(r.samples for r in reports), worst.max_residual, tolerance,
                       {"worst": worst.name, **worst.witness})


def build_tasks(cfg: RunConfig) -> list[tuple[str, Callable[[np.random.SeedSequence], CheckReport]]]:
    """Named check thunks in report order; each receives its own seed substream."""
    s = make_structure(cfg.structure, cfg.n)
    ctx = s.ctx
    catalog = seed_catalog(s, cfg.degree)
    tol = cfg.tol
    radius = min(0.9, cfg.rmax)
    small_deg = min(cfg.degree, 12)

    def tol_for(default):
        return min(default, tol)

    tasks = [
        ("algebra_axioms", lambda ss: check_algebra_axioms(cfg.n, 1000, ss, tol_for(1e-12))),
        ("norm_multiplicativity", lambda ss: check_norm_multiplicativity(cfg.n, 1000, ss, tol_for(1e-12))),
    ]

    def identity_general(ss):
        rng = np.random.default_rng(ss)
        reps = []
        for i, f in enumerate(_random_series(s, 5, small_deg, rng)):
            axis = Multivector(ctx, sphere_sample_array(s, 1, rng)[0])
            reps.append(check_identity_general(f, axis, max(cfg.points // 4, 1), cfg.axes, rng,
                                               tol_for(1e-9), name=f"series{i}"))
        return _merge("identity_general", reps, tol_for(1e-9))

    tasks.append(("identity_general", identity_general))

    for entry in catalog:
        label = entry.label()

        def convex(ss, entry=entry, label=label):
            reps = [
                check_convex_combination(entry.series, entry.axis, max(cfg.points // 4, 1), cfg.axes, ss,
                                         rotation=entry.rotation, tolerance=tol_for(1e-9)),
                check_affine_in_inner(entry.series, entry.axis, 10, cfg.axes, ss, rotation=entry.rotation,
                                      tolerance=tol_for(1e-9)),
                sphere_extrema_check(entry.series, entry.axis, 0.2, 0.3, 4 * cfg.axes, ss,
                                     rotation=entry.rotation, tolerance=tol_for(1e-9)),
            ]
            return _merge(f"convex_combination[{label}]", reps, tol_for(1e-9))

        tasks.append((f"convex_combination[{label}]", convex))

    def representation(ss):
        rng = np.random.default_rng(ss)
        axis = Multivector(ctx, sphere_sample_array(s, 1, rng)[0])
        return check_representation(_random_series(s, 10, small_deg, rng), axis, 50, rng, tol_for(1e-10))

    def split(ss):
        rng = np.random.default_rng(ss)
        axis = Multivector(ctx, sphere_sample_array(s, 1, rng)[0])
        return check_splitting(_random_series(s, 10, small_deg, rng), axis, 50, rng, tol_for(1e-10))

    def star_inverse(ss):
        rng = np.random.default_rng(ss)
        return check_star_inverse(zero_free_series(s, 20, min(cfg.degree, 32), rng),
                                  tol_for(1e-10))

    def inverse_routes(ss):
        rng = np.random.default_rng(ss)
        axis = Multivector(ctx, sphere_sample_array(s, 1, rng)[0])
        return check_inverse_routes(zero_free_series(s, 5, 256, rng, active=8, axis=axis), 20, rng,
                                    radius, tol_for(1e-8))

    tasks += [("representation_formula", representation), ("splitting_round_trip", split),
              ("star_inverse_two_sided", star_inverse), ("star_inverse_routes", inverse_routes)]

    for entry in catalog:
        if entry.normalized:
            tasks.append((f"growth_distortion[{entry.label()}]",
                          lambda ss, entry=entry: check_growth_distortion(entry, cfg.points, ss, radius,
                                                                          tol_for(1e-8))))

    koebe = catalog[1]
    j_axis = sphere_sample_array(s, 1, np.random.default_rng(cfg.seed))[0]
    # collisions are searched on the function itself, so expand it far enough for the grid radius
    inj_series = koebe.realize(max(cfg.degree, degree_for_radius(koebe.coeff_bound, radius)))
    tasks.append(("slice_injectivity", lambda ss: check_slice_injectivity(
        inj_series, Multivector(ctx, j_axis), grid_size=48, radius=radius,
        name=f"slice_injectivity[{koebe.label()}]")))

    if s.kind == QUATERNION:
        tasks.append(("rotation_detector", lambda ss: check_rotation_detector(50, 50, ss,
                                                                              tolerance=tol_for(1e-9))))
        for entry in (koebe, catalog[3]):
            tasks.append((f"koebe_quarter[{entry.label()}]",
                          lambda ss, entry=entry: check_koebe_quarter(entry, rng_seed=ss, tolerance=tol_for(1e-8))))
    return tasks


def run_suite(cfg: RunConfig) -> dict:
    """Run every check and assemble the suite document (deterministic for a fixed config)."""
    cfg.validate()
    tasks = build_tasks(cfg)
    streams = np.random.SeedSequence(cfg.seed).spawn(len(tasks))
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = [pool.submit(fn, ss) for (_, fn), ss in zip(tasks, streams)]
            reports = [fut.result() for fut in futures]
    else:
        reports = [fn(ss) for (_, fn), ss in zip(tasks, streams)]
    return {"config": cfg.report_config(), "checks": [r.to_json() for r in reports]}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def all_passed(doc: dict) -> bool:
    return all(c["pass"] for c in doc["checks"])
