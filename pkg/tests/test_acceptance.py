"""The eleven acceptance criteria, each at its stated tolerance.

Every test prints a single ``[PASS]``/``[FAIL]`` line (also collected into the
terminal summary) before asserting.
"""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from slicemono import cli
from slicemono.clifford import (
    Multivector,
    ball_sample_array,
    make_context,
    make_structure,
    mv_mul,
    norm,
    sphere_sample_array,
)
from slicemono.series import (
    ComplexSeries,
    SliceSeries,
    derivative,
    eval_many,
    eval_series,
    eval_slice_arrays,
    ext,
    ratio_eval,
    representation_many,
    splitting,
    star_coefficients,
    star_inverse_eval,
    star_inverse_series,
    completion_basis,
)
from slicemono.suite import zero_free_series
from slicemono.verify.bounds import check_growth_distortion
from slicemono.verify.catalog import seed_catalog
from slicemono.verify.covering import check_koebe_quarter
from slicemono.verify.identities import (
    check_affine_in_inner,
    check_algebra_axioms,
    check_convex_combination,
    check_identity_general,
    check_norm_multiplicativity,
)
from slicemono.verify.report import relative_residual
from slicemono.verify.rotation import check_rotation_detector, random_rotated_instance

H = make_structure("quaternion")


def report(number: int, title: str, ok: bool, detail: str):
    line = f"criterion {number}: [{'PASS' if ok else 'FAIL'}] {title} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def axis(s, rng):
    return Multivector(s.ctx, sphere_sample_array(s, 1, rng)[0])


def random_complex_series(rng, degree):
    return ComplexSeries((rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1))
                         / np.sqrt(np.arange(1, degree + 2)))


# ---------------------------------------------------------------------------------------

def test_criterion_01_algebra_axioms():
    worst = max(check_algebra_axioms(n, 1000, seed=100 + n).max_residual for n in (2, 3, 4, 5))
    ctx = make_context(3)
    a = Multivector(ctx, np.eye(8)[0] + np.eye(8)[7])
    b = Multivector(ctx, np.eye(8)[0] - np.eye(8)[7])
    zd = max(np.max(np.abs(mv_mul(a, b).coeffs)), np.max(np.abs(mv_mul(b, a).coeffs)))
    report(1, "algebra axioms n=2..5, zero divisor 1+-e123",
           worst <= 1e-12 and zd == 0.0, f"max residual {worst:.2e}, zero-divisor product {zd}")


def test_criterion_02_norm_multiplicativity():
    worst = max(check_norm_multiplicativity(n, 1000, seed=200 + n).max_residual for n in (2, 3, 4, 5))
    ctx = make_context(3)
    a = Multivector(ctx, np.eye(8)[0] + np.eye(8)[7])
    b = Multivector(ctx, np.eye(8)[0] - np.eye(8)[7])
    prod, expected = norm(mv_mul(a, b)), norm(a) * norm(b)
    report(2, "norm multiplicativity with a paravector factor",
           worst <= 1e-12 and prod == 0.0 and math.isclose(expected, 2.0),
           f"max residual {worst:.2e}; R_3 counterexample |ab|={prod}, |a||b|={expected:.15g}")


def test_criterion_03_general_identity():
    worst, im_worst = 0.0, 0.0
    rng = np.random.default_rng(3)
    for s in (make_structure("paravector", 3), make_structure("paravector", 4), H):
        for _ in range(100):
            f = SliceSeries(s, rng.standard_normal((9, s.ctx.dim)) / np.sqrt(np.arange(1, 10))[:, None])
            rep = check_identity_general(f, axis(s, rng), 50, 20, seed=rng.integers(1 << 31))
            worst = max(worst, rep.max_residual)
            if s.kind == "quaternion":
                im_worst = max(im_worst, rep.witness["im_form_residual"])
    report(3, "general modulus identity, 100 series x 50 points x 20 axes, n=3,4 and H",
           worst <= 1e-9 and im_worst <= 1e-12, f"relative residual {worst:.2e}, Im-form gap {im_worst:.2e}")


def test_criterion_04_convex_combination():
    rng = np.random.default_rng(4)
    worst_conv, worst_cross, worst_affine = 0.0, 0.0, 0.0
    cases = []
    for s in (make_structure("paravector", 3), make_structure("paravector", 4), H):
        for _ in range(10):
            I = axis(s, rng)
            cases.append((ext(random_complex_series(rng, 10), I, s), I, None))
    for _ in range(10):
        I = axis(H, rng)
        f, _, u = random_rotated_instance(rng, I, 10)
        cases.append((f, I, u))
    for e in seed_catalog(H, 256):
        cases.append((e.series, e.axis, e.rotation))
    for f, I, u in cases:
        rep = check_convex_combination(f, I, 50, 20, seed=rng.integers(1 << 31), rotation=u)
        worst_cross = max(worst_cross, rep.witness["cross_term_max"])
        worst_conv = max(worst_conv, rep.max_residual)
        worst_affine = max(worst_affine, check_affine_in_inner(f, I, 10, 32, seed=rng.integers(1 << 31),
                                                               rotation=u).max_residual)
    report(4, f"convex combination over {len(cases)} slice-preserving and rotated series",
           worst_cross <= 1e-12 and worst_conv <= 1e-9 and worst_affine <= 1e-9,
           f"cross term {worst_cross:.2e}, residual {worst_conv:.2e}, affine fit {worst_affine:.2e}")


def test_criterion_05_representation_formula():
    rng = np.random.default_rng(5)
    worst = 0.0
    for s in (make_structure("paravector", 3), H):
        for _ in range(100):
            f = SliceSeries(s, rng.standard_normal((11, s.ctx.dim)) / np.sqrt(np.arange(1, 12))[:, None])
            xs = ball_sample_array(s, 50, 0.9, rng)
            res = relative_residual(eval_many(f, xs), representation_many(f, axis(s, rng).coeffs, xs))
            worst = max(worst, float(res.max()))
    report(5, "representation formula, 100 series x 50 points", worst <= 1e-10, f"relative residual {worst:.2e}")


def test_criterion_06_splitting():
    rng = np.random.default_rng(6)
    worst = 0.0
    for n in (2, 3, 4, 5):
        s = make_structure("paravector", n)
        for _ in range(20):
            f = SliceSeries(s, rng.standard_normal((9, s.ctx.dim)))
            I = axis(s, rng)
            z = 0.9 * np.sqrt(rng.uniform(0, 1, 50)) * np.exp(2j * np.pi * rng.uniform(0, 1, 50))
            res = relative_residual(eval_slice_arrays(f, I.coeffs, z), splitting(f, I).reconstruct(z))
            worst = max(worst, float(res.max()))
    exact = 0.0
    for _ in range(20):
        I = axis(H, rng)
        K = completion_basis(H, I)[0]
        F, G = random_complex_series(rng, 8), random_complex_series(rng, 8)
        coeffs = ext(F, I, H).coeffs + H.ctx.mul_arrays(ext(G, I, H).coeffs, np.broadcast_to(K.coeffs, (9, 4)))
        sp = splitting(SliceSeries(H, coeffs), I)
        exact = max(exact, float(np.max(np.abs(sp.F.coeffs - F.coeffs))), float(np.max(np.abs(sp.G.coeffs - G.coeffs))))
    report(6, "splitting round trip n=2..5 and exact quaternion F/G recovery",
           worst <= 1e-10 and exact <= 1e-12, f"reconstruction {worst:.2e}, F/G recovery {exact:.2e}")


def test_criterion_07_star_inverse():
    rng = np.random.default_rng(7)
    two_sided = 0.0
    for s in (make_structure("paravector", 3), H):
        unit = np.zeros((33, s.ctx.dim))
        unit[0, 0] = 1.0
        for f in zero_free_series(s, 100, 32, rng):
            inv = star_inverse_series(f)
            for a, b in ((f, inv), (inv, f)):
                two_sided = max(two_sided, float(np.max(np.abs(star_coefficients(s.ctx, a.coeffs, b.coeffs, 32) - unit))))
    routes = 0.0
    for s in (make_structure("paravector", 3), H):
        for f in zero_free_series(s, 20, 256, rng, active=8, axis=axis(s, rng)):
            inv = star_inverse_series(f)
            for x in ball_sample_array(s, 20, 0.9, rng):
                xm = Multivector(s.ctx, x)
                r = relative_residual(star_inverse_eval(f, xm).coeffs[None], eval_series(inv, xm).coeffs[None])
                routes = max(routes, float(r[0]))
    report(7, "star inverse: two-sided at N=32 over 100 series, pointwise vs series route",
           two_sided <= 1e-10 and routes <= 1e-8, f"two-sided {two_sided:.2e}, routes {routes:.2e}")


def test_criterion_08_growth_distortion():
    worst, hits_ok = 0.0, True
    for s in (H, make_structure("paravector", 3)):
        for e in seed_catalog(s, 512):
            if not e.normalized:
                continue
            rep = check_growth_distortion(e, 1000, rng_seed=8, radius=0.9)
            worst = max(worst, rep.max_residual)
            hits_ok &= (rep.witness["equality_hits"] > 0) == (e.name == "koebe")
            assert rep.witness["radius"] == 0.9
    k = seed_catalog(H, 512)[1].series
    half = Multivector.scalar(H.ctx, 0.5)
    anchors = {
        "|f(0.5)|": (norm(eval_series(k, half)), 0.5 / 0.25),
        "|f(-0.5)|": (norm(eval_series(k, -half)), 0.5 / 2.25),
        "|f'(0.5)|": (norm(eval_series(derivative(k), half)), 1.5 / 0.125),
        "|ratio(0.5)|": (norm(ratio_eval(k, half)), 1.5 / 0.5),
    }
    anchor_gap = max(abs(v - t) for v, t in anchors.values())
    report(8, "growth/distortion/ratio over the catalog at 1000 points, N=512, Koebe anchors",
           worst <= 1e-8 and anchor_gap <= 1e-8 and hits_ok,
           f"worst violation {worst:.2e}, anchor gap {anchor_gap:.2e}, equality only for Koebe: {hits_ok}")


def test_criterion_09_rotation_detector():
    rep = check_rotation_detector(50, 50, seed=9)
    w = rep.witness
    report(9, "f = g u detector, 50 constructed and 50 generic",
           w["missed"] == 0 and w["false_positives"] == 0 and w["worst_reconstruction"] <= 1e-9,
           f"missed {w['missed']}, false positives {w['false_positives']}, reconstruction {w['worst_reconstruction']:.2e}")


@pytest.fixture(scope="module")
def default_runs(tmp_path_factory):
    d = tmp_path_factory.mktemp("verify")
    out, times, codes = [], [], []
    for i in range(2):
        path = d / f"run{i}.json"
        t0 = time.perf_counter()
        codes.append(cli.main(["verify", "--out", str(path)]))
        times.append(time.perf_counter() - t0)
        out.append(path.read_bytes())
    return out, times, codes


def test_criterion_10_koebe_quarter(default_runs):
    t0 = time.perf_counter()
    rep = check_koebe_quarter(seed_catalog(H, 512)[1], rng_seed=10)
    elapsed = time.perf_counter() - t0
    minima = {m["r"]: m["min"] for m in rep.witness["minima"]}
    vals = [m["min"] for m in rep.witness["minima"]]
    gap_09 = abs(minima[0.9] - 0.9 / 1.9 ** 2)
    gap_0999 = abs(minima[0.999] - 0.999 / 1.999 ** 2)
    monotone = all(a < b for a, b in zip(vals, vals[1:])) and vals[-1] < 0.25
    count_in = rep.witness["target_counts"][str(complex(0.2))]
    count_out = rep.witness["control_counts"][str(complex(-0.3))]
    suite_time = default_runs[1][0]
    ok = (rep.passed and gap_09 <= 1e-8 and gap_0999 <= 1e-4 and monotone and count_in == 1 and count_out == 0
          and elapsed < 30 and suite_time < 30)
    report(10, "one-quarter covering for the Koebe function", ok,
           f"r=0.9 gap {gap_09:.1e}, r=0.999 gap {gap_0999:.1e}, counts {count_in}/{count_out}, "
           f"check {elapsed:.1f}s, full suite {suite_time:.1f}s")


def test_criterion_11_determinism(default_runs):
    (a, b), _, codes = default_runs
    report(11, "byte-identical reports from two default verify runs", a == b and codes == [0, 0],
           f"{len(a)} bytes, exit codes {codes}")
