import math

import numpy as np
import pytest

from conftest import brute_hull_vertices_2d
from tubecheck import envelope, fixtures, sheeted, tube
from tubecheck.envelope import (GeneralizedTube, JpShellConfig, abe_check,
                                bochner_envelope, jp_consistency_suite,
                                jp_envelope_contains, psi_build, psi_convexity_check)
from tubecheck.errors import BadRho, ConfigConflict
from tubecheck.fixtures import L_SHAPE_VERTICES, l_shape
from tubecheck.geometry import Ball, Shell, same_halfspace_sets
from tubecheck.sheeted import Univalent


def sorted_rows(a):
    a = np.asarray(a, dtype=float)
    return a[np.lexsort(a.T[::-1])]


def uni(name):
    return Univalent(fixtures.get(name))


# ---------------------------------------------------------------------------
# hull envelope
# ---------------------------------------------------------------------------


def test_envelope_of_l_shape_is_pentagon_tube():
    res = bochner_envelope(l_shape())
    assert res.exact
    expected = brute_hull_vertices_2d(L_SHAPE_VERTICES, tol=1e-12)
    assert np.allclose(sorted_rows(res.hull.vertices), expected, atol=1e-12)
    assert isinstance(res.tube, tube.TubeDomain)
    assert isinstance(res.tube.fiber, tube.FullSpace)


@pytest.mark.parametrize("name", fixtures.CONVEX_SUITE)
def test_envelope_fixed_point_on_convex_bases(name):
    base = fixtures.get(name)
    res = bochner_envelope(base)
    assert res.exact
    if isinstance(base, Ball):
        assert res.hull is base
    else:
        assert same_halfspace_sets(res.hull, base, tol=1e-12)


def test_envelope_of_shell_approximates_outer_ball():
    res = bochner_envelope(Shell(np.zeros(2), 1.0, 2.0), sample_budget=10_000, seed=0)
    assert not res.exact
    assert res.hausdorff_defect is not None
    assert res.hausdorff_defect <= 0.02
    # hull sits inside the closed outer ball
    assert np.all(np.linalg.norm(res.hull.vertices, axis=1) <= 2.0 + 1e-12)


def test_envelope_unbounded_shell_rejected():
    with pytest.raises(ValueError):
        bochner_envelope(Shell(np.zeros(2), 1.0))


# ---------------------------------------------------------------------------
# base convexity certificates
# ---------------------------------------------------------------------------


def test_abe_univalent_convex_ball():
    cert = abe_check(uni("ball-2d"), trials=100, seed=7)
    assert cert.passes
    assert cert.univalence_pair is None


def test_abe_cover_fails_univalence():
    cert = abe_check(fixtures.sheet_domain("cover-nu2"), trials=30, seed=7)
    assert not cert.univalent
    p, q = cert.univalence_pair
    dom = fixtures.sheet_domain("cover-nu2")
    assert np.allclose(sheeted.project_point(dom, p), sheeted.project_point(dom, q))
    assert not cert.passes


def test_abe_l_shape_nonconvex_witness():
    cert = abe_check(uni("l-shape"), trials=300, seed=7)
    assert cert.univalent
    assert not cert.convex
    w = cert.witness
    assert w.reason in ("midpoint-outside-domain", "segment-lift-absent")
    # witness is reproducible
    assert sheeted.lift_segment(uni("l-shape"), w.p, w.q) is None


def test_abe_canonical_l_shape_pair():
    dom = uni("l-shape")
    assert sheeted.lift_segment(dom, np.array([0.2, 1.8]), np.array([1.8, 0.2])) is None


def test_abe_vacuous():
    cert = abe_check(uni("ball-2d"), trials=0, seed=1)
    assert cert.vacuous and cert.convex and cert.midpoint_trials == 0


# ---------------------------------------------------------------------------
# psi
# ---------------------------------------------------------------------------


def test_psi_ball_example():
    gen = GeneralizedTube(uni("ball-2d-r2"), uni("ball-2d-r2"))
    psi = psi_build(gen, np.zeros(2), 0.5)
    assert psi(np.zeros(2)) == pytest.approx(math.log(2.0), abs=1e-15)


def test_psi_bad_rho():
    gen = GeneralizedTube(uni("ball-2d-r2"), uni("ball-2d-r2"))
    with pytest.raises(BadRho):
        psi_build(gen, np.zeros(2), 1.5)  # 2 rho0 = 3 exceeds the radius-2 ball


def test_psi_shell_example():
    gen = GeneralizedTube(uni("shell-1-3"), uni("ball-2d-r2"))
    psi = psi_build(gen, np.zeros(2), 0.25)
    assert psi(np.array([2.0, 0.0])) == pytest.approx(math.log(4.0), abs=1e-15)


def test_psi_floor_everywhere():
    gen = GeneralizedTube(uni("ball-2d-r2"), uni("ball-2d-r2"))
    psi = psi_build(gen, np.zeros(2), 0.5)
    rng = np.random.default_rng(3)
    pts = sheeted.sample_sheet_points(psi.a1, 200, rng)
    for p in pts:
        assert psi(p) >= psi.floor


def test_psi_convex_on_ball_pair():
    gen = GeneralizedTube(uni("ball-2d-r2"), uni("ball-2d-r2"))
    psi = psi_build(gen, np.zeros(2), 0.5)
    cert = psi_convexity_check(psi, trials=1000, seed=5)
    assert cert.convex and cert.univalent


def test_psi_nonconvex_on_shell():
    gen = GeneralizedTube(uni("shell-1-3"), uni("ball-2d-r2"))
    psi = psi_build(gen, np.zeros(2), 0.25)
    cert = psi_convexity_check(psi, trials=1000, seed=5)
    assert not cert.convex
    w = cert.witness
    assert w.reason == "segment-exits-domain"
    # reproducible: the recorded pair still has no lifted segment
    assert sheeted.lift_segment(psi.a1, w.p, w.q, 256) is None


def test_psi_vacuous_trials():
    gen = GeneralizedTube(uni("ball-2d-r2"), uni("ball-2d-r2"))
    psi = psi_build(gen, np.zeros(2), 0.5)
    cert = psi_convexity_check(psi, trials=0, seed=5)
    assert cert.vacuous and cert.convex and cert.midpoint_trials == 0


# ---------------------------------------------------------------------------
# shell-ball envelope formula
# ---------------------------------------------------------------------------


def test_jp_formula_examples():
    cfg = JpShellConfig(0.5, 0.3)
    assert jp_envelope_contains(cfg, [0.9, 0.0], [0.0, 0.0])
    assert not jp_envelope_contains(cfg, [0.4, 0.0], [0.0, 0.0])  # 0 < 0 fails strictly
    assert not jp_envelope_contains(cfg, [0.9, 0.0], [0.3, 0.0])  # |y| = R2 exactly


def test_jp_config_validation():
    with pytest.raises(ValueError):
        JpShellConfig(1.5, 0.3)
    with pytest.raises(ValueError):
        JpShellConfig(0.5, 0.0)


def test_jp_suite_passes_in_nonvanishing_regime():
    report = jp_consistency_suite(JpShellConfig(0.5, 0.3), samples=3000, seed=23)
    assert report.passes
    assert report.inclusion_checked == 3000
    assert report.min_abs_f > 0.0
    # the produced hull-tube point really kills f = z1 + i z2
    x, y = report.vanish_witness_x, report.vanish_witness_y
    assert complex(x[0] - y[1], x[1] + y[0]) == 0
    assert np.linalg.norm(x) < 1.0 and np.linalg.norm(y) < 0.3


def test_jp_suite_guard_for_large_fiber():
    with pytest.raises(ConfigConflict):
        jp_consistency_suite(JpShellConfig(0.5, 0.6), samples=10, seed=1)


def test_jp_suite_vacuous():
    report = jp_consistency_suite(JpShellConfig(0.5, 0.3), samples=0, seed=1)
    assert report.vacuous
    assert math.isnan(report.min_abs_f)


def test_jp_inclusion_random_configs():
    rng = np.random.default_rng(99)
    for _ in range(20):
        r1 = rng.uniform(0.05, 0.95)
        r2 = rng.uniform(0.05, 2.0)
        cfg = JpShellConfig(r1, r2)
        # samples of the tube always satisfy the formula
        shell = Shell(np.zeros(2), r1, 1.0)
        yball = Ball(np.zeros(2), r2)
        from tubecheck import geometry
        xs = geometry.sample_members(shell, 50, rng)
        ys = geometry.sample_members(yball, 50, rng)
        for x, y in zip(xs, ys):
            assert jp_envelope_contains(cfg, x, y)
