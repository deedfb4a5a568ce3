import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubecheck import sheeted
from tubecheck.errors import InvalidPoint
from tubecheck.fixtures import l_shape
from tubecheck.geometry import Ball, Shell
from tubecheck.sheeted import (FiniteCover, UniversalCover, Univalent, lift_segment,
                               preimages, project_point, univalence_witness)


def cover(nu=2, r1=1.0, r2=4.0):
    return FiniteCover(Shell(np.zeros(2), r1, r2), nu)


def test_cover_requires_origin_centered_shell():
    with pytest.raises(ValueError):
        FiniteCover(Shell(np.array([1.0, 0.0]), 1.0, 2.0), 2)
    with pytest.raises(ValueError):
        FiniteCover(Shell(np.zeros(2), 1.0, 2.0), 1)


def test_projection_and_membership():
    dom = cover(2)
    u = complex(1.2, 0.3)
    x = project_point(dom, u)
    assert np.allclose(x, [(u ** 2).real, (u ** 2).imag])
    assert sheeted.contains_point(dom, u)
    assert not sheeted.contains_point(dom, complex(0.5, 0.0))  # |u| below 1


@pytest.mark.parametrize("nu", [2, 3, 4, 5, 6])
def test_preimage_count_and_separation(nu):
    dom = cover(nu, 1.0, 4.0)
    x = np.array([1.7, 0.9])
    pres = preimages(dom, x)
    assert len(pres) == nu
    for p in pres:
        assert np.allclose(project_point(dom, p), x, atol=1e-12)
    expected_gap = abs(pres[0]) * 2.0 * math.sin(math.pi / nu)
    for i in range(nu):
        for j in range(i + 1, nu):
            gap = abs(pres[i] - pres[j])
            assert gap >= expected_gap - 1e-12


def test_univalence_witnesses():
    assert univalence_witness(Univalent(l_shape())) is None

    dom = FiniteCover(Shell(np.zeros(2), 1.0, 8.0), 3)
    p, q = univalence_witness(dom)
    assert abs(p - q) > 1e-6
    assert np.allclose(project_point(dom, p), project_point(dom, q), atol=1e-12)
    # the canonical pair of the 3-fold cover of the 1..8 shell projects to (2, 0)
    assert np.allclose(project_point(dom, 2.0 ** (1.0 / 3.0)), [2.0, 0.0], atol=1e-12)

    uc = UniversalCover(Shell(np.zeros(2), 1.0, math.e))
    p, q = univalence_witness(uc)
    assert p == complex(0.5, 0.0) and q == complex(0.5, 2.0 * math.pi)
    assert np.allclose(project_point(uc, p), project_point(uc, q), atol=1e-12)


def test_lift_univalent_ball():
    dom = Univalent(Ball(np.zeros(2), 1.0))
    seg = lift_segment(dom, np.array([0.5, 0.0]), np.array([-0.5, 0.0]))
    assert seg is not None
    assert np.allclose(seg.projection_at(0.5), [0.0, 0.0])


def test_lift_univalent_absent_outside():
    dom = Univalent(l_shape())
    seg = lift_segment(dom, np.array([0.2, 1.8]), np.array([1.8, 0.2]))
    assert seg is None  # crosses the reentrant corner


def test_lift_degenerate_segment_opposite_sheets():
    dom = cover(2, 1.0, 4.0)
    p = math.sqrt(2.0)
    q = -math.sqrt(2.0)
    assert np.allclose(project_point(dom, p), project_point(dom, q))
    assert lift_segment(dom, p, q) is None
    same = lift_segment(dom, p, p)
    assert same is not None and same.sample_count == 0


def test_lift_same_sheet_present():
    dom = cover(2, 1.0, 4.0)
    p = cmath.sqrt(complex(2.0, 0.5))
    q = cmath.sqrt(complex(2.0, -0.5))
    seg = lift_segment(dom, p, q, 1000)
    assert seg is not None
    # projection of the lift is the straight segment
    for t in np.linspace(0.0, 1.0, 33):
        err = np.linalg.norm(project_point(dom, seg.point_at(t)) - seg.projection_at(t))
        assert err <= 1e-9


def test_lift_leaves_shell_absent():
    dom = cover(2, 1.0, 4.0)
    # straight segment between the projections passes through the hole
    p = cmath.sqrt(complex(-2.0, 1e-3))
    q = cmath.sqrt(complex(2.0, 1e-3))
    assert lift_segment(dom, p, q) is None


def test_lift_universal_cover_unwinds_angle():
    dom = UniversalCover(Shell(np.zeros(2), 1.0, 4.0))
    p = complex(math.log(2.0), 0.0)
    q = complex(math.log(2.0), 0.9)  # within the same half turn
    seg = lift_segment(dom, p, q, 2000)
    assert seg is not None
    mid = seg.point_at(0.5)
    assert np.allclose(project_point(dom, mid), seg.projection_at(0.5), atol=1e-9)


def test_preimages_invalid_for_universal_cover():
    uc = UniversalCover(Shell(np.zeros(2), 1.0, 4.0))
    with pytest.raises(ValueError):
        preimages(uc, np.array([2.0, 0.0]))


def test_preimages_origin_rejected():
    dom = cover(2, 1.0, 4.0)
    with pytest.raises(InvalidPoint):
        preimages(dom, np.array([0.0, 0.0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2 ** 31 - 1))
def test_lift_projection_property(nu, seed):
    rng = np.random.default_rng(seed)
    dom = cover(nu, 1.0, 4.0)
    pts = sheeted.sample_sheet_points(dom, 2, rng)
    seg = lift_segment(dom, pts[0], pts[1], 400)
    if seg is None:
        return
    ts = rng.uniform(0.0, 1.0, size=8)
    for t in ts:
        err = np.linalg.norm(project_point(dom, seg.point_at(t)) - seg.projection_at(t))
        assert err <= 1e-9
