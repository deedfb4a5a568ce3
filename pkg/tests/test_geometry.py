import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import brute_facet_planes_2d, brute_hull_vertices_2d, brute_hull_vertices_3d
from tubecheck import geometry
from tubecheck.errors import DegenerateInput, OutsideDomain
from tubecheck.fixtures import L_SHAPE_VERTICES, l_shape
from tubecheck.geometry import (Ball, HalfspacePolytope, PolytopeUnion, SampledDomain,
                                Shell, box_polytope, contains, convex_hull,
                                real_boundary_distance, same_halfspace_sets)

L_HULL_VERTICES = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 2.0], [0.0, 2.0]])


def sorted_rows(a):
    a = np.asarray(a, dtype=float)
    return a[np.lexsort(a.T[::-1])]


# ---------------------------------------------------------------------------
# convex_hull
# ---------------------------------------------------------------------------


def test_hull_axis_aligned_square():
    hull = convex_hull([[0, 0], [1, 0], [0, 1], [1, 1]], 2)
    assert len(hull.offsets) == 4
    assert np.allclose(sorted_rows(hull.vertices),
                       [[0, 0], [0, 1], [1, 0], [1, 1]], atol=1e-12)


def test_hull_l_shape_is_pentagon():
    hull = convex_hull(L_SHAPE_VERTICES, 2)
    expected = brute_hull_vertices_2d(L_SHAPE_VERTICES, tol=1e-12)
    assert np.allclose(sorted_rows(hull.vertices), expected, atol=1e-12)
    assert np.allclose(sorted_rows(hull.vertices), sorted_rows(L_HULL_VERTICES), atol=1e-12)
    # edge exhaustion agrees on the half-space set
    planes = brute_facet_planes_2d(L_SHAPE_VERTICES)
    assert len(planes) == len(hull.offsets) == 5
    for n, off in planes:
        hit = np.any((np.linalg.norm(hull.normals - n, axis=1) <= 1e-9)
                     & (np.abs(hull.offsets - off) <= 1e-9))
        assert hit


def test_hull_collinear_degenerate():
    with pytest.raises(DegenerateInput):
        convex_hull([[0, 0], [1, 1], [2, 2]], 2)


def test_hull_coplanar_degenerate_3d():
    pts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [0.3, 0.4, 0]]
    with pytest.raises(DegenerateInput):
        convex_hull(pts, 3)


def test_hull_1d_interval():
    hull = convex_hull([[0.3], [0.0], [1.0], [0.7]], 1)
    assert np.allclose(sorted_rows(hull.vertices), [[0.0], [1.0]])
    assert contains(hull, [0.5])
    assert not contains(hull, [1.0])


def test_hull_duplicate_points_merged():
    hull = convex_hull([[0, 0], [1, 0], [0, 1], [1, 1], [1, 1], [1 + 1e-13, 1]], 2)
    assert len(hull.vertices) == 4


def test_hull_idempotent_on_own_vertices():
    hull = convex_hull(L_SHAPE_VERTICES, 2)
    again = convex_hull(hull.vertices, 2)
    assert same_halfspace_sets(hull, again, tol=1e-12)


def test_hull_3d_cube_with_face_points():
    corners = np.array([[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)], float)
    extras = np.array([[0.5, 0.5, 0.0], [0.5, 0.5, 1.0], [0.5, 0.5, 0.5], [0.2, 0.3, 0.4]])
    hull = convex_hull(np.vstack([corners, extras]), 3)
    assert len(hull.offsets) == 6
    assert np.allclose(sorted_rows(hull.vertices), sorted_rows(corners), atol=1e-12)


def test_hull_3d_tetrahedron_vs_brute():
    rng = np.random.default_rng(4)
    pts = rng.uniform(-1, 1, size=(12, 3))
    hull = convex_hull(pts, 3)
    expected = brute_hull_vertices_3d(pts)
    assert np.allclose(sorted_rows(hull.vertices), expected, atol=1e-9)
    slack = hull.offsets[None, :] - pts @ hull.normals.T
    assert slack.min() >= -1e-12


# Lattice coordinates (multiples of 1/8 in [-10, 10]) keep every
# orientation test exact in float64, so collinear configurations are
# decided identically by the hull and the brute oracle.
lattice_points = st.lists(
    st.tuples(st.integers(-80, 80), st.integers(-80, 80)),
    min_size=3, max_size=16, unique=True,
).map(lambda cs: np.array(cs, dtype=float) / 8.0)


@settings(max_examples=200, deadline=None)
@given(lattice_points)
def test_hull_2d_matches_brute_oracle(pts):
    try:
        hull = convex_hull(pts, 2)
    except DegenerateInput:
        assume(False)
    expected = brute_hull_vertices_2d(pts, tol=1e-12)
    got = sorted_rows(hull.vertices)
    assert got.shape == expected.shape
    assert np.allclose(got, expected, atol=1e-12)
    # membership with slack >= -1e-12 (scaled)
    slack = hull.offsets[None, :] - pts @ hull.normals.T
    assert slack.min() >= -1e-12 * 10.0
    # idempotence
    again = convex_hull(hull.vertices, 2)
    assert same_halfspace_sets(hull, again, tol=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(10, 50))
def test_hull_2d_large_random_sets(seed, count):
    pts = np.random.default_rng(seed).normal(size=(count, 2))
    hull = convex_hull(pts, 2)
    expected = brute_hull_vertices_2d(pts)
    assert np.allclose(sorted_rows(hull.vertices), expected, atol=1e-9)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def test_shell_membership_open():
    sh = Shell(np.zeros(2), 1.0, 2.0)
    assert contains(sh, [1.5, 0.0])
    assert not contains(sh, [1.0, 0.0])  # boundary excluded
    assert not contains(sh, [2.0, 0.0])
    assert not contains(sh, [1.0 + 1e-13, 0.0])  # within the margin band


def test_l_shape_membership():
    dom = l_shape()
    assert contains(dom, [1.5, 0.5])
    assert contains(dom, [0.5, 1.5])
    assert not contains(dom, [1.5, 1.5])
    assert not contains(dom, [1.0, 1.0])  # reentrant corner point


def test_unbounded_shell_membership():
    sh = Shell(np.zeros(2), 1.0)
    assert contains(sh, [100.0, 0.0])
    assert not contains(sh, [0.5, 0.0])


def test_union_requires_connectivity():
    with pytest.raises(ValueError):
        PolytopeUnion((box_polytope([0, 0], [1, 1]), box_polytope([2, 2], [3, 3])))


def test_duplicate_halfspaces_rejected():
    with pytest.raises(ValueError):
        HalfspacePolytope(np.array([[1.0, 0.0], [2.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]),
                          np.array([1.0, 2.0, 1.0, 0.0, 0.0]))


# ---------------------------------------------------------------------------
# boundary distance
# ---------------------------------------------------------------------------


def test_distance_closed_forms():
    sh = Shell(np.zeros(2), 1.0, 2.0)
    assert real_boundary_distance(sh, [1.5, 0.0]) == pytest.approx(0.5, abs=1e-15)
    ball = Ball(np.zeros(2), 1.0)
    assert real_boundary_distance(ball, [0.0, 0.0]) == pytest.approx(1.0, abs=1e-15)
    sq = box_polytope([0, 0], [1, 1])
    assert real_boundary_distance(sq, [0.2, 0.5]) == pytest.approx(0.2, abs=1e-15)


def test_distance_requires_membership():
    sh = Shell(np.zeros(2), 1.0, 2.0)
    with pytest.raises(OutsideDomain):
        real_boundary_distance(sh, [0.5, 0.0])


def test_l_shape_distance_exact():
    dom = l_shape()
    # interior point nearest the reentrant corner
    assert real_boundary_distance(dom, [0.9, 0.9]) == pytest.approx(math.hypot(0.1, 0.1), abs=1e-12)
    # interior point nearest a clipped face
    assert real_boundary_distance(dom, [1.5, 0.7]) == pytest.approx(0.3, abs=1e-12)
    # deep interior nearest the outer boundary
    assert real_boundary_distance(dom, [0.5, 0.5]) == pytest.approx(0.5, abs=1e-12)


def test_l_shape_distance_matches_dense_boundary_search():
    dom = l_shape()
    segs = dom.boundary_segments
    ts = np.linspace(0.0, 1.0, 200)
    cloud = np.vstack([(1 - ts)[:, None] * s[0:2] + ts[:, None] * s[2:4] for s in segs])
    rng = np.random.default_rng(0)
    pts = geometry.sample_members(dom, 200, rng)
    for x in pts:
        brute = np.linalg.norm(cloud - x, axis=1).min()
        assert real_boundary_distance(dom, x) == pytest.approx(brute, abs=2e-3)


def test_union_3d_ray_estimate():
    dom = PolytopeUnion((box_polytope([0, 0, 0], [2, 1, 1]), box_polytope([0, 0, 0], [1, 2, 1])))
    x = np.array([0.5, 0.5, 0.5])
    est = real_boundary_distance(dom, x)
    assert est == pytest.approx(0.5, rel=1e-3)


def test_sampled_domain_distance():
    dom = SampledDomain(lambda x: float(np.linalg.norm(x)) < 1.0, [-1, -1], [1, 1])
    est = real_boundary_distance(dom, np.array([0.3, 0.0]))
    assert est == pytest.approx(0.7, rel=1e-3)


def test_sample_members_respects_domain_and_margin():
    dom = l_shape()
    rng = np.random.default_rng(5)
    pts = geometry.sample_members(dom, 50, rng, margin=0.1)
    for x in pts:
        assert contains(dom, x)
        assert real_boundary_distance(dom, x) >= 0.1
