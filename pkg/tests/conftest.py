"""Shared brute-force oracles for the test suite.

These are deliberately independent of the library code paths they check:
hull vertices come from orientation tests over all point triples, the
product-rule distance from a dense nearest-boundary-sample search.
"""

import itertools

import numpy as np


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, a, b, tol):
    if abs(_cross2(a, b, p)) > tol:
        return False
    lo = np.minimum(a, b) - tol
    hi = np.maximum(a, b) + tol
    return bool(np.all(p >= lo) and np.all(p <= hi))


def _in_triangle(p, a, b, c, tol):
    d1 = _cross2(a, b, p)
    d2 = _cross2(b, c, p)
    d3 = _cross2(c, a, p)
    if abs(_cross2(a, b, c)) <= tol:  # degenerate triple
        return False
    return (d1 >= -tol and d2 >= -tol and d3 >= -tol) or \
           (d1 <= tol and d2 <= tol and d3 <= tol)


def brute_hull_vertices_2d(points, tol=1e-9):
    """Hull vertex set by exhaustion: p is a vertex iff it is not inside
    the closed hull of the remaining points (triangle/segment tests over
    all triples)."""
    pts = np.asarray(points, dtype=float)
    verts = []
    for i, p in enumerate(pts):
        others = np.delete(pts, i, axis=0)
        covered = any(_on_segment(p, a, b, tol)
                      for a, b in itertools.combinations(others, 2))
        if not covered:
            covered = any(_in_triangle(p, a, b, c, tol)
                          for a, b, c in itertools.combinations(others, 3))
        if not covered:
            verts.append(p)
    verts = np.array(verts)
    return verts[np.lexsort(verts.T[::-1])]


def _in_tetra(p, a, b, c, d, tol):
    m = np.array([b - a, c - a, d - a])
    det = np.linalg.det(m)
    if abs(det) <= tol:
        return False
    lam = np.linalg.solve(m.T, p - a)
    return bool(np.all(lam >= -tol) and lam.sum() <= 1.0 + tol)


def _in_triangle_3d(p, a, b, c, tol):
    n = np.cross(b - a, c - a)
    nn = np.linalg.norm(n)
    if nn <= tol:
        return False
    if abs(np.dot(n / nn, p - a)) > tol:
        return False
    # barycentric in the plane
    v0, v1, v2 = b - a, c - a, p - a
    d00, d01, d11 = v0 @ v0, v0 @ v1, v1 @ v1
    d20, d21 = v2 @ v0, v2 @ v1
    den = d00 * d11 - d01 * d01
    u = (d11 * d20 - d01 * d21) / den
    v = (d00 * d21 - d01 * d20) / den
    return u >= -tol and v >= -tol and u + v <= 1.0 + tol


def brute_hull_vertices_3d(points, tol=1e-9):
    pts = np.asarray(points, dtype=float)
    verts = []
    for i, p in enumerate(pts):
        others = np.delete(pts, i, axis=0)
        covered = any(_on_segment_3d(p, a, b, tol)
                      for a, b in itertools.combinations(others, 2))
        if not covered:
            covered = any(_in_triangle_3d(p, a, b, c, tol)
                          for a, b, c in itertools.combinations(others, 3))
        if not covered:
            covered = any(_in_tetra(p, a, b, c, d, tol)
                          for a, b, c, d in itertools.combinations(others, 4))
        if not covered:
            verts.append(p)
    verts = np.array(verts)
    return verts[np.lexsort(verts.T[::-1])]


def _on_segment_3d(p, a, b, tol):
    d = b - a
    L2 = d @ d
    if L2 <= tol * tol:
        return False
    t = np.clip((p - a) @ d / L2, 0.0, 1.0)
    return bool(np.linalg.norm(a + t * d - p) <= tol)


def brute_facet_planes_2d(points, tol=1e-9):
    """Hull edges by orientation exhaustion: unit outward normals/offsets."""
    pts = np.asarray(points, dtype=float)
    planes = []
    for i, j in itertools.permutations(range(len(pts)), 2):
        a, b = pts[i], pts[j]
        if np.linalg.norm(b - a) <= tol:
            continue
        crosses = [_cross2(a, b, p) for k, p in enumerate(pts) if k not in (i, j)]
        if all(c <= tol for c in crosses):
            # interior lies right of the directed edge, so outward is its
            # left rotation
            d = b - a
            n = np.array([-d[1], d[0]]) / np.linalg.norm(d)
            planes.append((n, float(n @ a)))
    out = []
    for n, off in planes:
        if not any(np.linalg.norm(n - m) <= 1e-9 and abs(off - o) <= 1e-9 for m, o in out):
            out.append((n, off))
    return out


def boundary_cloud(domain, count):
    """Dense deterministic samples of a ball/shell/polytope boundary."""
    from tubecheck.geometry import Ball, HalfspacePolytope, Shell

    if isinstance(domain, Ball):
        th = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
        ring = np.stack([np.cos(th), np.sin(th)], axis=1)
        return domain.center + domain.radius * ring
    if isinstance(domain, Shell):
        th = np.linspace(0.0, 2.0 * np.pi, count // 2, endpoint=False)
        ring = np.stack([np.cos(th), np.sin(th)], axis=1)
        return np.vstack([domain.center + domain.inner_radius * ring,
                          domain.center + domain.outer_radius * ring])
    if isinstance(domain, HalfspacePolytope):
        verts = domain.vertices
        center = verts.mean(axis=0)
        ang = np.arctan2(verts[:, 1] - center[1], verts[:, 0] - center[0])
        ring = verts[np.argsort(ang)]
        per_edge = max(2, count // len(ring))
        ts = np.linspace(0.0, 1.0, per_edge, endpoint=False)
        segs = []
        for k in range(len(ring)):
            a, b = ring[k], ring[(k + 1) % len(ring)]
            segs.append(a[None, :] + ts[:, None] * (b - a)[None, :])
        return np.vstack(segs)
    raise TypeError(f"no boundary cloud for {type(domain)!r}")
