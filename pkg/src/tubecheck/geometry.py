"""Real base domains in R^n: membership, boundary distance, convex hulls.

Domains are open sets given in one of several explicit representations
(ball, shell, half-space polytope, union of polytopes, sampled oracle).
All membership tests are strict: points within ``INTERIOR_MARGIN`` of the
boundary are reported outside, so ties are deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DegenerateInput, OutsideDomain

# Open-set membership margin: anything closer to the boundary is "outside".
INTERIOR_MARGIN = 1e-12

# Half-width of the bounding box attached to unbounded domains, used for
# sampling only; exact predicates never consult it.
UNBOUNDED_BOX_HALFWIDTH = 1e3


def as_vector(coords, dim: int | None = None) -> np.ndarray:
    """Validate and return a finite float vector in R^n, 1 <= n <= 4."""
    x = np.asarray(coords, dtype=float)
    if x.ndim != 1 or not 1 <= x.size <= 4:
        raise ValueError(f"expected a vector in R^1..R^4, got shape {x.shape}")
    if dim is not None and x.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("vector coordinates must be finite")
    return x


# ---------------------------------------------------------------------------
# Domain representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size


@dataclass(frozen=True, eq=False)
class Shell:
    """Open shell inner_radius < |x - center| < outer_radius (outer may be inf)."""

    center: np.ndarray
    inner_radius: float
    outer_radius: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "center", as_vector(self.center))
        if not self.inner_radius > 0:
            raise ValueError("inner radius must be positive")
        if not self.inner_radius < self.outer_radius:
            raise ValueError("inner radius must be below outer radius")

    @property
    def dim(self) -> int:
        return self.center.size


@dataclass(frozen=True, eq=False)
class HalfspacePolytope:
    """Open convex polytope {x : normals @ x < offsets}, unit row normals.

    Vertices are enumerated exactly for n <= 3 when the polytope is bounded.
    """

    normals: np.ndarray
    offsets: np.ndarray
    vertices: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        offsets = np.asarray(self.offsets, dtype=float).ravel()
        if normals.shape[0] != offsets.size:
            raise ValueError("one offset per half-space required")
        norms = np.linalg.norm(normals, axis=1)
        if np.any(norms < 1e-300):
            raise ValueError("zero normal vector")
        normals = normals / norms[:, None]
        offsets = offsets / norms
        for i, j in itertools.combinations(range(len(offsets)), 2):
            if (np.linalg.norm(normals[i] - normals[j]) <= 1e-12
                    and abs(offsets[i] - offsets[j]) <= 1e-12):
                raise ValueError("duplicate half-spaces")
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)
        if self.vertices is None and normals.shape[1] <= 3:
            object.__setattr__(self, "vertices", _enumerate_vertices(normals, offsets))
        elif self.vertices is not None:
            object.__setattr__(self, "vertices", np.atleast_2d(np.asarray(self.vertices, float)))

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    @property
    def is_bounded(self) -> bool:
        # Bounded iff no recession direction: every unit d has some normal
        # with n.d > 0.  With vertices enumerated, bounded iff the vertex
        # set is nonempty and max vertex margin is attained (<= 3D only).
        v = self.vertices
        if v is None or len(v) == 0:
            return False
        return bool(_polytope_bounded(self.normals))


@dataclass(frozen=True, eq=False)
class PolytopeUnion:
    """Connected finite union of open convex polytopes (may be non-convex)."""

    parts: tuple[HalfspacePolytope, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("empty union")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise ValueError("mixed dimensions in union")
        object.__setattr__(self, "parts", parts)
        if not _union_connected(parts):
            raise ValueError("polytope union is not connected")
        if parts[0].dim == 2:
            object.__setattr__(self, "_boundary_segments", _union_boundary_segments_2d(parts))
        else:
            object.__setattr__(self, "_boundary_segments", None)

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    @property
    def boundary_segments(self) -> np.ndarray | None:
        """(m, 4) array of 2D boundary segments [ax, ay, bx, by], or None."""
        return self._boundary_segments


@dataclass(frozen=True, eq=False)
class SampledDomain:
    """Open set given only by a containment oracle plus a bounding box."""

    predicate: Callable[[np.ndarray], bool]
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", as_vector(self.lo))
        object.__setattr__(self, "hi", as_vector(self.hi, dim=self.lo.size))
        if not np.all(self.hi > self.lo):
            raise ValueError("empty bounding box")

    @property
    def dim(self) -> int:
        return self.lo.size


RealBaseDomain = Union[Ball, Shell, HalfspacePolytope, PolytopeUnion, SampledDomain]


def box_polytope(lo, hi) -> HalfspacePolytope:
    """Axis-aligned open box as a half-space polytope."""
    lo = as_vector(lo)
    hi = as_vector(hi, dim=lo.size)
    n = lo.size
    eye = np.eye(n)
    normals = np.vstack([eye, -eye])
    offsets = np.concatenate([hi, -lo])
    return HalfspacePolytope(normals, offsets)


# ---------------------------------------------------------------------------
# Membership and boundary distance
# ---------------------------------------------------------------------------


def contains(domain: RealBaseDomain, x) -> bool:
    """Strict open membership with the deterministic INTERIOR_MARGIN rule."""
    x = as_vector(x, dim=domain.dim)
    if isinstance(domain, Ball):
        return domain.radius - float(np.linalg.norm(x - domain.center)) >= INTERIOR_MARGIN
    if isinstance(domain, Shell):
        r = float(np.linalg.norm(x - domain.center))
        inner = r - domain.inner_radius
        outer = domain.outer_radius - r if math.isfinite(domain.outer_radius) else math.inf
        return min(inner, outer) >= INTERIOR_MARGIN
    if isinstance(domain, HalfspacePolytope):
        return float(np.min(domain.offsets - domain.normals @ x)) >= INTERIOR_MARGIN
    if isinstance(domain, PolytopeUnion):
        return any(contains(p, x) for p in domain.parts)
    if isinstance(domain, SampledDomain):
        return bool(np.all(x > domain.lo) and np.all(x < domain.hi) and domain.predicate(x))
    raise TypeError(f"unsupported domain type {type(domain)!r}")


def contains_many(domain: RealBaseDomain, X: np.ndarray) -> np.ndarray:
    """Vectorized strict membership for an (m, n) array of points."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if isinstance(domain, Ball):
        return domain.radius - np.linalg.norm(X - domain.center, axis=1) >= INTERIOR_MARGIN
    if isinstance(domain, Shell):
        r = np.linalg.norm(X - domain.center, axis=1)
        ok = r - domain.inner_radius >= INTERIOR_MARGIN
        if math.isfinite(domain.outer_radius):
            ok &= domain.outer_radius - r >= INTERIOR_MARGIN
        return ok
    if isinstance(domain, HalfspacePolytope):
        return np.min(domain.offsets[None, :] - X @ domain.normals.T, axis=1) >= INTERIOR_MARGIN
    if isinstance(domain, PolytopeUnion):
        out = np.zeros(len(X), dtype=bool)
        for p in domain.parts:
            out |= contains_many(p, X)
        return out
    return np.array([contains(domain, x) for x in X])


def real_boundary_distance(domain: RealBaseDomain, x) -> float:
    """Euclidean distance from an interior point to the domain boundary.

    Closed form for balls, shells and convex polytopes.  Unions in the
    plane use the exact clipped boundary segments; 3D unions and sampled
    domains use a directional exit-distance estimate (relative error
    below 1e-3 at the default direction counts).
    """
    x = as_vector(x, dim=domain.dim)
    if not contains(domain, x):
        raise OutsideDomain(f"point {x.tolist()} is not interior")
    if isinstance(domain, Ball):
        return domain.radius - float(np.linalg.norm(x - domain.center))
    if isinstance(domain, Shell):
        r = float(np.linalg.norm(x - domain.center))
        if math.isfinite(domain.outer_radius):
            return min(r - domain.inner_radius, domain.outer_radius - r)
        return r - domain.inner_radius
    if isinstance(domain, HalfspacePolytope):
        return float(np.min(domain.offsets - domain.normals @ x))
    if isinstance(domain, PolytopeUnion):
        if domain.dim == 2:
            return float(np.min(_segment_distances(domain.boundary_segments, x[None, :])))
        return _ray_exit_distance(domain, x)
    if isinstance(domain, SampledDomain):
        return _ray_exit_distance(domain, x)
    raise TypeError(f"unsupported domain type {type(domain)!r}")


def bounding_box(domain: RealBaseDomain) -> tuple[np.ndarray, np.ndarray]:
    """Sampling box around the domain (finite even for unbounded sets)."""
    if isinstance(domain, Ball):
        return domain.center - domain.radius, domain.center + domain.radius
    if isinstance(domain, Shell):
        r = domain.outer_radius
        if not math.isfinite(r):
            r = UNBOUNDED_BOX_HALFWIDTH
        return domain.center - r, domain.center + r
    if isinstance(domain, HalfspacePolytope):
        if domain.vertices is not None and len(domain.vertices) and domain.is_bounded:
            return domain.vertices.min(axis=0), domain.vertices.max(axis=0)
        n = domain.dim
        return -np.full(n, UNBOUNDED_BOX_HALFWIDTH), np.full(n, UNBOUNDED_BOX_HALFWIDTH)
    if isinstance(domain, PolytopeUnion):
        boxes = [bounding_box(p) for p in domain.parts]
        lo = np.min([b[0] for b in boxes], axis=0)
        hi = np.max([b[1] for b in boxes], axis=0)
        return lo, hi
    if isinstance(domain, SampledDomain):
        return domain.lo.copy(), domain.hi.copy()
    raise TypeError(f"unsupported domain type {type(domain)!r}")


def sample_members(domain: RealBaseDomain, count: int, rng: np.random.Generator,
                   margin: float = 0.0, max_tries: int = 10_000_000) -> np.ndarray:
    """Rejection-sample `count` interior points (optionally with a distance floor)."""
    lo, hi = bounding_box(domain)
    out = np.empty((count, domain.dim))
    got = 0
    tries = 0
    while got < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("rejection sampling failed to find interior points")
        x = rng.uniform(lo, hi)
        if not contains(domain, x):
            continue
        if margin > 0.0 and real_boundary_distance(domain, x) < margin:
            continue
        out[got] = x
        got += 1
    return out


# ---------------------------------------------------------------------------
# Convex hulls (exact for n <= 3)
# ---------------------------------------------------------------------------


def convex_hull(points, dim: int | None = None) -> HalfspacePolytope:
    """Convex hull of a point set as a half-space polytope with vertex cache.

    2D uses the monotone chain, 3D an incremental insertion with
    lexicographic ordering; coincident points within 1e-12 are merged.
    Raises DegenerateInput when the points are affinely dependent.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if dim is None:
        dim = pts.shape[1]
    if pts.shape[1] != dim:
        raise ValueError("point dimension mismatch")
    if dim > 3:
        raise ValueError("exact hulls are limited to n <= 3")
    pts = _merge_close_points(pts)
    if len(pts) < dim + 1 or _affine_rank(pts) < dim:
        raise DegenerateInput("points are affinely dependent")
    if dim == 1:
        lo, hi = float(pts.min()), float(pts.max())
        poly = HalfspacePolytope(np.array([[1.0], [-1.0]]), np.array([hi, -lo]),
                                 vertices=np.array([[lo], [hi]]))
    elif dim == 2:
        poly = _hull_2d(pts)
    else:
        poly = _hull_3d(pts)
    slack = poly.offsets[None, :] - pts @ poly.normals.T
    if slack.min() < -1e-12 * max(1.0, float(np.abs(pts).max())):
        raise AssertionError("hull post-condition violated: input point outside hull")
    return poly


def same_halfspace_sets(a: HalfspacePolytope, b: HalfspacePolytope, tol: float = 1e-12) -> bool:
    """Half-space sets equal up to ordering and `tol` (unit normals assumed)."""
    if a.normals.shape != b.normals.shape:
        return False
    used = set()
    for i in range(len(a.offsets)):
        hit = None
        for j in range(len(b.offsets)):
            if j in used:
                continue
            if (np.linalg.norm(a.normals[i] - b.normals[j]) <= tol
                    and abs(a.offsets[i] - b.offsets[j]) <= tol):
                hit = j
                break
        if hit is None:
            return False
        used.add(hit)
    return True


def _merge_close_points(pts: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    order = np.lexsort(pts.T[::-1])
    pts = pts[order]
    keep: list[np.ndarray] = []
    for p in pts:
        dup = False
        for q in reversed(keep):
            if p[0] - q[0] > tol:
                break
            if np.linalg.norm(p - q) <= tol:
                dup = True
                break
        if not dup:
            keep.append(p)
    return np.array(keep)


def _affine_rank(pts: np.ndarray) -> int:
    d = pts[1:] - pts[0]
    if len(d) == 0:
        return 0
    scale = max(1.0, float(np.abs(d).max()))
    s = np.linalg.svd(d / scale, compute_uv=False)
    return int(np.sum(s > 1e-10))


def _hull_2d(pts: np.ndarray) -> HalfspacePolytope:
    # Monotone chain on lexicographically sorted points; strictly convex
    # output (collinear boundary midpoints dropped).
    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 1e-12:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 1e-12:
            upper.pop()
        upper.append(p)
    verts = np.array(lower[:-1] + upper[:-1])  # counter-clockwise
    verts = _prune_collinear_ring(verts)
    edges = np.roll(verts, -1, axis=0) - verts
    normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    offsets = np.einsum("ij,ij->i", normals, verts)
    return HalfspacePolytope(normals, offsets, vertices=verts)


def _prune_collinear_ring(verts: np.ndarray) -> np.ndarray:
    # the chains can retain sub-tolerance collinear corners in adversarial
    # inputs; those would triangulate one line into two "distinct" edges
    scale = max(1.0, float(np.abs(verts).max()))
    tol = 1e-12 * scale * scale
    while len(verts) > 3:
        m = len(verts)
        drop = None
        for i in range(m):
            a, b, c = verts[(i - 1) % m], verts[i], verts[(i + 1) % m]
            if abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) <= tol:
                drop = i
                break
        if drop is None:
            break
        verts = np.delete(verts, drop, axis=0)
    return verts


def _hull_3d(pts: np.ndarray) -> HalfspacePolytope:
    scale = max(1.0, float(np.abs(pts).max()))
    eps = 1e-12 * scale

    # Initial simplex: first four affinely independent points in lex order.
    i0, i1 = 0, 1
    i2 = next(i for i in range(2, len(pts))
              if np.linalg.norm(np.cross(pts[i1] - pts[i0], pts[i] - pts[i0])) > eps)
    normal0 = np.cross(pts[i1] - pts[i0], pts[i2] - pts[i0])
    i3 = next(i for i in range(2, len(pts))
              if i != i2 and abs(normal0 @ (pts[i] - pts[i0])) > eps)
    interior = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0

    def make_facet(a, b, c):
        n = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        nn = np.linalg.norm(n)
        if nn <= eps:
            return None
        n = n / nn
        off = float(n @ pts[a])
        if n @ interior > off:
            a, b, c = a, c, b
            n, off = -n, float(-n @ pts[a])
        return (a, b, c), n, off

    facets = []
    for tri in itertools.combinations((i0, i1, i2, i3), 3):
        f = make_facet(*tri)
        assert f is not None
        facets.append(f)

    for idx in range(len(pts)):
        if idx in (i0, i1, i2, i3):
            continue
        p = pts[idx]
        visible = [k for k, (_, n, off) in enumerate(facets) if n @ p - off > eps]
        if not visible:
            continue
        edge_count: dict[tuple[int, int], int] = {}
        for k in visible:
            (a, b, c), _, _ = facets[k]
            for e in ((a, b), (b, c), (c, a)):
                key = (min(e), max(e))
                edge_count[key] = edge_count.get(key, 0) + 1
        horizon = [e for e, cnt in edge_count.items() if cnt == 1]
        facets = [f for k, f in enumerate(facets) if k not in set(visible)]
        for a, b in horizon:
            f = make_facet(a, b, idx)
            if f is not None:
                facets.append(f)

    # Merge coplanar (triangulated) facets into one half-space per plane.
    plane_normals: list[np.ndarray] = []
    plane_offsets: list[float] = []
    for _, n, off in facets:
        dup = any(np.linalg.norm(n - pn) <= 1e-10 and abs(off - po) <= 1e-10 * scale
                  for pn, po in zip(plane_normals, plane_offsets))
        if not dup:
            plane_normals.append(n)
            plane_offsets.append(off)
    normals = np.array(plane_normals)
    offsets = np.array(plane_offsets)

    # Hull vertices: facet corners incident to >= 3 distinct planes.
    corner_ids = sorted({i for (tri, _, _) in facets for i in tri})
    verts = []
    for i in corner_ids:
        on = np.abs(normals @ pts[i] - offsets) <= 1e-9 * scale
        if int(on.sum()) >= 3:
            verts.append(pts[i])
    verts = np.array(verts)
    verts = verts[np.lexsort(verts.T[::-1])]
    return HalfspacePolytope(normals, offsets, vertices=verts)


def _enumerate_vertices(normals: np.ndarray, offsets: np.ndarray) -> np.ndarray | None:
    """Exact vertex enumeration from half-spaces, n <= 3."""
    n = normals.shape[1]
    if n > 3 or len(offsets) < n:
        return None
    verts = []
    for idx in itertools.combinations(range(len(offsets)), n):
        a = normals[list(idx)]
        if abs(np.linalg.det(a)) < 1e-12:
            continue
        v = np.linalg.solve(a, offsets[list(idx)])
        if np.all(normals @ v - offsets <= 1e-12 * max(1.0, float(np.abs(v).max()))):
            verts.append(v)
    if not verts:
        return np.empty((0, n))
    out = _merge_close_points(np.array(verts), tol=1e-9)
    return out


def _polytope_bounded(normals: np.ndarray) -> bool:
    # Bounded iff the origin is interior to the convex hull of the normals,
    # i.e. no unit direction d satisfies n.d <= 0 for every normal.
    n = normals.shape[1]
    if len(normals) < n + 1:
        return False
    dirs = _direction_grid(n, 4096 if n == 3 else 1024)
    margins = normals @ dirs.T
    return bool(np.all(margins.max(axis=0) > 1e-9))


def _direction_grid(n: int, count: int) -> np.ndarray:
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        th = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    if n == 3:
        # Fibonacci sphere
        k = np.arange(count) + 0.5
        phi = math.pi * (1.0 + math.sqrt(5.0)) * k
        z = 1.0 - 2.0 * k / count
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    rng = np.random.default_rng(0)
    d = rng.standard_normal((count, n))
    return d / np.linalg.norm(d, axis=1)[:, None]


# ---------------------------------------------------------------------------
# Union helpers
# ---------------------------------------------------------------------------


def _union_connected(parts: Sequence[HalfspacePolytope]) -> bool:
    # Pairwise open-overlap probing on a grid over the intersection boxes;
    # connectivity is then a union-find over the overlap graph.
    k = len(parts)
    if k == 1:
        return True
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    boxes = [bounding_box(p) for p in parts]
    grid_side = max(2, int(round(10_000 ** (1.0 / parts[0].dim))))
    for i, j in itertools.combinations(range(k), 2):
        lo = np.maximum(boxes[i][0], boxes[j][0])
        hi = np.minimum(boxes[i][1], boxes[j][1])
        if np.any(hi <= lo):
            continue
        axes = [np.linspace(lo[d], hi[d], grid_side) for d in range(parts[0].dim)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, parts[0].dim)
        in_i = np.all(grid @ parts[i].normals.T < parts[i].offsets - INTERIOR_MARGIN, axis=1)
        in_j = np.all(grid @ parts[j].normals.T < parts[j].offsets - INTERIOR_MARGIN, axis=1)
        if np.any(in_i & in_j):
            parent[find(i)] = find(j)
    return len({find(i) for i in range(k)}) == 1


def _polygon_edges(poly: HalfspacePolytope) -> list[tuple[np.ndarray, np.ndarray]]:
    verts = poly.vertices
    center = verts.mean(axis=0)
    ang = np.arctan2(verts[:, 1] - center[1], verts[:, 0] - center[0])
    order = np.argsort(ang)
    ring = verts[order]
    return [(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]


def _union_boundary_segments_2d(parts: Sequence[HalfspacePolytope]) -> np.ndarray:
    """Exact boundary of a 2D union: part edges minus their open overlaps."""
    segs = []
    for i, poly in enumerate(parts):
        for a, b in _polygon_edges(poly):
            covered: list[tuple[float, float]] = []
            d = b - a
            for j, other in enumerate(parts):
                if j == i:
                    continue
                # interval of t where a + t d is interior to `other`
                t_lo, t_hi = 0.0, 1.0
                ok = True
                for n_vec, off in zip(other.normals, other.offsets):
                    sl = float(n_vec @ d)
                    rhs = off - float(n_vec @ a)
                    if abs(sl) < 1e-15:
                        if rhs <= 0.0:
                            ok = False
                            break
                    elif sl > 0:
                        t_hi = min(t_hi, rhs / sl)
                    else:
                        t_lo = max(t_lo, rhs / sl)
                if ok and t_lo < t_hi:
                    covered.append((t_lo, t_hi))
            covered.sort()
            cur = 0.0
            for lo, hi in covered:
                if lo > cur + 1e-15:
                    segs.append((a + cur * d, a + min(lo, 1.0) * d))
                cur = max(cur, hi)
                if cur >= 1.0:
                    break
            if cur < 1.0 - 1e-15:
                segs.append((a + cur * d, b))
    flat = np.array([[s[0][0], s[0][1], s[1][0], s[1][1]] for s in segs])
    keep = np.hypot(flat[:, 2] - flat[:, 0], flat[:, 3] - flat[:, 1]) > 1e-14
    return flat[keep]


def _segment_distances(segs: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Min distance from each row of X (m,2) to a set of segments (s,4)."""
    a = segs[None, :, 0:2]
    b = segs[None, :, 2:4]
    d = b - a
    pa = X[:, None, :] - a
    denom = np.einsum("ijk,ijk->ij", d, d)
    t = np.clip(np.einsum("ijk,ijk->ij", pa, d) / denom, 0.0, 1.0)
    proj = a + t[:, :, None] * d
    dist = np.linalg.norm(X[:, None, :] - proj, axis=2)
    return dist.min(axis=1)


def _ray_exit_distance(domain, x: np.ndarray) -> float:
    """Directional exit-distance estimate of the boundary distance.

    Exact along each ray for polytope unions (interval sweep); bracketed
    bisection against the oracle for sampled domains.  The direction grid
    keeps the relative overestimate below 1e-3.
    """
    n = x.size
    dirs = _direction_grid(n, 8192 if n == 3 else 1024)
    best = math.inf
    if isinstance(domain, PolytopeUnion):
        for d in dirs:
            best = min(best, _union_ray_exit(domain.parts, x, d))
        return best
    lo_box, hi_box = bounding_box(domain)
    diag = float(np.linalg.norm(hi_box - lo_box))
    for d in dirs:
        best = min(best, _oracle_ray_exit(domain, x, d, diag))
    return best


def _union_ray_exit(parts, x, d) -> float:
    intervals = []
    for p in parts:
        t_lo, t_hi = -math.inf, math.inf
        ok = True
        for n_vec, off in zip(p.normals, p.offsets):
            sl = float(n_vec @ d)
            rhs = off - float(n_vec @ x)
            if abs(sl) < 1e-15:
                if rhs <= 0.0:
                    ok = False
                    break
            elif sl > 0:
                t_hi = min(t_hi, rhs / sl)
            else:
                t_lo = max(t_lo, rhs / sl)
        if ok and t_lo < t_hi:
            intervals.append((t_lo, t_hi))
    intervals.sort()
    cur = 0.0
    progressing = True
    while progressing:
        progressing = False
        for lo, hi in intervals:
            if lo < cur < hi and hi > cur:
                cur = hi
                progressing = True
    return cur


def _oracle_ray_exit(domain, x, d, diag) -> float:
    step = diag / 64.0
    t_in = 0.0
    t_out = None
    t = step
    while t <= diag:
        if contains(domain, x + t * d):
            t_in = t
        else:
            t_out = t
            break
        t += step
    if t_out is None:
        return t_in
    for _ in range(40):
        mid = 0.5 * (t_in + t_out)
        if contains(domain, x + mid * d):
            t_in = mid
        else:
            t_out = mid
    return 0.5 * (t_in + t_out)
