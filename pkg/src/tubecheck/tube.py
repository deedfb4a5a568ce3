"""Tube-type complex domains, boundary-distance oracles and Levi checks.

A tube is base + i*fiber with the base a (possibly sheeted) real domain
and the fiber either all of R^n or a ball.  Points of univalent tubes are
complex vectors z = x + iy; points of sheeted tubes are pairs
(sheet point, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import geometry, kernels, sheeted
from .errors import OutsideDomain, StencilOutOfDomain
from .geometry import Ball, HalfspacePolytope, PolytopeUnion, RealBaseDomain, SampledDomain, Shell

DEFAULT_LEVI_TOL = 1e-3
DEFAULT_DIRECTIONS = 64
DEFAULT_SAMPLER_MARGIN = 0.05
BISECTION_ITERATIONS = 48


@dataclass(frozen=True, eq=False)
class FullSpace:
    dim: int


Fiber = Union[FullSpace, Ball]


@dataclass(frozen=True, eq=False)
class TubeDomain:
    base: Union[RealBaseDomain, sheeted.SheetedRealDomain]
    fiber: Fiber

    def __post_init__(self):
        if self.base.dim != self.fiber.dim:
            raise ValueError("base and fiber dimensions differ")

    @property
    def dim(self) -> int:
        return self.fiber.dim

    @property
    def sheeted_base(self) -> bool:
        return isinstance(self.base, (sheeted.FiniteCover, sheeted.UniversalCover))


def tube(base, fiber=None) -> TubeDomain:
    """Tube over `base`; full imaginary fiber unless one is given."""
    if fiber is None:
        fiber = FullSpace(base.dim)
    return TubeDomain(base, fiber)


def as_complex_point(z, dim: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.shape != (dim,):
        raise ValueError(f"expected a complex point in C^{dim}")
    if not np.all(np.isfinite(z.real)) or not np.all(np.isfinite(z.imag)):
        raise ValueError("complex point must be finite")
    return z


def _fiber_contains(fiber: Fiber, y: np.ndarray) -> bool:
    if isinstance(fiber, FullSpace):
        return bool(np.all(np.isfinite(y)))
    return geometry.contains(fiber, y)


def _fiber_distance(fiber: Fiber, y: np.ndarray) -> float:
    if isinstance(fiber, FullSpace):
        return math.inf
    return fiber.radius - float(np.linalg.norm(y - fiber.center))


def tube_contains(dom: TubeDomain, z) -> bool:
    if dom.sheeted_base:
        pt, y = z
        return sheeted.contains_point(dom.base, pt) and _fiber_contains(dom.fiber, np.asarray(y, float))
    z = as_complex_point(z, dom.dim)
    base = dom.base.base if isinstance(dom.base, sheeted.Univalent) else dom.base
    return geometry.contains(base, z.real) and _fiber_contains(dom.fiber, z.imag)


def _kernel_pack(base, fiber):
    """Packed kernel description for closed-form univalent tubes, or None."""
    if isinstance(base, sheeted.Univalent):
        base = base.base
    if isinstance(base, Ball):
        kb = (kernels.BASE_BALL, base.center[None, :].copy(), np.array([base.radius]))
    elif isinstance(base, Shell):
        kb = (kernels.BASE_SHELL, base.center[None, :].copy(),
              np.array([base.inner_radius, base.outer_radius]))
    elif isinstance(base, HalfspacePolytope):
        kb = (kernels.BASE_POLY, base.normals.copy(), base.offsets.copy())
    elif isinstance(base, PolytopeUnion) and base.dim == 2:
        kb = (kernels.BASE_SEGS, base.boundary_segments.copy(), np.empty(0))
    else:
        return None
    if isinstance(fiber, FullSpace):
        kf = (kernels.FIBER_FULL, np.zeros(fiber.dim), math.inf)
    else:
        kf = (kernels.FIBER_BALL, fiber.center.copy(), fiber.radius)
    return kb + kf


class BoundaryDistanceOracle:
    """Boundary distance of a tube domain, Euclidean or polydisc flavored.

    Univalent product tubes reduce to min(dist(x, bd X), dist(y, bd Y)).
    Sheeted tubes are handled by bisection against a univalent-lift
    predicate (ball inside the projected domain and free of sheet
    collisions).
    """

    def __init__(self, domain: TubeDomain, mode: str = "euclidean"):
        if mode not in ("euclidean", "polydisc"):
            raise ValueError("mode must be 'euclidean' or 'polydisc'")
        self.domain = domain
        self.mode = mode
        self._pack = _kernel_pack(domain.base, domain.fiber) if mode == "euclidean" else None

    # -- scalar interface ---------------------------------------------------

    def __call__(self, z) -> float:
        return self.distance(z)

    def distance(self, z) -> float:
        if not tube_contains(self.domain, z):
            raise OutsideDomain("point not in the tube domain")
        if self.domain.sheeted_base:
            return self._sheeted_distance(z)
        z = as_complex_point(z, self.domain.dim)
        if self.mode == "polydisc":
            return self._polydisc_distance(z)
        if self._pack is not None:
            return float(kernels.tube_delta(*self._pack, z.real[None, :], z.imag[None, :])[0])
        base = self.domain.base.base if isinstance(self.domain.base, sheeted.Univalent) else self.domain.base
        return min(geometry.real_boundary_distance(base, z.real),
                   _fiber_distance(self.domain.fiber, z.imag))

    def neg_log(self, z) -> float:
        return -math.log(self.distance(z))

    def contains(self, z) -> bool:
        return tube_contains(self.domain, z)

    # -- batch interface (univalent tubes) ----------------------------------

    def distance_xy(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        """delta for rows of (X, Y); members are the caller's responsibility."""
        if self.domain.sheeted_base or self.mode != "euclidean":
            raise ValueError("batch distances need a univalent euclidean oracle")
        if self._pack is not None:
            return kernels.tube_delta(*self._pack, X, Y)
        base = self.domain.base.base if isinstance(self.domain.base, sheeted.Univalent) else self.domain.base
        d = np.array([geometry.real_boundary_distance(base, x) for x in np.atleast_2d(X)])
        if isinstance(self.domain.fiber, Ball):
            df = self.domain.fiber.radius - np.linalg.norm(np.atleast_2d(Y) - self.domain.fiber.center, axis=1)
            d = np.minimum(d, df)
        return d

    def levi_scan(self, z, h: float, wre: np.ndarray, wim: np.ndarray):
        """Min finite-difference Levi quotient of -log delta over directions."""
        z = as_complex_point(z, self.domain.dim)
        if self._pack is not None and not self.domain.sheeted_base:
            val, idx = kernels.levi_min_scan(*self._pack, z.real, z.imag, wre, wim, h)
            if math.isnan(val):
                raise StencilOutOfDomain("stencil left the tube domain")
            return val, idx
        return _levi_scan_callable(self.neg_log, z, h, wre, wim)

    # -- internals -----------------------------------------------------------

    def _sheeted_distance(self, z) -> float:
        pt, y = z
        y = np.asarray(y, dtype=float)
        cover = self.domain.base
        shell = cover.shell
        x = sheeted.project_point(cover, pt)
        r = float(np.linalg.norm(x))
        d_base = geometry.real_boundary_distance(shell, x)
        d_fiber = _fiber_distance(self.domain.fiber, y)
        # A collision appears once the base ball is wide enough to loop
        # around the shell hole: r > |x| + inner_radius.  For full covers of
        # a shell this never undercuts the product distance; the bisection
        # is kept for the contract (48 iterations, ~1e-14 on unit scale).
        collide_at = r + shell.inner_radius

        def good(rad: float) -> bool:
            return rad <= d_base and rad <= d_fiber and rad <= collide_at

        hi = d_base + collide_at + 1.0
        if isinstance(self.domain.fiber, Ball):
            hi = min(hi, d_fiber + collide_at + 1.0)
        lo = 0.0
        for _ in range(BISECTION_ITERATIONS):
            mid = 0.5 * (lo + hi)
            if good(mid):
                lo = mid
            else:
                hi = mid
        return lo

    def _polydisc_distance(self, z: np.ndarray) -> float:
        base = self.domain.base.base if isinstance(self.domain.base, sheeted.Univalent) else self.domain.base
        db = _polydisc_base_distance(base, z.real)
        if isinstance(self.domain.fiber, FullSpace):
            return db
        return min(db, _polydisc_ball_radius(self.domain.fiber, z.imag))


def _polydisc_base_distance(base, x: np.ndarray) -> float:
    if isinstance(base, HalfspacePolytope):
        l1 = np.abs(base.normals).sum(axis=1)
        return float(np.min((base.offsets - base.normals @ x) / l1))
    if isinstance(base, Ball):
        return _polydisc_ball_radius(base, x)
    if isinstance(base, Shell):
        # box must stay outside the inner ball and inside the outer one
        def ok(r: float) -> bool:
            nearest = np.linalg.norm(np.maximum(np.abs(x - base.center) - r, 0.0))
            farthest = _box_far_norm(x - base.center, r)
            inner_ok = nearest >= base.inner_radius
            outer_ok = (not math.isfinite(base.outer_radius)) or farthest <= base.outer_radius
            return inner_ok and outer_ok

        return _grow_box(ok, max(1.0, float(np.linalg.norm(x - base.center))) + base.inner_radius)
    raise ValueError("polydisc distance implemented for ball/shell/polytope bases")


def _box_far_norm(v: np.ndarray, r: float) -> float:
    return float(np.linalg.norm(np.abs(v) + r))


def _polydisc_ball_radius(ball: Ball, p: np.ndarray) -> float:
    def ok(r: float) -> bool:
        return _box_far_norm(p - ball.center, r) <= ball.radius

    return _grow_box(ok, ball.radius)


def _grow_box(ok: Callable[[float], bool], hi: float) -> float:
    lo = 0.0
    hi = max(hi, 1e-6)
    while ok(hi):
        hi *= 2.0
        if hi > 1e9:
            return hi
    for _ in range(BISECTION_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# Levi form
# ---------------------------------------------------------------------------


def default_step(z) -> float:
    """Finite-difference step: max(1e-4, 1e-5 (1 + |z|))."""
    return max(1e-4, 1e-5 * (1.0 + float(np.linalg.norm(np.asarray(z)))))


def unit_directions(n: int, count: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """2n coordinate directions plus `count` seeded pseudo-random unit ones.

    Returned as (real parts, imaginary parts), each of shape (2n+count, n).
    """
    axes_re = np.vstack([np.eye(n), np.zeros((n, n))])
    axes_im = np.vstack([np.zeros((n, n)), np.eye(n)])
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((count, 2 * n))
    raw /= np.linalg.norm(raw, axis=1)[:, None]
    wre = np.vstack([axes_re, raw[:, :n]])
    wim = np.vstack([axes_im, raw[:, n:]])
    return wre, wim


def _levi_scan_callable(phi: Callable, z: np.ndarray, h: float,
                        wre: np.ndarray, wim: np.ndarray):
    try:
        phi0 = phi(z)
    except OutsideDomain as exc:
        raise StencilOutOfDomain(str(exc)) from exc
    best = math.inf
    best_idx = -1
    for j in range(wre.shape[0]):
        w = wre[j] + 1j * wim[j]
        try:
            quad = (phi(z + h * w) + phi(z - h * w)
                    + phi(z + 1j * h * w) + phi(z - 1j * h * w))
        except OutsideDomain as exc:
            raise StencilOutOfDomain(str(exc)) from exc
        val = (quad - 4.0 * phi0) / (4.0 * h * h)
        if val < best:
            best = val
            best_idx = j
    return best, best_idx


def levi_min_eigenvalue(phi: Callable, z, step: float,
                        directions: int = DEFAULT_DIRECTIONS, seed: int = 0) -> float:
    """Min sampled Levi quotient of `phi` at z.

    phi is any real-valued function of a complex vector; the quotient per
    unit direction w is (phi(z+hw)+phi(z-hw)+phi(z+ihw)+phi(z-ihw)-4phi(z))
    / (4 h^2), minimized over the 2n axis directions plus `directions`
    seeded random ones.
    """
    z = np.asarray(z, dtype=complex)
    wre, wim = unit_directions(z.size, directions, seed)
    val, _ = _levi_scan_callable(phi, z, step, wre, wim)
    return val


# ---------------------------------------------------------------------------
# Samplers and the plurisubharmonicity check
# ---------------------------------------------------------------------------


class RandomTubeSampler:
    """Seeded rejection sampler of interior tube points with a margin floor.

    The margin keeps every finite-difference stencil interior and bounds
    the O(h^2 / delta^4) truncation noise of the Levi quotient.
    """

    def __init__(self, domain: TubeDomain, seed: int,
                 margin: float = DEFAULT_SAMPLER_MARGIN, imag_halfwidth: float = 0.5):
        base = domain.base.base if isinstance(domain.base, sheeted.Univalent) else domain.base
        if not isinstance(base, (Ball, Shell, HalfspacePolytope, PolytopeUnion, SampledDomain)):
            raise ValueError("random sampling needs a univalent base")
        self.domain = domain
        self.base = base
        self.seed = seed
        self.margin = margin
        self.imag_halfwidth = imag_halfwidth
        self._rng = np.random.default_rng(seed)

    def draw(self) -> np.ndarray:
        x = geometry.sample_members(self.base, 1, self._rng, margin=self.margin)[0]
        fiber = self.domain.fiber
        if isinstance(fiber, FullSpace):
            y = self._rng.uniform(-self.imag_halfwidth, self.imag_halfwidth, size=fiber.dim)
        else:
            while True:
                y = self._rng.uniform(fiber.center - fiber.radius,
                                      fiber.center + fiber.radius)
                if fiber.radius - np.linalg.norm(y - fiber.center) >= self.margin:
                    break
        return x + 1j * y


class GridTubeSampler:
    """Deterministic raster of interior points (x grid, fixed y)."""

    def __init__(self, domain: TubeDomain, per_axis: int = 100,
                 margin: float = DEFAULT_SAMPLER_MARGIN, y_value=None):
        base = domain.base.base if isinstance(domain.base, sheeted.Univalent) else domain.base
        self.domain = domain
        self.seed = 0
        lo, hi = geometry.bounding_box(base)
        axes = [np.linspace(lo[d], hi[d], per_axis) for d in range(base.dim)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, base.dim)
        inside = geometry.contains_many(base, grid)
        pts = grid[inside]
        keep = np.array([geometry.real_boundary_distance(base, x) >= margin for x in pts])
        pts = pts[keep]
        if y_value is None:
            y_value = np.zeros(base.dim) if isinstance(domain.fiber, FullSpace) else domain.fiber.center
        self.points = pts + 1j * np.asarray(y_value, dtype=float)
        self._next = 0

    def __len__(self) -> int:
        return len(self.points)

    def reset(self) -> None:
        self._next = 0

    def draw(self) -> np.ndarray:
        if self._next >= len(self.points):
            raise IndexError("grid exhausted")
        z = self.points[self._next]
        self._next += 1
        return z


@dataclass(frozen=True)
class PshReport:
    """Outcome of a sampled plurisubharmonicity check of -log delta."""

    sample_count: int
    min_levi: float
    worst_point: np.ndarray
    worst_direction: np.ndarray
    verdict: str  # "pass" | "fail"
    tol: float
    seed: int
    inconclusive: bool

    def to_payload(self) -> dict:
        return {
            "samples": self.sample_count,
            "min_levi": self.min_levi,
            "worst_point": {"re": self.worst_point.real.tolist(),
                            "im": self.worst_point.imag.tolist()},
            "worst_direction": {"re": self.worst_direction.real.tolist(),
                                "im": self.worst_direction.imag.tolist()},
            "verdict": self.verdict,
            "tol": self.tol,
            "seed": self.seed,
            "inconclusive": self.inconclusive,
        }


def psh_check(oracle: BoundaryDistanceOracle, sampler, count: int | None,
              tol: float = DEFAULT_LEVI_TOL, step: float | None = None,
              directions: int = DEFAULT_DIRECTIONS, max_retries: int = 10) -> PshReport:
    """Aggregate the min Levi quotient of -log delta over sampled points.

    Verdict is "pass" iff the minimum stays above -tol.  Stencil escapes
    are retried up to `max_retries` per point, then raised.  A grid
    sampler caps the count at its raster size (count=None takes it all).
    """
    n = oracle.domain.dim
    seed = getattr(sampler, "seed", 0)
    wre, wim = unit_directions(n, directions, seed)
    dirs = wre + 1j * wim
    if isinstance(sampler, GridTubeSampler):
        sampler.reset()
        count = min(count, len(sampler)) if count else len(sampler)
    best = math.inf
    worst_point = np.zeros(n, dtype=complex)
    worst_dir = np.zeros(n, dtype=complex)
    for _ in range(count):
        for attempt in range(max_retries + 1):
            z = sampler.draw()
            h = step if step is not None else default_step(z)
            try:
                val, idx = oracle.levi_scan(z, h, wre, wim)
            except StencilOutOfDomain:
                if attempt == max_retries:
                    raise
                continue
            break
        if val < best:
            best = val
            worst_point = z
            worst_dir = dirs[idx]
    verdict = "pass" if best >= -tol else "fail"
    return PshReport(count, best, worst_point, worst_dir, verdict, tol, seed,
                     inconclusive=abs(best) < tol)


# ---------------------------------------------------------------------------
# Translation invariance and segment principles
# ---------------------------------------------------------------------------


def imaginary_invariance_check(oracle: BoundaryDistanceOracle, z, shifts) -> float:
    """Max |delta(z + iy) - delta(z)| over the given imaginary shifts."""
    z = as_complex_point(z, oracle.domain.dim)
    d0 = oracle.distance(z)
    dev = 0.0
    for y in shifts:
        y = geometry.as_vector(y, dim=oracle.domain.dim)
        dev = max(dev, abs(oracle.distance(z + 1j * y) - d0))
    return dev


@dataclass(frozen=True)
class SegmentScan:
    min_on_segment: float
    min_at_endpoints: float
    slack: float


def _segment_y(oracle: BoundaryDistanceOracle, y) -> np.ndarray:
    if y is not None:
        return geometry.as_vector(y, dim=oracle.domain.dim)
    fiber = oracle.domain.fiber
    return np.zeros(fiber.dim) if isinstance(fiber, FullSpace) else fiber.center.copy()


def _segment_deltas(oracle: BoundaryDistanceOracle, lifted: sheeted.LiftedSegment,
                    ts: np.ndarray, y: np.ndarray) -> np.ndarray:
    if oracle.domain.sheeted_base:
        return np.array([oracle.distance((lifted.point_at(t), y)) for t in ts])
    X = np.array([lifted.projection_at(t) for t in ts])
    if not np.all(geometry.contains_many(
            oracle.domain.base.base if isinstance(oracle.domain.base, sheeted.Univalent)
            else oracle.domain.base, X)):
        raise OutsideDomain("segment sample left the base domain")
    Y = np.broadcast_to(y, X.shape)
    if not _fiber_contains(oracle.domain.fiber, y):
        raise OutsideDomain("fiber point outside the imaginary part")
    return oracle.distance_xy(X, np.ascontiguousarray(Y))


def segment_min_check(oracle: BoundaryDistanceOracle, lifted: sheeted.LiftedSegment,
                      y=None, samples: int = 100) -> SegmentScan:
    """Min of delta along a lifted segment against the endpoint minimum.

    For pseudoconvex tubes the segment minimum sits at an endpoint
    (slack >= 0 up to rounding).
    """
    y = _segment_y(oracle, y)
    ts = np.linspace(0.0, 1.0, samples)
    deltas = _segment_deltas(oracle, lifted, ts, y)
    min_on = float(deltas.min())
    min_end = float(min(deltas[0], deltas[-1]))
    return SegmentScan(min_on, min_end, min_on - min_end)


def midpoint_convexity_check(oracle: BoundaryDistanceOracle, lifted: sheeted.LiftedSegment,
                             y=None, tol: float = 1e-6, resolution: int = 128,
                             checks: int = 100) -> tuple[bool, float]:
    """Dyadic midpoint convexity of -log delta along a lifted segment.

    Tests phi(t_k) <= (phi(t_{k-1}) + phi(t_{k+1}))/2 + tol on `checks`
    interior knots of a dyadic grid; returns (ok, worst excess).
    """
    y = _segment_y(oracle, y)
    ts = np.linspace(0.0, 1.0, resolution + 1)
    deltas = _segment_deltas(oracle, lifted, ts, y)
    phi = -np.log(deltas)
    excess = phi[1:-1] - 0.5 * (phi[:-2] + phi[2:])
    excess = excess[:checks]
    worst = float(excess.max()) if len(excess) else 0.0
    return worst <= tol, worst
