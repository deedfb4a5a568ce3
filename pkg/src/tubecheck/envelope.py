"""Hull envelopes, convexity certificates and the shell-ball envelope formula.

The tube over a base extends to the tube over the convex hull of the
base; a (possibly sheeted) tube is a domain of holomorphy iff its base
is univalent and convex.  Both directions are exercised here at desk
scale: exact hulls for polytope bases, sampled hulls with a reported
Hausdorff defect for curved ones, and seeded segment/midpoint trials for
the convexity certificates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import geometry, sheeted, tube
from .errors import BadRho, ConfigConflict
from .geometry import Ball, HalfspacePolytope, PolytopeUnion, SampledDomain, Shell

MIDPOINT_TOL = 1e-6


# ---------------------------------------------------------------------------
# Hull envelope
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EnvelopeResult:
    tube: tube.TubeDomain
    hull: Union[Ball, HalfspacePolytope]
    exact: bool
    hausdorff_defect: float | None

    @property
    def hull_vertices(self) -> np.ndarray | None:
        return self.hull.vertices if isinstance(self.hull, HalfspacePolytope) else None


def bochner_envelope(base, sample_budget: int = 10_000, seed: int = 0) -> EnvelopeResult:
    """Tube over the convex hull of the base.

    Polytope bases give the exact hull of their vertices; shells and
    sampled bases are hulled from `sample_budget` seeded member samples
    and the Hausdorff defect against the closed-form hull is reported
    when one exists (shell -> ball of the outer radius).
    """
    if isinstance(base, sheeted.Univalent):
        base = base.base
    if isinstance(base, Ball):
        return EnvelopeResult(tube.tube(base), base, True, None)
    if isinstance(base, HalfspacePolytope):
        if not base.is_bounded:
            raise ValueError("hull envelopes need a bounded polytope base")
        hull = geometry.convex_hull(base.vertices, base.dim)
        return EnvelopeResult(tube.tube(hull), hull, True, None)
    if isinstance(base, PolytopeUnion):
        pts = np.vstack([p.vertices for p in base.parts])
        hull = geometry.convex_hull(pts, base.dim)
        return EnvelopeResult(tube.tube(hull), hull, True, None)
    if isinstance(base, Shell):
        if not math.isfinite(base.outer_radius):
            raise ValueError("hull envelopes need a bounded base")
        rng = np.random.default_rng(seed)
        pts = geometry.sample_members(base, sample_budget, rng)
        hull = geometry.convex_hull(pts, base.dim)
        target = Ball(base.center, base.outer_radius)
        defect = _hausdorff_ball_defect(hull, target)
        return EnvelopeResult(tube.tube(hull), hull, False, defect)
    if isinstance(base, SampledDomain):
        rng = np.random.default_rng(seed)
        pts = geometry.sample_members(base, sample_budget, rng)
        hull = geometry.convex_hull(pts, base.dim)
        return EnvelopeResult(tube.tube(hull), hull, False, None)
    raise TypeError(f"unsupported base type {type(base)!r}")


def _hausdorff_ball_defect(hull: HalfspacePolytope, ball: Ball) -> float:
    """Max distance from the ball boundary to the inscribed hull."""
    n = ball.dim
    if n == 2:
        th = np.linspace(0.0, 2.0 * math.pi, 1 << 16, endpoint=False)
        ring = ball.center + ball.radius * np.stack([np.cos(th), np.sin(th)], axis=1)
        verts = hull.vertices
        segs = np.hstack([verts, np.roll(verts, -1, axis=0)])
        return float(np.max(geometry._segment_distances(segs, ring)))
    dirs = geometry._direction_grid(n, 8192)
    pts = ball.center + ball.radius * dirs
    margins = pts @ hull.normals.T - hull.offsets[None, :]
    return float(np.max(margins.max(axis=1)))


# ---------------------------------------------------------------------------
# Convexity certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NonConvexWitness:
    p: object
    q: object
    midpoint_violation: float | None
    reason: str


@dataclass(frozen=True, eq=False)
class ConvexityCertificate:
    convex: bool
    witness: NonConvexWitness | None
    univalent: bool
    univalence_pair: tuple | None
    midpoint_trials: int
    tol: float
    vacuous: bool = False

    @property
    def passes(self) -> bool:
        return self.convex and self.univalent


def abe_check(base: sheeted.SheetedRealDomain, trials: int, seed: int,
              lift_samples: int = 1000) -> ConvexityCertificate:
    """Certificate that a tube base is univalent and convex.

    Univalence comes from the explicit witness search; convexity from
    seeded segment trials (midpoint membership plus sheet-tracked lifts).
    """
    pair = sheeted.univalence_witness(base)
    rng = np.random.default_rng(seed)
    pts = sheeted.sample_sheet_points(base, 2 * trials, rng) if trials else []
    witness = None
    for i in range(trials):
        p, q = pts[2 * i], pts[2 * i + 1]
        if isinstance(base, sheeted.Univalent):
            mid = 0.5 * (np.asarray(p, float) + np.asarray(q, float))
            if not geometry.contains(base.base, mid):
                witness = NonConvexWitness(p, q, None, "midpoint-outside-domain")
                break
        if sheeted.lift_segment(base, p, q, lift_samples) is None:
            witness = NonConvexWitness(p, q, None, "segment-lift-absent")
            break
    return ConvexityCertificate(
        convex=witness is None,
        witness=witness,
        univalent=pair is None,
        univalence_pair=pair,
        midpoint_trials=trials,
        tol=MIDPOINT_TOL,
        vacuous=trials == 0,
    )


# ---------------------------------------------------------------------------
# Generalized tubes and the convex certificate function psi
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeneralizedTube:
    """A1 + iA2 with both parts (possibly sheeted) real domains."""

    a1: sheeted.SheetedRealDomain
    a2: sheeted.SheetedRealDomain

    def __post_init__(self):
        if self.a1.dim != self.a2.dim:
            raise ValueError("components must share one dimension")

    @property
    def dim(self) -> int:
        return self.a1.dim


def _sheet_base_distance(domain: sheeted.SheetedRealDomain, p) -> float:
    if isinstance(domain, sheeted.Univalent):
        return geometry.real_boundary_distance(domain.base, p)
    # full covers of a shell: the univalent-lift radius equals the
    # projected shell distance (the collision radius |x| + r1 never
    # undercuts it)
    return geometry.real_boundary_distance(domain.shell, sheeted.project_point(domain, p))


@dataclass(frozen=True, eq=False)
class PsiFunction:
    """psi(x) = max(-log dist(x, bd A1), -log rho0) on A1.

    The tube distance at x + i y0 is min(dist(x, bd A1), dist(y0, bd A2));
    since dist(y0, bd A2) >= 2 rho0 the A2 term never reaches the floor
    -log rho0, so it drops out of the maximum.
    """

    a1: sheeted.SheetedRealDomain
    y0: object
    rho0: float
    a2_distance: float

    def __call__(self, p) -> float:
        d1 = _sheet_base_distance(self.a1, p)
        value = max(-math.log(min(d1, self.a2_distance)), -math.log(self.rho0))
        assert value >= -math.log(self.rho0)
        return value

    @property
    def floor(self) -> float:
        return -math.log(self.rho0)


def psi_build(gentube: GeneralizedTube, y0, rho0: float) -> PsiFunction:
    """Floored -log distance certificate for the generalized tube.

    Requires the ball of radius 2 rho0 about y0 to sit inside A2 (checked
    against the univalent-lift distance); raises BadRho otherwise.
    """
    if not rho0 > 0:
        raise ValueError("rho0 must be positive")
    if not sheeted.contains_point(gentube.a2, y0):
        raise BadRho("y0 is not a point of A2")
    d2 = _sheet_base_distance(gentube.a2, y0)
    if d2 < 2.0 * rho0:
        raise BadRho(f"ball of radius {2 * rho0} around y0 leaves A2 (distance {d2:.6g})")
    return PsiFunction(gentube.a1, y0, rho0, d2)


def psi_convexity_check(psi: PsiFunction, trials: int, seed: int,
                        tol: float = MIDPOINT_TOL,
                        lift_samples: int = 256) -> ConvexityCertificate:
    """Midpoint convexity of psi over seeded segment trials in A1.

    Convex iff every sampled pair admits a lifted segment and satisfies
    psi(mid) <= (psi(p) + psi(q))/2 + tol.
    """
    pair = sheeted.univalence_witness(psi.a1)
    rng = np.random.default_rng(seed)
    pts = sheeted.sample_sheet_points(psi.a1, 2 * trials, rng) if trials else []
    witness = None
    for i in range(trials):
        p, q = pts[2 * i], pts[2 * i + 1]
        lifted = sheeted.lift_segment(psi.a1, p, q, lift_samples)
        if lifted is None:
            witness = NonConvexWitness(p, q, None, "segment-exits-domain")
            break
        mid = lifted.point_at(0.5)
        excess = psi(mid) - 0.5 * (psi(p) + psi(q))
        if excess > tol:
            witness = NonConvexWitness(p, q, excess, "midpoint-convexity-violated")
            break
    return ConvexityCertificate(
        convex=witness is None,
        witness=witness,
        univalent=pair is None,
        univalence_pair=pair,
        midpoint_trials=trials,
        tol=tol,
        vacuous=trials == 0,
    )


# ---------------------------------------------------------------------------
# Shell-ball envelope formula (univalent envelope of an annulus finite tube)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JpShellConfig:
    """x-shell R1 < |x| < 1 with imaginary ball |y| < R2."""

    r1: float
    r2: float

    def __post_init__(self):
        if not 0.0 < self.r1 < 1.0:
            raise ValueError("R1 must lie in (0, 1)")
        if not self.r2 > 0.0:
            raise ValueError("R2 must be positive")


def jp_envelope_contains(cfg: JpShellConfig, x, y) -> bool:
    """Membership in {|x| < 1, |y| < R2, |y|^2 < |x|^2 + R2^2 - R1^2}."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx2 = float(x @ x)
    ny2 = float(y @ y)
    return (nx2 < 1.0 and ny2 < cfg.r2 ** 2
            and ny2 < nx2 + cfg.r2 ** 2 - cfg.r1 ** 2)


@dataclass(frozen=True, eq=False)
class JpReport:
    inclusion_checked: int
    inclusion_ok: bool
    nonvanishing_checked: int
    nonvanishing_ok: bool
    min_abs_f: float
    vanish_witness_x: np.ndarray
    vanish_witness_y: np.ndarray
    vacuous: bool

    @property
    def passes(self) -> bool:
        return self.inclusion_ok and self.nonvanishing_ok

    def to_payload(self) -> dict:
        return {
            "inclusion_checked": self.inclusion_checked,
            "inclusion_ok": self.inclusion_ok,
            "nonvanishing_checked": self.nonvanishing_checked,
            "nonvanishing_ok": self.nonvanishing_ok,
            "min_abs_f": self.min_abs_f,
            "vanish_witness": {"x": self.vanish_witness_x.tolist(),
                               "y": self.vanish_witness_y.tolist()},
            "vacuous": self.vacuous,
        }


def _f_value(x: np.ndarray, y: np.ndarray) -> complex:
    return complex(x[0] - y[1], x[1] + y[0])


def jp_consistency_suite(cfg: JpShellConfig, samples: int, seed: int) -> JpReport:
    """Sampled consistency of the shell-ball envelope formula.

    (a) every tube sample lies in the formula set; (b) f = z1 + i z2 is
    nonvanishing on formula-set samples with |f| >= |x| - |y| > 0, valid
    only for R2 <= R1 (ConfigConflict otherwise); (c) a point of the
    hull tube where f vanishes is produced, so the hull tube cannot be
    the envelope.
    """
    if cfg.r2 > cfg.r1:
        raise ConfigConflict(
            "nonvanishing of z1 + i z2 needs R2 <= R1: the formula set then "
            "stays inside |y| < |x|")
    rng = np.random.default_rng(seed)
    shell = Shell(np.zeros(2), cfg.r1, 1.0)
    yball = Ball(np.zeros(2), cfg.r2)

    inclusion_ok = True
    for _ in range(samples):
        x = geometry.sample_members(shell, 1, rng)[0]
        y = geometry.sample_members(yball, 1, rng)[0]
        if not jp_envelope_contains(cfg, x, y):
            inclusion_ok = False
            break

    nonvanishing_ok = True
    min_abs_f = math.inf
    checked = 0
    while checked < samples:
        x = rng.uniform(-1.0, 1.0, size=2)
        y = rng.uniform(-cfg.r2, cfg.r2, size=2)
        if not jp_envelope_contains(cfg, x, y):
            continue
        checked += 1
        fv = abs(_f_value(x, y))
        min_abs_f = min(min_abs_f, fv)
        margin = float(np.linalg.norm(x)) - float(np.linalg.norm(y))
        if not (fv > 0.0 and margin > 0.0 and fv >= margin):
            nonvanishing_ok = False
            break

    t = 2.0 * cfg.r2 / 3.0
    wx = np.array([t, 0.0])
    wy = np.array([0.0, t])
    assert _f_value(wx, wy) == 0
    return JpReport(
        inclusion_checked=samples,
        inclusion_ok=inclusion_ok,
        nonvanishing_checked=checked,
        nonvanishing_ok=nonvanishing_ok,
        min_abs_f=min_abs_f if checked else math.nan,
        vanish_witness_x=wx,
        vanish_witness_y=wy,
        vacuous=samples == 0,
    )
