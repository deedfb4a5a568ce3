"""Multi-sheeted real domains over R^2 and segment lifting.

A sheeted domain is either a univalent base domain, a nu-fold cover of an
origin-centered shell (covering coordinate u with u -> u^nu), or the
universal cover (u complex with x = exp(u)).  Cover points are stored in
the covering coordinate as a single complex number.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import geometry
from .errors import InvalidPoint
from .geometry import RealBaseDomain, Shell

# Two candidate lifts closer than this are considered ambiguous and the
# lift is abandoned (conservative: false negatives are detectable).
LIFT_AMBIGUITY = 1e-9


@dataclass(frozen=True, eq=False)
class Univalent:
    base: RealBaseDomain

    @property
    def dim(self) -> int:
        return self.base.dim


@dataclass(frozen=True, eq=False)
class FiniteCover:
    """nu-sheeted cover of an origin-centered plane shell, u -> u^nu."""

    shell: Shell
    sheets: int

    def __post_init__(self):
        if self.shell.dim != 2 or np.any(self.shell.center != 0.0):
            raise ValueError("finite covers require an origin-centered shell in R^2")
        if self.sheets < 2:
            raise ValueError("a finite cover needs at least 2 sheets")

    @property
    def dim(self) -> int:
        return 2

    @property
    def coordinate_radii(self) -> tuple[float, float]:
        r1 = self.shell.inner_radius ** (1.0 / self.sheets)
        r2 = self.shell.outer_radius
        if math.isfinite(r2):
            r2 = r2 ** (1.0 / self.sheets)
        return r1, r2


@dataclass(frozen=True, eq=False)
class UniversalCover:
    """Universal cover of an origin-centered plane shell, u -> exp(u)."""

    shell: Shell

    def __post_init__(self):
        if self.shell.dim != 2 or np.any(self.shell.center != 0.0):
            raise ValueError("universal covers require an origin-centered shell in R^2")

    @property
    def dim(self) -> int:
        return 2


SheetedRealDomain = Union[Univalent, FiniteCover, UniversalCover]

SheetPoint = Union[np.ndarray, complex]


def project_point(domain: SheetedRealDomain, p: SheetPoint) -> np.ndarray:
    """Project a sheeted point down to R^n."""
    if isinstance(domain, Univalent):
        return geometry.as_vector(p, dim=domain.dim)
    u = complex(p)
    if isinstance(domain, FiniteCover):
        x = u ** domain.sheets
    else:
        x = cmath.exp(u)
    return np.array([x.real, x.imag])


def contains_point(domain: SheetedRealDomain, p: SheetPoint) -> bool:
    if isinstance(domain, Univalent):
        return geometry.contains(domain.base, p)
    return geometry.contains(domain.shell, project_point(domain, p))


def preimages(domain: SheetedRealDomain, x) -> list[SheetPoint]:
    """All preimages of a base point (finite covers and univalent only)."""
    x = geometry.as_vector(x, dim=domain.dim)
    if isinstance(domain, Univalent):
        return [x]
    if isinstance(domain, UniversalCover):
        raise ValueError("the universal cover has infinitely many preimages")
    X = complex(x[0], x[1])
    if X == 0:
        raise InvalidPoint("the shell excludes the origin")
    nu = domain.sheets
    root = X ** (1.0 / nu)
    return [root * cmath.exp(2j * math.pi * k / nu) for k in range(nu)]


def _nearest_lift(domain, x: np.ndarray, prev: complex) -> tuple[complex, float]:
    """Nearest preimage of x to `prev`, with the gap to the runner-up."""
    X = complex(x[0], x[1])
    if isinstance(domain, FiniteCover):
        cands = preimages(domain, x)
        dists = sorted((abs(c - prev), i) for i, c in enumerate(cands))
        best = cands[dists[0][1]]
        gap = dists[1][0] - dists[0][0] if len(dists) > 1 else math.inf
        return best, gap
    # universal cover: real part fixed, imaginary part defined mod 2*pi
    u1 = math.log(abs(X))
    base_arg = cmath.phase(X)
    k = round((prev.imag - base_arg) / (2.0 * math.pi))
    cands = [complex(u1, base_arg + 2.0 * math.pi * kk) for kk in (k - 1, k, k + 1)]
    dists = sorted((abs(c - prev), i) for i, c in enumerate(cands))
    return cands[dists[0][1]], dists[1][0] - dists[0][0]


def points_equal(domain: SheetedRealDomain, p: SheetPoint, q: SheetPoint,
                 tol: float = 1e-12) -> bool:
    if isinstance(domain, Univalent):
        return bool(np.linalg.norm(np.asarray(p, float) - np.asarray(q, float)) <= tol)
    return abs(complex(p) - complex(q)) <= tol


@dataclass(frozen=True, eq=False)
class LiftedSegment:
    """Sheet-continued lift of a straight base segment.

    The projection of the parameterization is exactly the straight segment
    between the endpoint projections; consecutive samples stay on one sheet.
    """

    domain: SheetedRealDomain
    start: SheetPoint
    end: SheetPoint
    sample_count: int
    points: tuple
    projections: np.ndarray

    def projection_at(self, t: float) -> np.ndarray:
        return (1.0 - t) * self.projections[0] + t * self.projections[-1]

    def point_at(self, t: float) -> SheetPoint:
        """Sheeted point over projection_at(t), continued from the nearest knot."""
        if isinstance(self.domain, Univalent):
            return self.projection_at(t)
        k = min(int(round(t * self.sample_count)), self.sample_count)
        lifted, _ = _nearest_lift(self.domain, self.projection_at(t), complex(self.points[k]))
        return lifted


def lift_segment(domain: SheetedRealDomain, p: SheetPoint, q: SheetPoint,
                 samples: int = 1000) -> LiftedSegment | None:
    """Lift the straight segment between the projections of p and q.

    Continues sheet-by-sheet from p; returns None when the projected
    segment leaves the base domain, the sheet tracking is ambiguous, or
    the continued lift fails to end at q.
    """
    if not (contains_point(domain, p) and contains_point(domain, q)):
        return None
    x0 = project_point(domain, p)
    x1 = project_point(domain, q)
    scale = max(1.0, float(np.linalg.norm(x0)), float(np.linalg.norm(x1)))

    if np.linalg.norm(x1 - x0) <= 1e-15 * scale:
        # degenerate segment: the lifted component is the single point p
        if points_equal(domain, p, q):
            return LiftedSegment(domain, p, q, 0, (p,), np.array([x0, x1]))
        return None

    ts = np.linspace(0.0, 1.0, samples + 1)
    if isinstance(domain, Univalent):
        X = x0[None, :] + ts[:, None] * (x1 - x0)[None, :]
        if not bool(np.all(geometry.contains_many(domain.base, X))):
            return None
        return LiftedSegment(domain, p, q, samples, tuple(X), np.array([x0, x1]))

    pts = [complex(p)]
    cur = complex(p)
    for t in ts[1:]:
        x = x0 + t * (x1 - x0)
        if not geometry.contains(domain.shell, x):
            return None
        cur, gap = _nearest_lift(domain, x, cur)
        if gap < LIFT_AMBIGUITY:
            return None
        pts.append(cur)
    if abs(pts[-1] - complex(q)) > 1e-9 * scale:
        return None
    return LiftedSegment(domain, p, q, samples, tuple(pts), np.array([x0, x1]))


def univalence_witness(domain: SheetedRealDomain):
    """A pair of distinct points with equal projection, or None if univalent."""
    if isinstance(domain, Univalent):
        return None
    if isinstance(domain, FiniteCover):
        r1, r2 = domain.coordinate_radii
        ru = math.sqrt(r1 * r2) if math.isfinite(r2) else 2.0 * r1
        p = complex(ru, 0.0)
        q = ru * cmath.exp(2j * math.pi / domain.sheets)
        return p, q
    lo = math.log(domain.shell.inner_radius)
    hi = (math.log(domain.shell.outer_radius)
          if math.isfinite(domain.shell.outer_radius) else lo + 2.0)
    mid = 0.5 * (lo + hi)
    return complex(mid, 0.0), complex(mid, 2.0 * math.pi)


def sample_sheet_points(domain: SheetedRealDomain, count: int,
                        rng: np.random.Generator) -> list[SheetPoint]:
    """Seeded interior samples, drawn in covering coordinates for covers."""
    if isinstance(domain, Univalent):
        return list(geometry.sample_members(domain.base, count, rng))
    if isinstance(domain, FiniteCover):
        r1, r2 = domain.coordinate_radii
        if not math.isfinite(r2):
            r2 = 2.0 * r1 + geometry.UNBOUNDED_BOX_HALFWIDTH ** (1.0 / domain.sheets)
        out = []
        while len(out) < count:
            u = complex(*rng.uniform(-r2, r2, size=2))
            if r1 < abs(u) < r2 and contains_point(domain, u):
                out.append(u)
        return out
    lo = math.log(domain.shell.inner_radius)
    hi = (math.log(domain.shell.outer_radius)
          if math.isfinite(domain.shell.outer_radius)
          else math.log(geometry.UNBOUNDED_BOX_HALFWIDTH))
    re = rng.uniform(lo, hi, size=count)
    im = rng.uniform(-2.0 * math.pi, 2.0 * math.pi, size=count)
    return [complex(a, b) for a, b in zip(re, im)]
