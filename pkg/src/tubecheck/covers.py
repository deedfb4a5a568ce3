"""Finite tubes over a plane shell and their sheeted covers.

The base annulus A = {R1 < |x| < R2} with imaginary ball B = {|y| < R1}
gives the finite tube Omega = A + iB in C^2.  The nu-sheeted cover uses
the covering coordinate u with x = u^nu; the infinite cover uses x =
exp(u).  The function f(z) = z1 + i z2 has single-valued branch roots
f^(1/nu) (resp. log f) upstairs, which separate the sheets.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import continuation, geometry, sheeted, tube
from .errors import BadEpsilon, BranchPrecondition, InvalidPoint, OutsideDomain
from .geometry import Ball, Shell

BRANCH_IDENTITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class CoverConfig:
    """Sheet count (int >= 2 or math.inf) and shell radii 0 < R1 < R2 <= inf.

    The imaginary ball radius is pinned to R1: the branch correction
    factor argument w = (y1 + i y2)/(x1 + i x2) must satisfy |w| < 1.
    """

    nu: float
    inner_radius: float
    outer_radius: float

    def __post_init__(self):
        if not (self.nu == math.inf or (float(self.nu).is_integer() and self.nu >= 2)):
            raise ValueError("nu must be an integer >= 2 or math.inf")
        if not 0.0 < self.inner_radius < self.outer_radius:
            raise ValueError("radii must satisfy 0 < R1 < R2")

    @property
    def infinite(self) -> bool:
        return self.nu == math.inf

    @property
    def fiber_radius(self) -> float:
        return self.inner_radius

    @property
    def base_shell(self) -> Shell:
        return Shell(np.zeros(2), self.inner_radius, self.outer_radius)

    @property
    def fiber_ball(self) -> Ball:
        return Ball(np.zeros(2), self.fiber_radius)


@dataclass(frozen=True, eq=False)
class CoverPoint:
    u: complex
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", complex(self.u))
        object.__setattr__(self, "y", geometry.as_vector(self.y, dim=2))


def base_tube(cfg: CoverConfig) -> tube.TubeDomain:
    """The downstairs finite tube Omega = A + iB."""
    return tube.TubeDomain(cfg.base_shell, cfg.fiber_ball)


def cover_sheet_domain(cfg: CoverConfig) -> sheeted.SheetedRealDomain:
    if cfg.infinite:
        return sheeted.UniversalCover(cfg.base_shell)
    return sheeted.FiniteCover(cfg.base_shell, int(cfg.nu))


def cover_tube(cfg: CoverConfig) -> tube.TubeDomain:
    """The sheeted tube Omega_nu = A_nu x B as a tube domain."""
    return tube.TubeDomain(cover_sheet_domain(cfg), cfg.fiber_ball)


def valid_point(cfg: CoverConfig, p: CoverPoint) -> bool:
    if not geometry.contains(cfg.fiber_ball, p.y):
        return False
    if cfg.infinite:
        return (math.log(cfg.inner_radius) < p.u.real
                and (not math.isfinite(cfg.outer_radius)
                     or p.u.real < math.log(cfg.outer_radius)))
    nu = int(cfg.nu)
    r = abs(p.u)
    hi = cfg.outer_radius ** (1.0 / nu) if math.isfinite(cfg.outer_radius) else math.inf
    return cfg.inner_radius ** (1.0 / nu) < r < hi


def project(cfg: CoverConfig, p: CoverPoint) -> np.ndarray:
    """Downstairs point z = x + iy of Omega, x = u^nu (exp(u) when infinite)."""
    if not valid_point(cfg, p):
        raise InvalidPoint("cover point violates its coordinate constraints")
    X = cmath.exp(p.u) if cfg.infinite else p.u ** int(cfg.nu)
    return np.array([X.real + 1j * p.y[0], X.imag + 1j * p.y[1]])


def eval_f(cfg: CoverConfig, z: np.ndarray) -> complex:
    """f(z) = z1 + i z2 on the finite tube; never vanishes there.

    |f| >= |x| - |y| > 0 is asserted on every call (up to a few ulps).
    """
    z = tube.as_complex_point(z, 2)
    if not (geometry.contains(cfg.base_shell, z.real)
            and geometry.contains(cfg.fiber_ball, z.imag)):
        raise OutsideDomain("point not in the finite tube")
    f = complex(z[0] + 1j * z[1])
    nx = math.hypot(z[0].real, z[1].real)
    ny = math.hypot(z[0].imag, z[1].imag)
    # exact up to input-scale rounding: both sides carry absolute errors
    # of a few ulps of |x|, |y| even when |f| is tiny (anti-aligned case)
    if abs(f) < (nx - ny) - 8.0 * 2.220446049250313e-16 * (nx + ny):
        raise AssertionError("lower bound |f| >= |x| - |y| violated")
    return f


@dataclass(frozen=True, eq=False)
class BranchValue:
    value: complex
    principal_factor: complex
    correction_factor: complex


def eval_branch(cfg: CoverConfig, p: CoverPoint) -> BranchValue:
    """Single-valued branch of f^(1/nu) (log f when infinite) at a cover point.

    The sheet determination comes from u; the correction factor
    (1 + i w)^(1/nu) resp. log(1 + i w) uses the principal branch, which
    is well-defined because |w| < 1 on the whole domain.
    """
    z = project(cfg, p)
    X = cmath.exp(p.u) if cfg.infinite else p.u ** int(cfg.nu)
    w = complex(p.y[0], p.y[1]) / X
    if abs(w) >= 1.0:
        raise BranchPrecondition("correction argument |w| >= 1")
    if cfg.infinite:
        corr = cmath.log(1.0 + 1j * w)
        return BranchValue(p.u + corr, p.u, corr)
    corr = (1.0 + 1j * w) ** (1.0 / cfg.nu)
    return BranchValue(p.u * corr, p.u, corr)


@dataclass(frozen=True, eq=False)
class SeparabilityWitness:
    value_p: complex
    value_q: complex
    gap: float


def separability_witness(cfg: CoverConfig, p: CoverPoint, q: CoverPoint):
    """Branch values distinguishing two distinct points over one base point.

    Returns None (not applicable) unless p != q with equal projections.
    """
    if abs(p.u - q.u) <= 1e-12 and np.linalg.norm(p.y - q.y) <= 1e-12:
        return None
    zp, zq = project(cfg, p), project(cfg, q)
    if np.max(np.abs(zp - zq)) > 1e-12:
        return None
    vp = eval_branch(cfg, p).value
    vq = eval_branch(cfg, q).value
    return SeparabilityWitness(vp, vq, abs(vp - vq))


@dataclass(frozen=True)
class BlowupRow:
    epsilon: float
    sup_abs_g: float
    theta_at_sup: float


def blowup_probe(cfg: CoverConfig, epsilons, theta_samples: int = 360) -> list[BlowupRow]:
    """Sampled sup of |g| = 1/|f| on rings hugging the inner boundary.

    For each eps the ring x = (R1+eps) e^(i theta) with y rotated so that
    f = 2 eps e^(i theta) gives sup |g| >= 1/(2 eps).
    """
    rows = []
    width = (cfg.outer_radius - cfg.inner_radius) / 2.0
    r1 = cfg.inner_radius
    for eps in epsilons:
        if not 0.0 < eps < width:
            raise BadEpsilon(f"epsilon {eps} outside (0, {width})")
        a = r1 + eps
        sup = -math.inf
        arg = 0.0
        for j in range(theta_samples):
            th = 2.0 * math.pi * j / theta_samples
            if j == 0:
                # pin theta = 0 so the reported sup is not lost to the
                # cancellation in (R1+eps) - (R1-eps)
                b = a - 2.0 * eps
                while a - b > 2.0 * eps:
                    b = math.nextafter(b, math.inf)
                x = np.array([a, 0.0])
                y = np.array([0.0, b])
            else:
                c, s = math.cos(th), math.sin(th)
                x = a * np.array([c, s])
                y = (r1 - eps) * np.array([-s, c])
            f = eval_f(cfg, x + 1j * y)
            g = 1.0 / abs(f)
            if g > sup:
                sup = g
                arg = th
        rows.append(BlowupRow(eps, sup, arg))
    return rows


@dataclass(frozen=True)
class MonodromyResult:
    sheets: int | None  # None: germ never restored within the turn budget
    gaps: tuple
    constant_offsets: tuple


def monodromy_sheets(cfg: CoverConfig, radius: float, turns: int,
                     degree: int = continuation.DEFAULT_DEGREE,
                     loop_vertices: int = 16) -> MonodromyResult:
    """Sheet count of the branch germ along the base circle |f| = radius.

    Along the loop z(t) = ((r cos t, r sin t), 0) the function f traces
    the circle of radius r around 0, so the germ of f^(1/nu) (log f when
    infinite) is continued around that circle; the finite cover restores
    the germ after exactly nu turns, the infinite one never does.
    """
    if not cfg.inner_radius < radius < cfg.outer_radius:
        raise ValueError("loop radius must lie strictly inside the shell radii")
    if not math.isfinite(radius):
        raise ValueError("monodromy loops need a finite radius")
    if cfg.infinite:
        germ = continuation.log_germ(radius, degree=degree)
    else:
        germ = continuation.power_branch_germ(1.0 / cfg.nu, radius, degree=degree)
    loop = continuation.circle_loop(radius, loop_vertices)
    order, gaps, offsets = continuation.monodromy_scan(germ, loop, turns)
    return MonodromyResult(order, tuple(gaps), tuple(offsets))
