"""Truncated power-series germs and continuation along polygonal paths.

A germ is a degree-D jet at a complex center.  Plain data germs support
exact polynomial recentering, which is all a finite jet can do; germs
that should follow a multivalued function across sheets carry a
continuation rule that re-expands the series at each new center from a
tracked branch value (the constant coefficient).  Built-in rules cover
power branches w^a, logarithms, rational functions and entire series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AllZero, ContinuationFailure, StepTooLarge

DEFAULT_DEGREE = 24
DEFAULT_THETA = 0.5
MIN_DEGREE = 8
RADIUS_CAP = 1e6
RADIUS_FLOOR = 1e-9
MAX_STEPS = 100_000
# Coefficient gap below which two germs count as equal; compared on
# degrees <= D/2 only (higher ones are noise-dominated after shifts).
EQUALITY_TOL = 1e-7


# ---------------------------------------------------------------------------
# Continuation rules
# ---------------------------------------------------------------------------


class PowerBranch:
    """Branches of (w - pole)^exponent, tracked through the constant term."""

    def __init__(self, exponent: float, pole: complex = 0.0):
        self.exponent = exponent
        self.pole = complex(pole)

    def local_radius(self, center: complex) -> float:
        return abs(center - self.pole)

    def step_anchor(self, old_center: complex, anchor: complex, new_center: complex) -> complex:
        ratio = (new_center - self.pole) / (old_center - self.pole)
        return anchor * cmath.exp(self.exponent * cmath.log(ratio))

    def taylor(self, center: complex, anchor: complex, degree: int) -> np.ndarray:
        c = np.empty(degree + 1, dtype=complex)
        c[0] = anchor
        binom = 1.0
        shifted = center - self.pole
        for k in range(1, degree + 1):
            binom *= (self.exponent - k + 1) / k
            c[k] = anchor * binom / shifted ** k
        return c


class LogBranch:
    """Branches of log(w - pole), tracked through the constant term."""

    def __init__(self, pole: complex = 0.0):
        self.pole = complex(pole)

    def local_radius(self, center: complex) -> float:
        return abs(center - self.pole)

    def step_anchor(self, old_center: complex, anchor: complex, new_center: complex) -> complex:
        return anchor + cmath.log((new_center - self.pole) / (old_center - self.pole))

    def taylor(self, center: complex, anchor: complex, degree: int) -> np.ndarray:
        c = np.empty(degree + 1, dtype=complex)
        c[0] = anchor
        shifted = center - self.pole
        for k in range(1, degree + 1):
            c[k] = (-1.0) ** (k - 1) / (k * shifted ** k)
        return c


class EntireExp:
    """exp(w): single-valued, series regenerated exactly at any center."""

    def local_radius(self, center: complex) -> float:
        return math.inf

    def step_anchor(self, old_center, anchor, new_center) -> complex:
        return cmath.exp(new_center)

    def taylor(self, center: complex, anchor: complex, degree: int) -> np.ndarray:
        c = np.empty(degree + 1, dtype=complex)
        c[0] = cmath.exp(center)
        for k in range(1, degree + 1):
            c[k] = c[k - 1] / k
        return c


class RationalBranch:
    """num(w)/den(w) with ascending coefficient arrays; single-valued."""

    def __init__(self, num: Sequence[complex], den: Sequence[complex]):
        self.num = np.asarray(num, dtype=complex)
        self.den = np.asarray(den, dtype=complex)
        if np.allclose(self.den, 0.0):
            raise ValueError("zero denominator")
        if self.den.size > 1:
            self.poles = np.roots(self.den[::-1])
        else:
            self.poles = np.empty(0, dtype=complex)

    def local_radius(self, center: complex) -> float:
        if self.poles.size == 0:
            return math.inf
        return float(np.min(np.abs(self.poles - center)))

    def step_anchor(self, old_center, anchor, new_center) -> complex:
        return anchor

    def taylor(self, center: complex, anchor: complex, degree: int) -> np.ndarray:
        num = _shift_coeffs(_pad(self.num, degree), center)
        den = _shift_coeffs(_pad(self.den, degree), center)
        if abs(den[0]) < 1e-300:
            raise ContinuationFailure("expansion at a pole of the rational function")
        inv = np.zeros(degree + 1, dtype=complex)
        inv[0] = 1.0 / den[0]
        for k in range(1, degree + 1):
            inv[k] = -np.dot(den[1:k + 1], inv[k - 1::-1]) / den[0]
        out = np.zeros(degree + 1, dtype=complex)
        for k in range(degree + 1):
            out[k] = np.dot(num[:k + 1], inv[k::-1])
        return out


def _pad(c: np.ndarray, degree: int) -> np.ndarray:
    out = np.zeros(degree + 1, dtype=complex)
    out[:min(c.size, degree + 1)] = c[:degree + 1]
    return out


# ---------------------------------------------------------------------------
# Germs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Germ:
    center: complex
    coeffs: np.ndarray
    radius_estimate: float | None = None
    rule: object | None = None

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or coeffs.size < MIN_DEGREE + 1:
            raise ValueError(f"germ needs at least degree {MIN_DEGREE}")
        if not np.all(np.isfinite(coeffs.real)) or not np.all(np.isfinite(coeffs.imag)):
            raise ValueError("germ coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "center", complex(self.center))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, w: complex) -> complex:
        h = complex(w) - self.center
        acc = 0.0 + 0.0j
        for c in self.coeffs[::-1]:
            acc = acc * h + c
        return acc


def power_branch_germ(exponent: float, center: complex, value: complex | None = None,
                      degree: int = DEFAULT_DEGREE) -> Germ:
    rule = PowerBranch(exponent)
    if value is None:
        value = complex(center) ** exponent
    return Germ(center, rule.taylor(complex(center), value, degree),
                radius_estimate=abs(complex(center)), rule=rule)


def sqrt_germ(center: complex, degree: int = DEFAULT_DEGREE) -> Germ:
    return power_branch_germ(0.5, center, degree=degree)


def log_germ(center: complex, value: complex | None = None,
             degree: int = DEFAULT_DEGREE) -> Germ:
    rule = LogBranch()
    if value is None:
        value = cmath.log(complex(center))
    return Germ(center, rule.taylor(complex(center), value, degree),
                radius_estimate=abs(complex(center)), rule=rule)


def exp_germ(center: complex = 0.0, degree: int = DEFAULT_DEGREE) -> Germ:
    rule = EntireExp()
    return Germ(center, rule.taylor(complex(center), 0.0, degree),
                radius_estimate=RADIUS_CAP, rule=rule)


def rational_germ(num, den, center: complex = 0.0, degree: int = DEFAULT_DEGREE) -> Germ:
    rule = RationalBranch(num, den)
    return Germ(center, rule.taylor(complex(center), 0.0, degree),
                radius_estimate=rule.local_radius(complex(center)), rule=rule)


def geometric_germ(center: complex = 0.0, degree: int = DEFAULT_DEGREE) -> Germ:
    """Germ of 1/(1-w)."""
    return rational_germ([1.0], [1.0, -1.0], center, degree)


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PolygonalPath:
    vertices: tuple
    closed: bool = False

    def __post_init__(self):
        verts = tuple(complex(v) for v in self.vertices)
        if len(verts) < 2:
            raise ValueError("a path needs at least two vertices")
        for a, b in zip(verts, verts[1:]):
            if abs(a - b) == 0.0:
                raise ValueError("consecutive path vertices must be distinct")
        if self.closed and abs(verts[0] - verts[-1]) > 1e-12:
            raise ValueError("closed path must end at its start")
        object.__setattr__(self, "vertices", verts)

    @property
    def start(self) -> complex:
        return self.vertices[0]

    @property
    def end(self) -> complex:
        return self.vertices[-1]


def circle_loop(radius: float, vertices: int = 16, center: complex = 0.0) -> PolygonalPath:
    """Closed polygon around `center` through radius*1, winding once."""
    pts = [center + radius * cmath.exp(2j * math.pi * k / vertices) for k in range(vertices)]
    pts.append(pts[0])
    return PolygonalPath(tuple(pts), closed=True)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def _shift_coeffs(coeffs: np.ndarray, h: complex) -> np.ndarray:
    """Recenter sum c_k t^k to powers of (t - h); exact for polynomials."""
    a = np.array(coeffs, dtype=complex)
    n = a.size
    for j in range(n):
        for k in range(n - 2, j - 1, -1):
            a[k] += h * a[k + 1]
    return a


def taylor_shift(g: Germ, new_center: complex, theta: float = DEFAULT_THETA) -> Germ:
    """Recenter the jet; step must stay within theta * radius estimate."""
    h = complex(new_center) - g.center
    r = g.radius_estimate if g.radius_estimate is not None else estimate_radius(g)
    if abs(h) > theta * r + 1e-12:
        raise StepTooLarge(f"step {abs(h):.3g} exceeds theta * radius {theta * r:.3g}")
    return Germ(new_center, _shift_coeffs(g.coeffs, h), radius_estimate=None, rule=g.rule)


def estimate_radius(g: Germ) -> float:
    """Convergence-radius estimate from the top half of the coefficients.

    Cauchy-Hadamard on the window, with polynomial jets and supergeometric
    decay (effectively entire series) capped at 1e6.
    """
    c = np.abs(g.coeffs)
    if not np.any(c > 0.0):
        raise AllZero("cannot estimate a radius for the zero germ")
    d = g.degree
    nz = np.nonzero(c > 0.0)[0]
    if nz.max() <= d // 2:
        return RADIUS_CAP  # polynomial jet (exact zero tail)
    window = nz[nz >= max(1, d // 2)]
    if window.size == 0:
        window = nz[nz >= 1]
    roots = c[window] ** (1.0 / window)
    raw = 1.0 / float(roots.max())
    # supergeometric decay: per-degree radius still growing across the
    # window means the honest limsup is far beyond the window
    if roots[0] > 0.0 and roots[-1] > 0.0 and roots[0] / roots[-1] >= 1.5:
        return RADIUS_CAP
    return min(raw, RADIUS_CAP)


@dataclass(frozen=True, eq=False)
class ContinuationResult:
    final_germ: Germ
    steps_taken: int
    min_radius_seen: float


def _advance(g: Germ, new_center: complex) -> Germ:
    if g.rule is not None:
        anchor = g.rule.step_anchor(g.center, complex(g.coeffs[0]), complex(new_center))
        coeffs = g.rule.taylor(complex(new_center), anchor, g.degree)
        return Germ(new_center, coeffs, radius_estimate=None, rule=g.rule)
    return Germ(new_center, _shift_coeffs(g.coeffs, complex(new_center) - g.center),
                radius_estimate=None, rule=None)


def _local_radius(g: Germ) -> float:
    if g.rule is not None:
        return g.rule.local_radius(g.center)
    return estimate_radius(g)


def continue_along(g: Germ, path: PolygonalPath, theta: float = DEFAULT_THETA) -> ContinuationResult:
    """Continue the germ along a polygonal path with steps <= theta * radius."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    if abs(path.start - g.center) > 1e-12:
        raise ValueError("path must start at the germ center")
    cur = g
    steps = 0
    min_radius = math.inf
    for target in path.vertices[1:]:
        while abs(target - cur.center) > 0.0:
            r = _local_radius(cur)
            min_radius = min(min_radius, r)
            if r < RADIUS_FLOOR:
                raise ContinuationFailure(
                    f"radius collapsed to {r:.3g} at {cur.center:.6g}")
            remaining = target - cur.center
            step = min(abs(remaining), theta * r)
            steps += 1
            if steps > MAX_STEPS:
                raise ContinuationFailure("step budget exhausted")
            cur = _advance(cur, cur.center + remaining / abs(remaining) * step)
    return ContinuationResult(cur, steps, min_radius)


def germ_gap(a: Germ, b: Germ) -> float:
    """Max coefficient difference on degrees <= D/2 (trusted window)."""
    half = min(a.degree, b.degree) // 2
    return float(np.max(np.abs(a.coeffs[:half + 1] - b.coeffs[:half + 1])))


def monodromy_scan(g: Germ, loop: PolygonalPath, max_turns: int,
                   theta: float = DEFAULT_THETA):
    """Traverse the loop up to max_turns; returns (order or None, gaps, c0 offsets)."""
    if not loop.closed:
        raise ValueError("monodromy needs a closed loop")
    cur = g
    gaps = []
    offsets = []
    order = None
    for k in range(1, max_turns + 1):
        cur = continue_along(cur, loop, theta).final_germ
        gap = germ_gap(g, cur)
        gaps.append(gap)
        offsets.append(complex(cur.coeffs[0] - g.coeffs[0]))
        if order is None and gap <= EQUALITY_TOL:
            order = k
            break
    return order, gaps, offsets


def monodromy_order(g: Germ, loop: PolygonalPath, max_turns: int,
                    theta: float = DEFAULT_THETA) -> int | None:
    """Smallest k <= max_turns restoring the germ, else None (never returns)."""
    order, _, _ = monodromy_scan(g, loop, max_turns, theta)
    return order


def path_independence_check(g: Germ, path_a: PolygonalPath, path_b: PolygonalPath,
                            theta: float = DEFAULT_THETA) -> float:
    """Coefficient gap between the continuations along two paths."""
    if abs(path_a.start - path_b.start) > 1e-12 or abs(path_a.end - path_b.end) > 1e-12:
        raise ValueError("paths must share start and end")
    ga = continue_along(g, path_a, theta).final_germ
    gb = continue_along(g, path_b, theta).final_germ
    return germ_gap(ga, gb)
