"""Named built-in fixtures: base domains, tubes, covers, configs and germs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import continuation, covers, envelope, geometry, sheeted, tube
from .geometry import Ball, PolytopeUnion, Shell, box_polytope, convex_hull

L_SHAPE_VERTICES = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 1.0],
                             [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]])


def l_shape() -> PolytopeUnion:
    return PolytopeUnion((box_polytope([0.0, 0.0], [2.0, 1.0]),
                          box_polytope([0.0, 0.0], [1.0, 2.0])))


def pentagon_hull():
    return convex_hull(L_SHAPE_VERTICES, 2)


def hexagon():
    th = 2.0 * math.pi * np.arange(6) / 6.0
    return convex_hull(np.stack([np.cos(th), np.sin(th)], axis=1), 2)


@dataclass(frozen=True)
class Fixture:
    kind: str  # base | tube | cover | jp | germ
    description: str
    factory: Callable[[], object]


FIXTURES: dict[str, Fixture] = {
    # base domains
    "interval": Fixture("base", "unit interval (0,1) in R^1",
                        lambda: box_polytope([0.0], [1.0])),
    "square": Fixture("base", "open unit square in R^2",
                      lambda: box_polytope([0.0, 0.0], [1.0, 1.0])),
    "rect-2x1": Fixture("base", "open 2x1 rectangle in R^2",
                        lambda: box_polytope([0.0, 0.0], [2.0, 1.0])),
    "triangle": Fixture("base", "right triangle with legs 1",
                        lambda: convex_hull([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 2)),
    "hexagon": Fixture("base", "regular hexagon of circumradius 1", hexagon),
    "pentagon-hull": Fixture("base", "convex hull of the L-shape (pentagon)", pentagon_hull),
    "l-shape": Fixture("base", "non-convex L-shape, two unit-overlap rectangles", l_shape),
    "ball-2d": Fixture("base", "open unit disk", lambda: Ball(np.zeros(2), 1.0)),
    "ball-2d-r2": Fixture("base", "open disk of radius 2", lambda: Ball(np.zeros(2), 2.0)),
    "ball-3d": Fixture("base", "open unit ball in R^3", lambda: Ball(np.zeros(3), 1.0)),
    "box-3d": Fixture("base", "open unit cube in R^3",
                      lambda: box_polytope([0.0] * 3, [1.0] * 3)),
    "tetrahedron": Fixture("base", "standard simplex in R^3",
                           lambda: convex_hull([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                                                [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], 3)),
    "shell-1-2": Fixture("base", "plane shell 1 < |x| < 2",
                         lambda: Shell(np.zeros(2), 1.0, 2.0)),
    "shell-1-3": Fixture("base", "plane shell 1 < |x| < 3",
                         lambda: Shell(np.zeros(2), 1.0, 3.0)),
    "shell-1-4": Fixture("base", "plane shell 1 < |x| < 4",
                         lambda: Shell(np.zeros(2), 1.0, 4.0)),
    # tubes
    "ball-tube": Fixture("tube", "tube over the unit disk, full imaginary fiber",
                         lambda: tube.tube(Ball(np.zeros(2), 1.0))),
    "square-tube": Fixture("tube", "tube over the unit square, full fiber",
                           lambda: tube.tube(box_polytope([0.0, 0.0], [1.0, 1.0]))),
    "hull-of-l-shape-tube": Fixture("tube", "tube over the pentagon hull of the L-shape",
                                    lambda: tube.tube(pentagon_hull())),
    "l-shape-tube": Fixture("tube", "tube over the non-convex L-shape (fails the Levi test)",
                            lambda: tube.tube(l_shape())),
    "shell-1-2-tube": Fixture("tube", "tube over the 1<|x|<2 shell (fails the Levi test)",
                              lambda: tube.tube(Shell(np.zeros(2), 1.0, 2.0))),
    "ball-ball-tube": Fixture("tube", "finite tube: disk of radius 2 + i unit disk (convex)",
                              lambda: tube.TubeDomain(Ball(np.zeros(2), 2.0),
                                                      Ball(np.zeros(2), 1.0))),
    "shell-ball-tube": Fixture("tube", "finite tube: shell 1<|x|<2 + i unit disk",
                               lambda: tube.TubeDomain(Shell(np.zeros(2), 1.0, 2.0),
                                                       Ball(np.zeros(2), 1.0))),
    # covers of the finite tube over the 0.5 < |x| < 4 shell
    "cover-nu2": Fixture("cover", "2-sheeted cover of the finite shell tube",
                         lambda: covers.CoverConfig(2, 0.5, 4.0)),
    "cover-nu3": Fixture("cover", "3-sheeted cover of the finite shell tube",
                         lambda: covers.CoverConfig(3, 0.5, 4.0)),
    "cover-nu4": Fixture("cover", "4-sheeted cover of the finite shell tube",
                         lambda: covers.CoverConfig(4, 0.5, 4.0)),
    "cover-nu5": Fixture("cover", "5-sheeted cover of the finite shell tube",
                         lambda: covers.CoverConfig(5, 0.5, 4.0)),
    "cover-nu6": Fixture("cover", "6-sheeted cover of the finite shell tube",
                         lambda: covers.CoverConfig(6, 0.5, 4.0)),
    "cover-infinite": Fixture("cover", "universal cover of the finite shell tube",
                              lambda: covers.CoverConfig(math.inf, 0.5, 4.0)),
    # shell-ball envelope configs
    "jp-r1_0.5-r2_0.3": Fixture("jp", "x-shell 0.5<|x|<1 with |y|<0.3 (nonvanishing regime)",
                                lambda: envelope.JpShellConfig(0.5, 0.3)),
    "jp-r1_0.5-r2_0.6": Fixture("jp", "x-shell 0.5<|x|<1 with |y|<0.6 (guarded regime)",
                                lambda: envelope.JpShellConfig(0.5, 0.6)),
    # germs
    "germ-sqrt": Fixture("germ", "square-root branch germ at 1",
                         lambda: continuation.sqrt_germ(1.0)),
    "germ-cbrt": Fixture("germ", "cube-root branch germ at 1",
                         lambda: continuation.power_branch_germ(1.0 / 3.0, 1.0)),
    "germ-log": Fixture("germ", "logarithm branch germ at 1",
                        lambda: continuation.log_germ(1.0)),
    "germ-exp": Fixture("germ", "entire exponential germ at 0",
                        lambda: continuation.exp_germ(0.0)),
    "germ-geometric": Fixture("germ", "geometric series germ of 1/(1-w) at 0",
                              lambda: continuation.geometric_germ(0.0)),
}

# Ten convex bases for the hull fixed-point sweep.
CONVEX_SUITE = ("interval", "square", "rect-2x1", "triangle", "hexagon",
                "pentagon-hull", "ball-2d", "ball-2d-r2", "box-3d", "tetrahedron")

# Full-fiber tubes for the imaginary-translation invariance sweep.
FULL_FIBER_TUBES = ("ball-tube", "square-tube", "shell-1-2-tube")

# Convex tubes for Levi and segment-principle sweeps.
CONVEX_TUBES = ("ball-tube", "square-tube", "hull-of-l-shape-tube", "ball-ball-tube")


def get(name: str):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}")
    return FIXTURES[name].factory()


def sheet_domain(name: str) -> sheeted.SheetedRealDomain:
    """Base fixture as a sheeted domain (covers map to their sheet space)."""
    fx = FIXTURES.get(name)
    if fx is None:
        raise KeyError(f"unknown fixture {name!r}")
    obj = fx.factory()
    if fx.kind == "cover":
        return covers.cover_sheet_domain(obj)
    if fx.kind == "base":
        return sheeted.Univalent(obj)
    raise KeyError(f"fixture {name!r} is not a base or cover")


def catalog() -> list[tuple[str, str, str]]:
    return [(name, fx.kind, fx.description) for name, fx in FIXTURES.items()]
