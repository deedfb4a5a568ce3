"""Numpy fallback for the hot kernels (see _speedups.pyx for the C twin).

Both backends implement the same three entry points over a packed
closed-form tube description:

  base kinds: 0 ball, 1 shell, 2 half-space polytope, 3 planar segment set
  fiber kinds: 0 full space, 1 ball

Distances are positive inside the domain; callers guarantee interiority,
non-positive deltas surface as NaN from the -log evaluation.
"""

from __future__ import annotations

import numpy as np

BASE_BALL, BASE_SHELL, BASE_POLY, BASE_SEGS = 0, 1, 2, 3
FIBER_FULL, FIBER_BALL = 0, 1


def base_distance(base_kind, base_a, base_b, X):
    X = np.atleast_2d(X)
    if base_kind == BASE_BALL:
        return base_b[0] - np.linalg.norm(X - base_a[0], axis=1)
    if base_kind == BASE_SHELL:
        r = np.linalg.norm(X - base_a[0], axis=1)
        inner = r - base_b[0]
        if np.isinf(base_b[1]):
            return inner
        return np.minimum(inner, base_b[1] - r)
    if base_kind == BASE_POLY:
        return np.min(base_b[None, :] - X @ base_a.T, axis=1)
    if base_kind == BASE_SEGS:
        a = base_a[None, :, 0:2]
        d = base_a[None, :, 2:4] - a
        pa = X[:, None, :] - a
        denom = np.einsum("ijk,ijk->ij", d, d)
        t = np.clip(np.einsum("ijk,ijk->ij", pa, d) / denom, 0.0, 1.0)
        proj = a + t[:, :, None] * d
        return np.linalg.norm(X[:, None, :] - proj, axis=2).min(axis=1)
    raise ValueError(f"unknown base kind {base_kind}")


def tube_delta(base_kind, base_a, base_b, fiber_kind, fiber_center, fiber_radius, X, Y):
    d = base_distance(base_kind, base_a, base_b, X)
    if fiber_kind == FIBER_BALL:
        df = fiber_radius - np.linalg.norm(np.atleast_2d(Y) - fiber_center, axis=1)
        d = np.minimum(d, df)
    return d


def neg_log_delta(base_kind, base_a, base_b, fiber_kind, fiber_center, fiber_radius, X, Y):
    d = tube_delta(base_kind, base_a, base_b, fiber_kind, fiber_center, fiber_radius, X, Y)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -np.log(d)
    out[~(d > 0.0)] = np.nan
    return out


def levi_min_scan(base_kind, base_a, base_b, fiber_kind, fiber_center, fiber_radius,
                  x, y, wre, wim, h):
    """Min 5-point Levi quotient of -log(delta) over a direction set.

    Returns (min_value, argmin_index); NaN propagates when a stencil
    point leaves the domain.
    """
    k = wre.shape[0]
    # stencil: z +/- h w and z +/- i h w per direction
    Xs = np.concatenate([
        x[None, :] + h * wre,
        x[None, :] - h * wre,
        x[None, :] - h * wim,
        x[None, :] + h * wim,
    ])
    Ys = np.concatenate([
        y[None, :] + h * wim,
        y[None, :] - h * wim,
        y[None, :] + h * wre,
        y[None, :] - h * wre,
    ])
    phi = neg_log_delta(base_kind, base_a, base_b, fiber_kind, fiber_center,
                        fiber_radius, Xs, Ys)
    phi0 = neg_log_delta(base_kind, base_a, base_b, fiber_kind, fiber_center,
                         fiber_radius, x[None, :], y[None, :])[0]
    if np.isnan(phi0) or np.any(np.isnan(phi)):
        return float("nan"), -1
    quads = phi.reshape(4, k).sum(axis=0)
    vals = (quads - 4.0 * phi0) / (4.0 * h * h)
    idx = int(np.argmin(vals))
    return float(vals[idx]), idx
