# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of _kernels_py; same entry points, scalar C loops."""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, NAN, fmax, fmin, isnan, log, sqrt

BASE_BALL, BASE_SHELL, BASE_POLY, BASE_SEGS = 0, 1, 2, 3
FIBER_FULL, FIBER_BALL = 0, 1


cdef double _norm_diff(const double[:] p, const double[:] c, Py_ssize_t n) noexcept nogil:
    cdef double s = 0.0, d
    cdef Py_ssize_t i
    for i in range(n):
        d = p[i] - c[i]
        s += d * d
    return sqrt(s)


cdef double _base_dist(int kind, const double[:, :] a, const double[:] b,
                       const double[:] x, Py_ssize_t n) noexcept nogil:
    cdef double r, best, m, ax, ay, dx, dy, px, py, t, denom
    cdef Py_ssize_t i, j
    if kind == 0:  # ball
        return b[0] - _norm_diff(x, a[0], n)
    if kind == 1:  # shell
        r = _norm_diff(x, a[0], n)
        best = r - b[0]
        if b[1] != INFINITY:
            best = fmin(best, b[1] - r)
        return best
    if kind == 2:  # polytope: min margin over unit-normal half-spaces
        best = INFINITY
        for i in range(a.shape[0]):
            m = b[i]
            for j in range(n):
                m -= a[i, j] * x[j]
            best = fmin(best, m)
        return best
    # planar segment set
    best = INFINITY
    for i in range(a.shape[0]):
        ax = a[i, 0]; ay = a[i, 1]
        dx = a[i, 2] - ax; dy = a[i, 3] - ay
        px = x[0] - ax; py = x[1] - ay
        denom = dx * dx + dy * dy
        t = (px * dx + py * dy) / denom
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        px -= t * dx; py -= t * dy
        best = fmin(best, sqrt(px * px + py * py))
    return best


cdef double _delta(int base_kind, const double[:, :] base_a, const double[:] base_b,
                   int fiber_kind, const double[:] fc, double fr,
                   const double[:] x, const double[:] y, Py_ssize_t n) noexcept nogil:
    cdef double d = _base_dist(base_kind, base_a, base_b, x, n)
    if fiber_kind == 1:
        d = fmin(d, fr - _norm_diff(y, fc, n))
    return d


def base_distance(int base_kind, cnp.ndarray base_a, cnp.ndarray base_b, cnp.ndarray X):
    cdef const double[:, :] a = np.ascontiguousarray(base_a, dtype=np.float64)
    cdef const double[:] b = np.ascontiguousarray(base_b, dtype=np.float64).ravel()
    cdef const double[:, :] pts = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    cdef Py_ssize_t m = pts.shape[0], n = pts.shape[1], i
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[:] out = out_arr
    for i in range(m):
        out[i] = _base_dist(base_kind, a, b, pts[i], n)
    return out_arr


def tube_delta(int base_kind, cnp.ndarray base_a, cnp.ndarray base_b,
               int fiber_kind, cnp.ndarray fiber_center, double fiber_radius,
               cnp.ndarray X, cnp.ndarray Y):
    cdef const double[:, :] a = np.ascontiguousarray(base_a, dtype=np.float64)
    cdef const double[:] b = np.ascontiguousarray(base_b, dtype=np.float64).ravel()
    cdef const double[:] fc = np.ascontiguousarray(fiber_center, dtype=np.float64).ravel()
    cdef const double[:, :] xs = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    cdef const double[:, :] ys = np.ascontiguousarray(np.atleast_2d(Y), dtype=np.float64)
    cdef Py_ssize_t m = xs.shape[0], n = xs.shape[1], i
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[:] out = out_arr
    for i in range(m):
        out[i] = _delta(base_kind, a, b, fiber_kind, fc, fiber_radius, xs[i], ys[i], n)
    return out_arr


def neg_log_delta(int base_kind, cnp.ndarray base_a, cnp.ndarray base_b,
                  int fiber_kind, cnp.ndarray fiber_center, double fiber_radius,
                  cnp.ndarray X, cnp.ndarray Y):
    d_arr = tube_delta(base_kind, base_a, base_b, fiber_kind, fiber_center,
                       fiber_radius, X, Y)
    cdef double[:] d = d_arr
    cdef Py_ssize_t i
    for i in range(d.shape[0]):
        d[i] = -log(d[i]) if d[i] > 0.0 else NAN
    return d_arr


def levi_min_scan(int base_kind, cnp.ndarray base_a, cnp.ndarray base_b,
                  int fiber_kind, cnp.ndarray fiber_center, double fiber_radius,
                  cnp.ndarray x, cnp.ndarray y,
                  cnp.ndarray wre, cnp.ndarray wim, double h):
    cdef const double[:, :] a = np.ascontiguousarray(base_a, dtype=np.float64)
    cdef const double[:] b = np.ascontiguousarray(base_b, dtype=np.float64).ravel()
    cdef const double[:] fc = np.ascontiguousarray(fiber_center, dtype=np.float64).ravel()
    cdef const double[:] x0 = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef const double[:] y0 = np.ascontiguousarray(y, dtype=np.float64).ravel()
    cdef const double[:, :] wr = np.ascontiguousarray(wre, dtype=np.float64)
    cdef const double[:, :] wi = np.ascontiguousarray(wim, dtype=np.float64)
    cdef Py_ssize_t k = wr.shape[0], n = x0.shape[0], j, i, s
    cdef double phi0, d, quad, val, best = INFINITY
    cdef Py_ssize_t best_idx = -1
    px_arr = np.empty(n, dtype=np.float64)
    py_arr = np.empty(n, dtype=np.float64)
    cdef double[:] px = px_arr, py = py_arr

    d = _delta(base_kind, a, b, fiber_kind, fc, fiber_radius, x0, y0, n)
    if d <= 0.0:
        return float("nan"), -1
    phi0 = -log(d)

    for j in range(k):
        quad = 0.0
        for s in range(4):
            for i in range(n):
                if s == 0:
                    px[i] = x0[i] + h * wr[j, i]; py[i] = y0[i] + h * wi[j, i]
                elif s == 1:
                    px[i] = x0[i] - h * wr[j, i]; py[i] = y0[i] - h * wi[j, i]
                elif s == 2:
                    px[i] = x0[i] - h * wi[j, i]; py[i] = y0[i] + h * wr[j, i]
                else:
                    px[i] = x0[i] + h * wi[j, i]; py[i] = y0[i] - h * wr[j, i]
            d = _delta(base_kind, a, b, fiber_kind, fc, fiber_radius, px, py, n)
            if d <= 0.0:
                return float("nan"), -1
            quad += -log(d)
        val = (quad - 4.0 * phi0) / (4.0 * h * h)
        if val < best:
            best = val
            best_idx = j
    return best, best_idx
