"""Deterministic reductions and quadrature weights shared by every module.

All norm-type reductions go through compensated summation (math.fsum) so that
results do not depend on accumulation order beyond ~1e-12.
"""

import math

import numpy as np


def csum(values):
    """Compensated sum of an array (order-insensitive to ~1e-12)."""
    return math.fsum(np.asarray(values, dtype=float).ravel())


def unit_ball_volume(d):
    """Volume of the unit ball in R^d (d = 0 gives 1)."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


def sphere_area(n):
    """Surface area of the unit sphere S^{n-1} embedded in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def vertical_weights(levels, extend_to_zero=True):
    """Trapezoid weights for the graded vertical ladder.

    With extend_to_zero, the lowest level also carries the rectangle
    [0, levels[0]], so integrands that stay bounded near the boundary are
    integrated over the full interval (0, levels[-1]].
    """
    x = np.asarray(levels, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("levels must be a non-empty 1-D array")
    w = np.zeros_like(x)
    if x.size == 1:
        w[0] = x[0] if extend_to_zero else 0.0
        return w
    dx = np.diff(x)
    w[:-1] += 0.5 * dx
    w[1:] += 0.5 * dx
    if extend_to_zero:
        w[0] += x[0]
    return w


def cumulative_vertical(values, levels, t, extend_to_zero=True):
    """Integral of a level-sampled function over (0, t], trapezoid rule.

    values has the level axis first; t may fall between levels (linear
    interpolation of the integrand) or above the ladder (clamped).
    """
    x = np.asarray(levels, dtype=float)
    v = np.asarray(values, dtype=float)
    if t <= 0.0:
        return np.zeros(v.shape[1:])
    total = np.zeros(v.shape[1:])
    if extend_to_zero:
        total += v[0] * min(t, x[0])
    if t <= x[0]:
        return total
    for i in range(len(x) - 1):
        a, b = x[i], x[i + 1]
        if t <= a:
            break
        hi = min(t, b)
        # linear interpolant of v on [a, b]
        va = v[i]
        vb = v[i + 1]
        v_hi = va + (vb - va) * (hi - a) / (b - a)
        total += 0.5 * (va + v_hi) * (hi - a)
    return total


def lp_norm(values, p, cell_measure=1.0):
    """L^p norm of sampled values with uniform cell measure; p may be inf."""
    v = np.abs(np.asarray(values, dtype=float))
    if np.isinf(p):
        return float(v.max()) if v.size else 0.0
    return (csum(v ** p) * cell_measure) ** (1.0 / p)


def fornberg_weights(x0, x, m):
    """Finite-difference weights on arbitrary nodes (Fornberg's algorithm).

    Returns an array of shape (m + 1, len(x)); row k gives the weights for the
    k-th derivative at x0.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((m + 1, n))
    c1 = 1.0
    c4 = x[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


def vertical_derivative(values, levels, order, stencil=5):
    """Derivative along the level axis on the graded ladder.

    Uses sliding Fornberg stencils (default 5 points) so the accuracy does not
    degrade to first order on non-uniform ladders.
    """
    x = np.asarray(levels, dtype=float)
    v = np.asarray(values, dtype=float)
    m = len(x)
    if m < order + 1:
        raise ValueError("not enough levels for the requested derivative")
    npts = min(stencil, m)
    out = np.zeros_like(v)
    half = npts // 2
    for i in range(m):
        lo = min(max(i - half, 0), m - npts)
        sel = slice(lo, lo + npts)
        w = fornberg_weights(x[i], x[sel], order)[order]
        out[i] = np.tensordot(w, v[sel], axes=(0, 0))
    return out
