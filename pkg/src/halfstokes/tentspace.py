"""Conical and Carleson functionals, weighted tent norms, composite norms.

Conventions used throughout:
  - cone with aperture alpha over a boundary point x':
        Gamma_alpha(x') = {(y', y_n) : |x' - y'| < alpha * y_n},
  - conical functional
        A_q F(x') = (iint_{Gamma_alpha} |F|^q y_n^{1-n} dy)^{1/q},
    with the essential sup over the cone at q = inf,
  - Carleson functional: sup over balls B containing x' of
        (|B|^{-1} iint_{T(B)} |F|^q)^{1/q},  T(B_R) = B_R x (0, 2R),
  - weighted tent norm ||F||_{T^{p,q}_s} = ||y_n^{(1-n)s} F||_{T^{p,q}}.

Cone and box integrals clip to the truncated grid; tests that need exactness
use compactly supported fields away from the truncation boundary.  The sup
over Carleson balls runs over the dyadic family (lattice centers, radii
h * 2^k), which is comparable to the full sup and is itself a functional.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .grid import BoundaryField, GridError, SampledField
from .quadrature import csum, cumulative_vertical, lp_norm, unit_ball_volume


class TentError(ValueError):
    pass


@dataclass(frozen=True)
class TentParams:
    """Exponents selecting a tent-space norm (p may be inf, q finite)."""

    p: float
    q: float
    s: float = 0.0
    aperture: float = 1.0

    def __post_init__(self):
        if self.p < 1.0:
            raise TentError("p must be >= 1")
        if not (1.0 <= self.q < math.inf):
            raise TentError("q must be finite and >= 1")
        if self.aperture <= 0.0:
            raise TentError("aperture must be positive")
        if math.isinf(self.p) and self.s != 0.0:
            raise TentError("T^{inf,q}_s with s != 0 is not defined")


@dataclass(frozen=True)
class CompactBox:
    """Horizontal ball times a vertical interval, B_theta(center) x [a, b]."""

    center: tuple
    radius: float
    a: float
    b: float

    def __post_init__(self):
        if self.radius <= 0 or self.a <= 0 or self.b < self.a:
            raise TentError("need radius > 0 and 0 < a <= b")


def _torus_distance(grid, center=None):
    """Min-image distance of every lattice node from a center point."""
    ax = grid.horizontal_axis
    span = 2.0 * grid.extent
    if center is None:
        center = (0.0,) * (grid.dim - 1)
    d2 = 0.0
    for axis in range(grid.dim - 1):
        d = np.abs(ax - center[axis])
        d = np.minimum(d, span - d)
        shape = [1] * (grid.dim - 1)
        shape[axis] = len(ax)
        d2 = d2 + (d.reshape(shape)) ** 2
    return np.sqrt(d2)


def _offset_distance(grid):
    """Min-image distance of each lattice offset from the zero offset."""
    n_h = grid.n_horizontal
    span = 2.0 * grid.extent
    o = grid.step * np.arange(n_h)
    o = np.minimum(o, span - o)
    d2 = 0.0
    for axis in range(grid.dim - 1):
        shape = [1] * (grid.dim - 1)
        shape[axis] = n_h
        d2 = d2 + (o.reshape(shape)) ** 2
    return np.sqrt(d2)


def _ball_mask(dist, radius, step):
    """Antialiased ball indicator: linear ramp of width one cell at the rim.

    Sharper than the 0/1 indicator for radii comparable to the mesh width,
    where whole-cell counting misjudges the disk area badly.
    """
    return np.clip((radius - dist) / step + 0.5, 0.0, 1.0)


def _ball_convolve(slices, dist, radii, cell_area, step):
    """Per-level circular convolution with (antialiased) ball indicators.

    slices: (m, *hshape); radii: per-level ball radii.  Returns the array of
    integrals over {|x' - y'| < r_l} of slice_l, one per level.
    """
    axes = tuple(range(1, slices.ndim))
    shape = slices.shape[1:]
    spec = np.fft.rfftn(slices, axes=axes)
    out = np.empty_like(slices)
    for l, r in enumerate(radii):
        mask_hat = np.fft.rfftn(_ball_mask(dist, r, step))
        out[l] = np.fft.irfftn(spec[l] * mask_hat, s=shape,
                               axes=tuple(range(len(shape))))
    return out * cell_area


def _square_ball_footprint(ndim, reach):
    """Centered discrete ball of index-radius `reach` on a small cube."""
    ax = np.arange(-reach, reach + 1)
    d2 = 0.0
    for axis in range(ndim):
        shape = [1] * ndim
        shape[axis] = len(ax)
        d2 = d2 + (ax.reshape(shape)) ** 2
    return d2 <= reach ** 2


def _ball_footprint(dist, radius):
    fp = dist < radius
    if not fp.any():
        fp = dist <= 0.0
    return fp


def _scalar_values(field):
    if field.rank != 0:
        field = field.magnitude()
    return np.abs(field.values)


def conical_functional(field, q, alpha=1.0):
    """A_q with aperture alpha; q = inf gives the sup over the cone."""
    grid = field.grid
    if not hasattr(grid, "horizontal_axis"):
        raise TentError("conical functional needs a full periodic grid")
    if alpha <= 0:
        raise TentError("aperture must be positive")
    vals = _scalar_values(field)
    levels = np.asarray(grid.levels)
    dist = _offset_distance(grid)
    radii = alpha * levels
    if np.isinf(q):
        out = np.full(grid.horizontal_shape, -np.inf)
        for l in range(len(levels)):
            fp = _ball_footprint(dist, radii[l])
            fp = np.fft.fftshift(fp)  # maximum_filter expects centered footprint
            mx = ndimage.maximum_filter(vals[l], footprint=fp, mode="wrap")
            out = np.maximum(out, mx)
        return BoundaryField(dim=grid.dim, extent=grid.extent, step=grid.step,
                             rank=0, values=out)
    if q < 1.0:
        raise TentError("q must be >= 1")
    integ = _ball_convolve(vals ** q, dist, radii, grid.cell_area, grid.step)
    w = grid.vertical_weights() * levels ** (1.0 - grid.dim)
    acc = np.tensordot(w, integ, axes=(0, 0))
    out = np.maximum(acc, 0.0) ** (1.0 / q)
    return BoundaryField(dim=grid.dim, extent=grid.extent, step=grid.step,
                         rank=0, values=out)


def carleson_functional(field, q):
    """C_q via the dyadic ball family (lattice centers, radii h * 2^k)."""
    if not (1.0 <= q < math.inf):
        raise TentError("q must be finite and >= 1")
    grid = field.grid
    vals = _scalar_values(field) ** q
    levels = np.asarray(grid.levels)
    dist = _offset_distance(grid)
    v = unit_ball_volume(grid.dim - 1)
    out = np.zeros(grid.horizontal_shape)
    radius = grid.step
    k = 0
    while radius <= grid.extent + 1e-12:
        # mass of |F|^q in the box B_R(c) x (0, 2R), all centers at once
        col = cumulative_vertical(vals, levels, 2.0 * radius)
        box = _ball_convolve(col[None], dist, [radius], grid.cell_area,
                             grid.step)[0]
        # centers on the scale-R/2 sublattice; x' collects every such ball
        # within R of its own sublattice cell (a comparable dyadic family)
        stride = max(1, 2 ** (k - 1))
        coarse = box[(slice(None, None, stride),) * box.ndim]
        reach = int(math.ceil(radius / (stride * grid.step))) + 1
        fp = _square_ball_footprint(box.ndim, reach)
        best = ndimage.maximum_filter(coarse, footprint=fp, mode="wrap")
        for axis in range(box.ndim):
            best = np.repeat(best, stride, axis=axis)
        out = np.maximum(out, np.maximum(best, 0.0) / (v * radius ** (grid.dim - 1)))
        radius *= 2.0
        k += 1
    return BoundaryField(dim=grid.dim, extent=grid.extent, step=grid.step,
                         rank=0, values=out ** (1.0 / q))


def _apply_weight(field, s):
    if s == 0.0:
        return field
    grid = field.grid
    levels = np.asarray(grid.levels)
    w = levels ** ((1.0 - grid.dim) * s)
    shape = (len(levels),) + (1,) * (field.values.ndim - 1)
    return SampledField(grid=grid, rank=field.rank,
                        values=field.values * w.reshape(shape))


def weighted_tent_norm(field, params):
    """||F||_{T^{p,q}_s} on the truncated grid."""
    weighted = _apply_weight(field, params.s)
    if math.isinf(params.p):
        c = carleson_functional(weighted, params.q)
        return float(c.values.max())
    a = conical_functional(weighted, params.q, params.aperture)
    return lp_norm(a.values, params.p, a.cell_area)


def _sup_term(field, power):
    """sup over levels of x_n^power * ||slice||_inf."""
    vals = _scalar_values(field)
    levels = np.asarray(field.grid.levels)
    per = vals.reshape(len(levels), -1).max(axis=1)
    return float((levels ** power * per).max())


def space_norm_X(u_field, q):
    """X^q norm: sup x_n^{1/(q-1)} ||u||_inf + tent norm T^{p,q},
    p = (n-1)(q-1)q."""
    n = u_field.grid.dim
    if not q > n / (n - 1.0):
        raise TentError("X^q needs q > n/(n-1)")
    p = (n - 1.0) * (q - 1.0) * q
    sup = _sup_term(u_field, 1.0 / (q - 1.0))
    tent = weighted_tent_norm(u_field, TentParams(p=p, q=q))
    return sup + tent


def space_norm_Z(pi_field, q):
    """Z^q norm: T^{p,q}_{s0} with s0 = -1/(n-1), p = (n-1)(q-1)q."""
    n = pi_field.grid.dim
    if not q > n / (n - 1.0):
        raise TentError("Z^q needs q > n/(n-1)")
    p = (n - 1.0) * (q - 1.0) * q
    s0 = -1.0 / (n - 1.0)
    return weighted_tent_norm(pi_field, TentParams(p=p, q=q, s=s0))


def space_norm_Y(F_field, tau, eta):
    """Y^{tau,eta} norm: sup x_n^{1/eta+(n-1)/tau} ||F||_inf + T^{tau,eta}."""
    n = F_field.grid.dim
    if not (1.0 <= eta < tau < math.inf):
        raise TentError("Y^{tau,eta} needs 1 <= eta < tau < inf")
    sup = _sup_term(F_field, 1.0 / eta + (n - 1.0) / tau)
    tent = weighted_tent_norm(F_field, TentParams(p=tau, q=eta))
    return sup + tent


def shadow_measure(box, dim):
    """Lebesgue measure of the shadow {x' : cone over x' meets the box}.

    For B_theta(z') x [a, b] the shadow is the ball B_{theta+b}(z'), since the
    cone over x' reaches height b at horizontal distance b.
    """
    return unit_ball_volume(dim - 1) * (box.radius + box.b) ** (dim - 1)


def _support_clears_boundary(field):
    """True if the field vanishes on the outer horizontal ring and top level."""
    vals = _scalar_values(field)
    if vals[-1].max() > 0.0:
        return False
    for axis in range(1, vals.ndim):
        edge = np.take(vals, [0], axis=axis)
        if edge.max() > 0.0:
            return False
    return True


def averaging_identity_check(field, q):
    """Fubini identity: integral of A_q^q over the boundary vs mu * ||F||_q^q.

    mu = v_{n-1} (unit-ball volume of R^{n-1}): the x'-section of the cone
    condition |x' - y'| < y_n has measure v_{n-1} y_n^{n-1}, which cancels
    the cone weight y_n^{1-n}.
    """
    if not (1.0 <= q < math.inf):
        raise TentError("q must be finite and >= 1")
    if not _support_clears_boundary(field):
        raise TentError("field support touches the truncation boundary")
    grid = field.grid
    mu = unit_ball_volume(grid.dim - 1)
    a = conical_functional(field, q, alpha=1.0)
    lhs = csum(a.values ** q) * grid.cell_area
    vals = _scalar_values(field) ** q
    w = grid.vertical_weights()
    rhs = mu * csum(vals * w.reshape((-1,) + (1,) * (vals.ndim - 1))) * grid.cell_area
    return lhs, rhs, mu


def restrict_to_box(field, box):
    """Multiply a field by the indicator of a CompactBox."""
    grid = field.grid
    levels = np.asarray(grid.levels)
    hmask = _torus_distance(grid, box.center) < box.radius
    vmask = (levels >= box.a) & (levels <= box.b)
    if not vmask.any():
        raise TentError("box misses every vertical level")
    mask = vmask.reshape((-1,) + (1,) * (grid.dim - 1)) * hmask
    shape = mask.shape + (1,) * field.rank
    return SampledField(grid=grid, rank=field.rank,
                        values=field.values * mask.reshape(shape))


def local_lq_norm(field, box, q):
    """L^q norm of the field over a CompactBox (plain Lebesgue measure)."""
    grid = field.grid
    levels = np.asarray(grid.levels)
    vmask = (levels >= box.a) & (levels <= box.b)
    sub_levels = levels[vmask]
    if sub_levels.size == 0:
        raise TentError("box misses every vertical level")
    from .quadrature import vertical_weights
    if sub_levels.size == 1:
        w = np.array([box.b - box.a if box.b > box.a else 1.0])
    else:
        w = vertical_weights(sub_levels, extend_to_zero=False)
    hmask = _torus_distance(grid, box.center) < box.radius
    vals = _scalar_values(field)[vmask] ** q * hmask
    return (csum(vals * w.reshape((-1,) + (1,) * (grid.dim - 1)))
            * grid.cell_area) ** (1.0 / q)


def local_Lq_equivalence_check(field, box, p, q):
    """Ratios ||1_K F||_{T^{p,q}} / ||F||_{L^q(K)} and its reciprocal."""
    tent = weighted_tent_norm(restrict_to_box(field, box), TentParams(p=p, q=q))
    lq = local_lq_norm(field, box, q)
    if tent == 0.0 or lq == 0.0:
        raise TentError("field vanishes on the box")
    return tent / lq, lq / tent


def tent_holder_check(f_field, g_field, params0, params1, params2):
    """Holder in weighted tent spaces: ||fg||_0 vs ||f||_1 * ||g||_2."""
    for lhs, rhs in (((1.0 / params1.p if not math.isinf(params1.p) else 0.0)
                      + (1.0 / params2.p if not math.isinf(params2.p) else 0.0),
                      1.0 / params0.p if not math.isinf(params0.p) else 0.0),
                     (1.0 / params1.q + 1.0 / params2.q, 1.0 / params0.q),
                     (params1.s + params2.s, params0.s)):
        if abs(lhs - rhs) > 1e-12:
            raise TentError("Holder exponent relations violated")
    prod = SampledField(grid=f_field.grid, rank=0,
                        values=_scalar_values(f_field) * _scalar_values(g_field))
    lhs = weighted_tent_norm(prod, params0)
    rhs = (weighted_tent_norm(f_field, params1)
           * weighted_tent_norm(g_field, params2))
    return lhs, rhs
