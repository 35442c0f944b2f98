"""Integral operators on the truncated half-space.

  - stokes_extend: homogeneous Stokes extension of boundary data (velocity
    and pressure), evaluated per horizontal frequency in closed form,
  - green_system: zero-boundary inhomogeneous Stokes solution driven by a
    vector forcing F and/or a tensor forcing H (entering as div H), with a
    horizontal-spectral path (any dimension) and a direct wall-Green-tensor
    path (n = 3) used for cross-checks,
  - riesz_potential / g_beta: power-law convolutions on the boundary and in
    the half-space (direct summation, analytic self-cell corrections),
  - mixed_norm and the boundedness / linear-estimate suites.

The horizontal transform periodizes the kernels; every estimate test keeps
data compactly supported well inside the truncation box.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, spectral, tentspace
from .freqspace import frequency_grid, sobolev_neg_half_norm
from .grid import BoundaryField, GridError, SampledField
from .quadrature import csum, unit_ball_volume, vertical_weights


class PotentialError(ValueError):
    pass


class ExponentError(PotentialError):
    """Raised when requested exponents are off the estimate's scaling line."""


@dataclass(frozen=True)
class PotentialConfig:
    dim: int = 3
    path: str = "spectral"        # "spectral" | "direct"
    tolerance: float = 1e-8

    def __post_init__(self):
        if self.tolerance <= 0:
            raise PotentialError("tolerance must be positive")
        if self.path not in ("spectral", "direct"):
            raise PotentialError("unknown evaluation path")
        if self.path == "direct" and self.dim != 3:
            raise PotentialError("direct kernel path needs n = 3")


@dataclass(frozen=True)
class MixedNormParams:
    p: float
    q: float
    weight: float = 0.0

    def __post_init__(self):
        if self.p < 1.0 or self.q < 1.0:
            raise PotentialError("p, q must be >= 1")
        if self.weight < 0.0:
            raise PotentialError("weight power must be >= 0")


# --- spectral layout helpers ---------------------------------------------------

def _flat_freqs(dim, extent, step):
    xi, kmag = frequency_grid(dim, extent, step)
    spec_shape = kmag.shape
    return xi.reshape(-1, dim - 1), kmag.reshape(-1), spec_shape


def _strip_nyquist(spec, axes, n_h):
    """Zero the (sign-ambiguous) Nyquist modes so odd symbols stay exact.

    The real transform cannot carry the odd part of a symbol at the Nyquist
    frequency; keeping those modes breaks exact solenoidality by the size of
    the data's Nyquist content.  Projecting them out makes every spectral
    operator act only on faithfully representable modes.
    """
    for ax in axes:
        idx = [slice(None)] * spec.ndim
        idx[ax] = n_h // 2 if spec.shape[ax] == n_h else spec.shape[ax] - 1
        spec[tuple(idx)] = 0.0
    return spec


def _boundary_to_spec(f):
    axes = tuple(range(f.dim - 1))
    spec = np.fft.rfftn(f.values, axes=axes)
    spec = _strip_nyquist(spec, axes, f.values.shape[0])
    comp = f.values.shape[f.dim - 1:]
    return spec.reshape((-1,) + comp)


def _field_to_spec(field):
    grid = field.grid
    axes = tuple(range(1, grid.dim))
    spec = np.fft.rfftn(field.values, axes=axes)
    spec = _strip_nyquist(spec, axes, field.values.shape[1])
    m = len(grid.levels)
    comp = field.values.shape[grid.dim:]
    flat = spec.reshape((m, -1) + comp)
    return np.moveaxis(flat, 0, 1)       # (K, m, *comp)


def _spec_to_levels(spec, grid, spec_shape, n_targets):
    """(K, mx, *comp) complex -> real values (mx, *hshape, *comp)."""
    comp = spec.shape[2:]
    arr = np.moveaxis(spec, 1, 0).reshape((n_targets,) + spec_shape + comp)
    axes = tuple(range(1, grid.dim))
    return np.fft.irfftn(arr, s=grid.horizontal_shape, axes=axes)


# --- Stokes extension -----------------------------------------------------------

def _extend_raw(f, grid, x_levels):
    """Velocity/pressure slices of the extension at arbitrary heights."""
    if f.rank != 1:
        raise PotentialError("boundary datum must be a vector field")
    if not f.matches(grid):
        raise GridError("boundary field does not match the grid lattice")
    x = np.asarray(x_levels, dtype=float)
    if x.size == 0 or np.any(x <= 0):
        raise PotentialError("extension heights must be positive")
    xi, k, spec_shape = _flat_freqs(f.dim, f.extent, f.step)
    fhat = _boundary_to_spec(f)
    n = f.dim
    u = np.zeros((len(k), len(x), n), dtype=complex)
    p = np.zeros((len(k), len(x)), dtype=complex)
    u[1:], p[1:] = spectral.extend_apply(xi[1:], k[1:], x, fhat[1:])
    u[0], p[0] = spectral.extend_zero_mode(x, fhat[0])
    u_vals = _spec_to_levels(u, _GridView(grid), spec_shape, len(x))
    p_vals = _spec_to_levels(p, _GridView(grid), spec_shape, len(x))
    return u_vals, p_vals


class _GridView:
    """Minimal adapter exposing dim / horizontal_shape for back-transforms."""

    def __init__(self, grid):
        self.dim = grid.dim
        self.horizontal_shape = grid.horizontal_shape


def stokes_extend(f, grid):
    """Homogeneous Stokes extension (u, pi) of Dirichlet data f."""
    u_vals, p_vals = _extend_raw(f, grid, np.asarray(grid.levels))
    return (SampledField(grid=grid, rank=1, values=u_vals),
            SampledField(grid=grid, rank=0, values=p_vals))


def stokes_extend_slices(f, grid, x_levels):
    """Raw (u, pi) slices at arbitrary heights (for residual stencils)."""
    return _extend_raw(f, grid, x_levels)


# --- Green potentials -----------------------------------------------------------

def _green_raw(F, H, x_levels):
    grid = (F or H).grid
    if F is not None and F.rank != 1:
        raise PotentialError("F must be a vector field")
    if H is not None and H.rank != 2:
        raise PotentialError("H must be a tensor field")
    if F is not None and H is not None and F.grid != H.grid:
        raise PotentialError("F and H must share a grid")
    n = grid.dim
    x = np.asarray(x_levels, dtype=float)
    y = np.asarray(grid.levels)
    w = vertical_weights(y)
    xi, k, spec_shape = _flat_freqs(grid.dim, grid.extent, grid.step)

    if F is None:
        F = SampledField.zeros(grid, rank=1)
    Fhat = _field_to_spec(F)
    Hhat = _field_to_spec(H) if H is not None else None

    v = np.zeros((len(k), len(x), n), dtype=complex)
    p = np.zeros((len(k), len(x)), dtype=complex)
    v[1:], p[1:] = spectral.green_apply(
        xi[1:], k[1:], x, y, w, Fhat[1:],
        None if Hhat is None else Hhat[1:])
    v[0], p[0] = spectral.green_apply_zero_mode(
        x, y, w, Fhat[0], None if Hhat is None else Hhat[0])
    view = _GridView(grid)
    return (_spec_to_levels(v, view, spec_shape, len(x)),
            _spec_to_levels(p, view, spec_shape, len(x)))


def green_system(F, H=None, config=None):
    """Zero-boundary Stokes solution (v, w) with forcing F + div H.

    Pressure is normalized to horizontal mean zero at the top level.
    """
    if config is not None and config.path == "direct":
        raise PotentialError("direct path evaluates at points; use "
                             "green_velocity_direct for cross-checks")
    grid = (F or H).grid
    v_vals, p_vals = _green_raw(F, H, np.asarray(grid.levels))
    p_vals = p_vals - p_vals[-1].mean()
    return (SampledField(grid=grid, rank=1, values=v_vals),
            SampledField(grid=grid, rank=0, values=p_vals))


def green_potential(F, H=None, config=None):
    return green_system(F, H, config)[0]


def pressure_potential(F, H=None, config=None):
    return green_system(F, H, config)[1]


def green_slices(F, H, x_levels):
    """Raw (v, w) slices at arbitrary heights (for residual stencils)."""
    return _green_raw(F, H, np.asarray(x_levels, dtype=float))


def green_velocity_direct(F, targets, H=None, images=1):
    """Direct wall-Green-tensor evaluation of the velocity at given points.

    n = 3 only.  Sources are the grid cells of F / H with nonzero data
    (volume = h^2 * trapezoid weight), summed over `images` shells of
    horizontal periodic copies so the result is comparable with the
    (intrinsically periodic) spectral path.  The singular self-cell uses the
    analytic Stokeslet ball average (integral of E over an equal-volume
    ball = r0^2/3 * identity) plus the smooth image part at the point.
    """
    grid = F.grid if F is not None else H.grid
    if grid.dim != 3:
        raise PotentialError("direct kernel path needs n = 3")
    pts = grid.points().reshape(-1, 3)
    w = vertical_weights(np.asarray(grid.levels))
    vol = (w[:, None, None] * np.ones(grid.horizontal_shape)).reshape(-1) \
        * grid.cell_area
    Fv = F.values.reshape(-1, 3) if F is not None else np.zeros_like(pts)
    Hv = H.values.reshape(-1, 3, 3) if H is not None else None
    live = np.any(Fv != 0.0, axis=1)
    if Hv is not None:
        live |= np.any(Hv != 0.0, axis=(1, 2))
    pts, vol, Fv = pts[live], vol[live], Fv[live]
    if Hv is not None:
        Hv = Hv[live]
    span = 2.0 * grid.extent
    shifts = np.array([(span * i, span * j, 0.0)
                       for i in range(-images, images + 1)
                       for j in range(-images, images + 1)])
    targets = np.asarray(targets, dtype=float)
    out = np.zeros((len(targets), 3))
    for t0, x in enumerate(targets):
        acc = np.zeros(3)
        for shift in shifts:
            y = pts + shift
            d2 = np.sum((y - x) ** 2, axis=1)
            idx_self = int(np.argmin(d2)) if len(d2) else -1
            is_node = len(d2) > 0 and d2[idx_self] < 1e-24
            mask = np.ones(len(y), dtype=bool)
            if is_node:
                mask[idx_self] = False
            G = kernels.wall_green_G(x, y[mask])
            acc += np.einsum("mij,mj,m->i", G, Fv[mask], vol[mask])
            if Hv is not None:
                dG = kernels.wall_green_G_grad_y(x, y[mask])
                acc -= np.einsum("mkij,mjk,m->i", dG, Hv[mask], vol[mask])
            if is_node:
                r0 = (3.0 * vol[idx_self] / (4.0 * math.pi)) ** (1.0 / 3.0)
                acc += (r0 ** 2 / 3.0) * Fv[idx_self]
                acc += _wall_image_at_source(x) @ Fv[idx_self] * vol[idx_self]
        out[t0] = acc
    return out


def _wall_image_at_source(x):
    """Image-system part of the wall Green tensor at coincident points."""
    h = x[2]
    Rs = np.array([0.0, 0.0, 2.0 * h])
    core = (-kernels._stokeslet_block(Rs)
            + 2.0 * h * kernels._MIRROR_SIGN[None, :]
            * (h * kernels._pot_doublet(Rs) - kernels._stokes_doublet(Rs)))
    return core / (8.0 * math.pi)


# --- scalar power-law potentials -------------------------------------------------

def riesz_potential(g, alpha):
    """Riesz potential I_alpha on the boundary lattice (direct summation)."""
    if g.rank != 0:
        raise PotentialError("Riesz potential acts on scalar data")
    d = g.dim - 1
    if not (0.0 < alpha < d):
        raise PotentialError("alpha must lie in (0, n-1)")
    tmpl = g.horizontal_axis
    mesh = np.meshgrid(*([tmpl] * d), indexing="ij")
    pts = np.stack(mesh, axis=-1).reshape(-1, d)
    vals = riesz_point(g, pts, alpha)
    return g.map_values(lambda _: vals.reshape(g.horizontal_shape))


def riesz_point(g, points, alpha):
    """I_alpha g at arbitrary points of R^{n-1} (true plane, no wrap)."""
    d = g.dim - 1
    if not (0.0 < alpha < d):
        raise PotentialError("alpha must lie in (0, n-1)")
    mesh = np.meshgrid(*([g.horizontal_axis] * d), indexing="ij")
    src = np.stack(mesh, axis=-1).reshape(-1, d)
    gv = g.values.reshape(-1)
    area = g.cell_area
    points = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty(len(points))
    # equal-area disk/interval radius for the self-cell correction
    v = unit_ball_volume(d)
    r0 = (area / v) ** (1.0 / d)
    surf = kernels.sphere_area(d) if d >= 2 else 2.0
    self_corr = surf * r0 ** alpha / alpha
    for i, x in enumerate(points):
        r = np.sqrt(np.sum((src - x) ** 2, axis=1))
        near = r < 0.5 * g.step
        contrib = np.where(near, 0.0, np.where(near, 1.0, r) ** (alpha - d))
        out[i] = csum(contrib * gv) * area + self_corr * np.sum(gv[near])
    return out


def g_beta(F, beta):
    """Half-space fractional potential G_beta on the grid nodes."""
    grid = F.grid
    vals = g_beta_point(F, grid.points().reshape(-1, grid.dim), beta)
    return SampledField(grid=grid, rank=0,
                        values=vals.reshape(grid.shape))


def g_beta_point(F, points, beta, chunk=4096):
    """G_beta F at arbitrary points of the half-space."""
    grid = F.grid
    n = grid.dim
    if not (0.0 < beta < n):
        raise PotentialError("beta must lie in (0, n)")
    if F.rank != 0:
        raise PotentialError("G_beta acts on scalar fields")
    src = grid.points().reshape(-1, n)
    w = vertical_weights(np.asarray(grid.levels))
    vol = (w[:, None] * np.ones((1,) + (int(np.prod(grid.horizontal_shape)),))
           ).reshape(-1) * grid.cell_area
    Fv = F.values.reshape(-1)
    live = Fv != 0.0
    src, vol, Fv = src[live], vol[live], Fv[live]
    points = np.atleast_2d(np.asarray(points, dtype=float))
    out = np.empty(len(points))
    vball = unit_ball_volume(n)
    surf = kernels.sphere_area(n)
    for i0 in range(0, len(points), chunk):
        sel = points[i0:i0 + chunk]
        r = np.sqrt(((sel[:, None, :] - src[None, :, :]) ** 2).sum(axis=2))
        r0 = (vol / vball) ** (1.0 / n)       # equal-volume ball radius
        near = r < 1e-9                       # only the coincident cell
        kern = np.where(near, 0.0, np.where(near, 1.0, r) ** (beta - n))
        self_corr = surf * r0 ** beta / beta
        out[i0:i0 + chunk] = kern @ (Fv * vol) + near @ (self_corr * Fv)
    return out


# --- mixed norms and estimate suites ---------------------------------------------

def mixed_norm(F, params):
    """L^p (horizontal) of the vertical L^q norm, optional weight y^b."""
    grid = F.grid
    vals = np.abs(F.values if F.rank == 0 else F.magnitude().values)
    levels = np.asarray(grid.levels)
    if params.weight:
        vals = vals * (levels ** params.weight).reshape(
            (-1,) + (1,) * (vals.ndim - 1))
    if math.isinf(params.q):
        inner = vals.max(axis=0)
    else:
        w = vertical_weights(levels)
        inner = np.tensordot(w, vals ** params.q, axes=(0, 0)) \
            ** (1.0 / params.q)
    from .quadrature import lp_norm
    return lp_norm(inner, params.p, grid.cell_area)


def _require(cond, msg):
    if not cond:
        raise ExponentError(msg)


def gbeta_boundedness_check(family, beta, exponents):
    """Ratio report for the G_beta mixed-norm estimate.

    exponents: {"tau", "eta", "p", "q"} for the unweighted estimate on the
    scaling line (n-1)/p = (n-1)/tau + 1/eta - 1/q - beta, or additionally
    {"r", "b"} for the weighted variant (target weight power 1, source
    weight power b).  Refuses to run off the scaling line.
    """
    if not family:
        raise PotentialError("family is empty")
    n = family[0].grid.dim
    eta, q = exponents["eta"], exponents["q"]
    weighted = "b" in exponents
    if weighted:
        r, p, b = exponents["r"], exponents["p"], exponents["b"]
        _require(abs((2.0 + 1.0 / q)
                     - ((n - 1.0) * (1.0 / r - 1.0 / p) + 1.0 / eta + b
                        - (beta - 1.0))) < 1e-9,
                 "weighted exponents off the scaling line")
        _require(1.0 < r < p < math.inf and b >= 1.0,
                 "weighted exponents out of range")
        _require(n > beta + 2.0 + 1.0 / q - 1.0 / eta - b,
                 "weighted dimensional condition violated")
        src = MixedNormParams(p=r, q=eta, weight=b)
        dst = MixedNormParams(p=p, q=q, weight=1.0)
    else:
        tau, p = exponents["tau"], exponents["p"]
        _require(abs((n - 1.0) / p
                     - ((n - 1.0) / tau + 1.0 / eta - 1.0 / q - beta)) < 1e-9,
                 "exponents off the scaling line")
        _require(1.0 < tau < math.inf and 1.0 <= eta <= q <= p < math.inf,
                 "exponents out of range")
        _require(1.0 / eta < beta + 1.0 / q, "integrability condition violated")
        src = MixedNormParams(p=tau, q=eta)
        dst = MixedNormParams(p=p, q=q)
    ratios = []
    for F in family:
        denom = mixed_norm(F, src)
        if denom == 0.0:
            raise PotentialError("zero member in the family")
        ratios.append(mixed_norm(g_beta(F, beta), dst) / denom)
    ratios = np.asarray(ratios)
    return {"estimate": "G_beta mixed-norm" + (" (weighted)" if weighted else ""),
            "beta": beta, "exponents": dict(exponents),
            "ratios": [float(x) for x in ratios],
            "max": float(ratios.max()), "min": float(ratios.min()),
            "spread": float(ratios.max() / ratios.min())}


def linear_estimate_suite(boundary_family, forcing_family, q, grid,
                          forcing_exponents=None):
    """Ratio reports for the linear boundary and forcing estimates.

    For each boundary datum f: (||Hf||_X + ||Ef||_Z + sup x_n^{q/(q-1)}
    ||Ef||_inf) / ||f||_{F^{-1/q}_{p,q}}.  For each forcing pair (F, H):
    (||G(F,H)||_X + ||Psi(F,H)||_Z) / (||F||_Y + ||H||_Y) with exponents on
    the scaling lines 1/eta + (n-1)/tau = 2 + 1/(q-1) = 1 + 1/sigma +
    (n-1)/Lambda.
    """
    n = grid.dim
    report = {"q": q, "boundary_ratios": [], "forcing_ratios": []}
    for f in boundary_family or []:
        denom = sobolev_neg_half_norm(f) if q == 2.0 else _tl_data_norm(f, q)
        if denom == 0.0:
            raise PotentialError("zero boundary datum in the family")
        u, pi = stokes_extend(f, grid)
        sup_e = tentspace._sup_term(pi, q / (q - 1.0))
        num = (tentspace.space_norm_X(u, q) + tentspace.space_norm_Z(pi, q)
               + sup_e)
        report["boundary_ratios"].append(num / denom)
    if forcing_family:
        exps = forcing_exponents or default_forcing_exponents(n, q)
        tau, eta = exps.get("tau"), exps.get("eta")
        lam, sig = exps.get("Lambda"), exps.get("sigma")
        target = 2.0 + 1.0 / (q - 1.0)
        if any(F is not None for F, _ in forcing_family):
            _require(tau is not None and eta is not None
                     and abs(1.0 / eta + (n - 1.0) / tau - target) < 1e-9,
                     "(tau, eta) off the scaling line")
        if any(H is not None for _, H in forcing_family):
            _require(lam is not None and sig is not None
                     and abs(1.0 + 1.0 / sig + (n - 1.0) / lam - target) < 1e-9,
                     "(Lambda, sigma) off the scaling line")
        for F, H in forcing_family:
            denom = 0.0
            if F is not None:
                denom += tentspace.space_norm_Y(F, tau, eta)
            if H is not None:
                denom += tentspace.space_norm_Y(H, lam, sig)
            if denom == 0.0:
                raise PotentialError("zero forcing pair in the family")
            v, wp = green_system(F, H)
            num = tentspace.space_norm_X(v, q) + tentspace.space_norm_Z(wp, q)
            report["forcing_ratios"].append(num / denom)
    for key in ("boundary_ratios", "forcing_ratios"):
        vals = np.asarray(report[key])
        if vals.size:
            report[key[:-7] + "_spread"] = float(vals.max() / vals.min())
            report[key[:-7] + "_max"] = float(vals.max())
        report[key] = [float(x) for x in vals]
    return report


def _tl_data_norm(f, q):
    from .freqspace import TLParams, tl_norm
    n = f.dim
    p = (n - 1.0) * q * (q - 1.0)
    return tl_norm(f, TLParams(s=-1.0 / q, p=p, q=q))


def default_forcing_exponents(n, q):
    """Exponents on the scaling line 1/eta + (n-1)/tau = 2 + 1/(q-1).

    The H-slot uses (Lambda, sigma) = (n-1, 1) when q = 2 (the base choice).
    The F-slot line 1/eta + (n-1)/tau = 2 + 1/(q-1) with 1 <= eta < tau is
    empty at (n, q) = (3, 2) (the target value 3 is the supremum of the
    admissible region), so tau/eta are only provided when solvable: we pick
    1/eta = (target + 1)/3 and 1/tau = (n-1)^{-1}(target - 1/eta) and keep
    them only if the ordering constraints hold.
    """
    target = 2.0 + 1.0 / (q - 1.0)
    out = {}
    if q == 2.0:
        out["Lambda"], out["sigma"] = float(n - 1.0), 1.0
    else:
        # 1 + 1/sigma + (n-1)/Lambda = target with 1 <= sigma < Lambda
        inv_sig = min(1.0, 2.0 * (target - 1.0) / 3.0)
        inv_lam = (target - 1.0 - inv_sig) / (n - 1.0)
        if 0.0 < inv_lam < inv_sig <= 1.0:
            out["Lambda"], out["sigma"] = 1.0 / inv_lam, 1.0 / inv_sig
    inv_eta = min(0.95, (target + 1.0) / 3.0)  # eta > 1 strictly (Prop. range)
    inv_tau = (target - inv_eta) / (n - 1.0)
    if 0.0 < inv_tau < inv_eta <= 1.0:
        out["tau"], out["eta"] = 1.0 / inv_tau, 1.0 / inv_eta
    return out
