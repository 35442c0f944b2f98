"""Small-data Picard iteration for steady Navier-Stokes in the half-space.

The fixed-point map is

    L(u, pi) = (Hf + G[F, u (x) u],  Ef + Psi[F, u (x) u])

where (Hf, Ef) is the homogeneous Stokes extension of the boundary datum and
(G, Psi) the zero-boundary Green potentials.  The momentum equation solved is
-Delta u + grad pi + u . grad u = F, so the quadratic term enters the tensor
slot of the Green potential as -(u (x) u): the potential with tensor slot H
produces right side F + div H, and u . grad u = div(u (x) u) for solenoidal u.

Contraction is monitored through the composite X x Z norm; divergence is
declared after three consecutive increment ratios >= 1.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import potentials, tentspace
from .freqspace import sobolev_neg_half_norm
from .grid import GridError, SampledField, interior_restrict
from .quadrature import csum, vertical_derivative


class SolverError(ValueError):
    pass


class PicardDivergenceError(SolverError):
    def __init__(self, message, rho_history):
        super().__init__(message)
        self.rho_history = list(rho_history)


@dataclass
class SolveConfig:
    dim: int = 3
    q: float = 2.0
    tolerance: float = 1e-10
    max_iterations: int = 40
    smallness: float = 1.0       # configured budget for the data norm
    strict_smallness: bool = False
    forcing_exponents: dict = None   # (tau, eta) used to gauge ||F||_Y

    def __post_init__(self):
        if self.dim < 3:
            raise SolverError("solver needs n >= 3")
        if not self.q > self.dim / (self.dim - 1.0):
            raise SolverError("q must exceed n/(n-1)")
        if self.tolerance <= 0 or self.smallness <= 0:
            raise SolverError("tolerance and smallness must be positive")


@dataclass
class SolveDiagnostics:
    data_norm: float = 0.0
    u_norms: list = field(default_factory=list)
    pi_norms: list = field(default_factory=list)
    increments: list = field(default_factory=list)
    rho: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    residual: float = math.nan
    decay_profile: list = field(default_factory=list)
    kappa: float = 0.0

    def record(self, xnorm, znorm):
        self.u_norms.append(float(xnorm))
        self.pi_norms.append(float(znorm))
        self.kappa = max(self.kappa, float(xnorm + znorm))

    def as_dict(self):
        return {"data_norm": self.data_norm, "u_norms": self.u_norms,
                "pi_norms": self.pi_norms, "increments": self.increments,
                "rho": self.rho, "converged": self.converged,
                "iterations": self.iterations, "residual": self.residual,
                "kappa": self.kappa}


def _tensor(u):
    """Outer product field u (x) u (rank-2)."""
    vals = u.values[..., :, None] * u.values[..., None, :]
    return SampledField(grid=u.grid, rank=2, values=vals)


def _pair_norm(u, pi, q):
    return tentspace.space_norm_X(u, q) + tentspace.space_norm_Z(pi, q)


def _measure_data(f, F, config):
    norm = 0.0
    if f is not None:
        norm += sobolev_neg_half_norm(f) if config.q == 2.0 \
            else potentials._tl_data_norm(f, config.q)
    if F is not None:
        exps = config.forcing_exponents or {}
        tau, eta = exps.get("tau"), exps.get("eta")
        if tau is not None:
            norm += tentspace.space_norm_Y(F, tau, eta)
        else:
            # no admissible (tau, eta) supplied: gauge F by its sup-weighted
            # size at the solver's own scaling weight, as a smallness proxy
            norm += tentspace._sup_term(F, 2.0 + 1.0 / (config.q - 1.0))
    return norm


def picard_solve(f, F, grid, config=None, init="extension",
                 keep_iterates=True):
    """Iterate the fixed-point map; returns (u, pi, diagnostics).

    f: boundary datum (or None), F: interior forcing (or None), both on the
    given grid.  init = "extension" starts from (Hf, Ef); init = "zero"
    starts from (0, 0) and applies the map once.
    """
    config = config or SolveConfig(dim=grid.dim)
    diag = SolveDiagnostics()
    diag.data_norm = _measure_data(f, F, config)
    if diag.data_norm > config.smallness:
        if config.strict_smallness:
            raise SolverError(
                f"data norm {diag.data_norm:.3e} exceeds the smallness "
                f"budget {config.smallness:.3e}")
    if f is not None:
        u1, p1 = potentials.stokes_extend(f, grid)
    else:
        u1 = SampledField.zeros(grid, rank=1)
        p1 = SampledField.zeros(grid, rank=0)

    if init == "zero":
        u, p = _apply_map(u1, p1, SampledField.zeros(grid, rank=1), F)
    elif init == "extension":
        u, p = u1, p1
    else:
        raise SolverError("init must be 'extension' or 'zero'")

    iterates = [(u, p)] if keep_iterates else None
    diag.record(tentspace.space_norm_X(u, config.q),
                tentspace.space_norm_Z(p, config.q))

    if f is None and F is None:
        diag.converged = True
        diag.iterations = 1
        diag.residual = 0.0
        return u, p, diag

    prev_inc = None
    bad = 0
    for j in range(2, config.max_iterations + 1):
        u_new, p_new = _apply_map(u1, p1, u, F)
        inc = _pair_norm(u_new - u, p_new - p, config.q)
        diag.increments.append(float(inc))
        if prev_inc is not None and prev_inc > 0:
            rho = inc / prev_inc
            diag.rho.append(float(rho))
            bad = bad + 1 if (not np.isfinite(rho) or rho >= 1.0) else 0
            if bad >= 3:
                raise PicardDivergenceError(
                    "Picard iteration is not contracting", diag.rho)
        u, p = u_new, p_new
        if keep_iterates:
            iterates.append((u, p))
        diag.record(tentspace.space_norm_X(u, config.q),
                    tentspace.space_norm_Z(p, config.q))
        diag.iterations = j
        if inc < config.tolerance:
            diag.converged = True
            break
        prev_inc = inc
    if not diag.converged:
        raise PicardDivergenceError(
            "Picard iteration did not converge within the budget", diag.rho)
    diag.residual = ns_residual(u, p, F)
    diag.decay_profile = decay_profile(u, config.q)
    if keep_iterates:
        diag.iterates = iterates
    return u, p, diag


def _apply_map(u1, p1, u, F):
    """One application of the fixed-point map given the linear part (u1, p1)."""
    quad = _tensor(u) * (-1.0)
    if F is None and float(np.abs(u.values).max()) == 0.0:
        gv = SampledField.zeros(u.grid, rank=1)
        gp = SampledField.zeros(u.grid, rank=0)
    else:
        gv, gp = potentials.green_system(F, quad)
    return u1 + gv, p1 + gp


# --- residual and diagnostics ----------------------------------------------------

def _horizontal_gradient(values, grid):
    """Spectral horizontal derivatives; returns (d/dx_1..d/dx_{n-2}, ...) list."""
    from .freqspace import frequency_grid
    xi, _ = frequency_grid(grid.dim, grid.extent, grid.step)
    axes = tuple(range(1, grid.dim))
    spec = np.fft.rfftn(values, axes=axes)
    outs = []
    for a in range(grid.dim - 1):
        m = (1j * xi[..., a]).reshape((1,) + xi.shape[:-1]
                                      + (1,) * (values.ndim - grid.dim))
        outs.append(np.fft.irfftn(spec * m, s=grid.horizontal_shape,
                                  axes=axes))
    return outs


def _laplacian(values, grid):
    from .freqspace import frequency_grid
    _, kmag = frequency_grid(grid.dim, grid.extent, grid.step)
    axes = tuple(range(1, grid.dim))
    spec = np.fft.rfftn(values, axes=axes)
    m = (-kmag ** 2).reshape((1,) + kmag.shape + (1,) * (values.ndim - grid.dim))
    horiz = np.fft.irfftn(spec * m, s=grid.horizontal_shape, axes=axes)
    vert = vertical_derivative(values, np.asarray(grid.levels), 2)
    return horiz + vert


def ns_residual(u, pi, F, margin=None):
    """Relative momentum + divergence residual on the interior restriction.

    Horizontal derivatives are spectral, vertical ones use sliding stencils
    on the graded ladder; the residual is measured against ||Delta u||.
    """
    grid = u.grid
    if margin is None:
        margin = max(2.0 * grid.step, float(grid.levels[1]))
    levels = np.asarray(grid.levels)
    du_h = _horizontal_gradient(u.values, grid)
    du_v = vertical_derivative(u.values, levels, 1)
    lap_u = _laplacian(u.values, grid)
    grad_pi = _horizontal_gradient(pi.values, grid) \
        + [vertical_derivative(pi.values, levels, 1)]
    conv = np.zeros_like(u.values)
    grads = du_h + [du_v]
    for a in range(grid.dim):
        conv += u.values[..., a:a + 1] * grads[a]
    mom = -lap_u + np.stack(grad_pi, axis=-1) + conv
    if F is not None:
        mom = mom - F.values

    def _interior(vals, rank):
        fld = SampledField(grid=grid, rank=rank, values=vals)
        return interior_restrict(fld, margin).values

    scale = math.sqrt(csum(_interior(lap_u, 1) ** 2))
    if scale == 0.0:
        return 0.0
    mom_err = math.sqrt(csum(_interior(mom, 1) ** 2))
    return mom_err / scale


def stokes_residual(v, w, F, margin=None):
    """Relative linear Stokes momentum residual -Delta v + grad w - F."""
    grid = v.grid
    if margin is None:
        margin = max(2.0 * grid.step, float(grid.levels[1]))
    levels = np.asarray(grid.levels)
    lap_v = _laplacian(v.values, grid)
    grad_w = _horizontal_gradient(w.values, grid) \
        + [vertical_derivative(w.values, levels, 1)]
    mom = -lap_v + np.stack(grad_w, axis=-1)
    if F is not None:
        mom = mom - F.values

    def _interior(vals):
        fld = SampledField(grid=grid, rank=1, values=vals)
        return interior_restrict(fld, margin).values

    scale = math.sqrt(csum(_interior(lap_v) ** 2))
    if scale == 0.0:
        return 0.0
    return math.sqrt(csum(_interior(mom) ** 2)) / scale


def divergence_residual(u, margin=None):
    """Relative interior divergence of a velocity field."""
    grid = u.grid
    if margin is None:
        margin = max(2.0 * grid.step, float(grid.levels[1]))
    levels = np.asarray(grid.levels)
    du_h = _horizontal_gradient(u.values, grid)
    du_v = vertical_derivative(u.values, levels, 1)
    div = sum(du_h[a][..., a] for a in range(grid.dim - 1)) \
        + du_v[..., grid.dim - 1]
    grads = np.stack(du_h + [du_v], axis=-1)
    mag = np.sqrt(np.sum(grads ** 2, axis=(-2, -1)))

    def _interior(vals):
        fld = SampledField(grid=grid, rank=0, values=vals)
        return interior_restrict(fld, margin).values

    scale = math.sqrt(csum(_interior(mag) ** 2))
    if scale == 0.0:
        return 0.0
    return math.sqrt(csum(_interior(div) ** 2)) / scale


def solution_slices(f, F, u, heights):
    """(velocity, pressure) raw slices of the fixed-point image of u.

    Lets the converged solution be evaluated at arbitrary heights (the stored
    field only lives on the ladder), e.g. for tight derivative stencils.
    """
    grid = u.grid
    quad = _tensor(u) * (-1.0)
    v, p = potentials.green_slices(F, quad, heights)
    if f is not None:
        ue, pe = potentials.stokes_extend_slices(f, grid, heights)
        v, p = v + ue, p + pe
    return v, p


def divergence_residual_slices(f, F, u, heights=None, fd_step=1e-4):
    """Relative divergence via slice evaluation and a tight vertical stencil.

    The ladder-stencil divergence is limited by the grading of the vertical
    ladder; evaluating the solution map at x_n +- fd_step instead measures
    the divergence of the actual quadrature solution, which is solenoidal
    per horizontal frequency.
    """
    grid = u.grid
    if heights is None:
        levels = np.asarray(grid.levels)
        heights = levels[len(levels) // 4: 3 * len(levels) // 4: 3]
    heights = np.asarray(heights, dtype=float)
    d = fd_step
    stack = np.concatenate([heights + s * d for s in (-2, -1, 0, 1, 2)])
    V, _ = solution_slices(f, F, u, stack)
    m = len(heights)
    Vm2, Vm1, V0, Vp1, Vp2 = (V[i * m:(i + 1) * m] for i in range(5))
    dz = (Vm2 - 8.0 * Vm1 + 8.0 * Vp1 - Vp2) / (12.0 * d)
    du_h = _horizontal_gradient(V0, grid)
    div = sum(du_h[a][..., a] for a in range(grid.dim - 1)) \
        + dz[..., grid.dim - 1]
    grads = np.stack(du_h + [dz], axis=-1)
    scale = math.sqrt(csum(grads ** 2))
    if scale == 0.0:
        return 0.0
    return math.sqrt(csum(div ** 2)) / scale


def decay_profile(u, q):
    """Table of x_n^{1/(q-1)} ||u(., x_n)||_inf over the vertical levels."""
    levels = np.asarray(u.grid.levels)
    mags = u.magnitude().values.reshape(len(levels), -1).max(axis=1)
    return [(float(x), float(x ** (1.0 / (q - 1.0)) * m))
            for x, m in zip(levels, mags)]


def verify_decay(u, q):
    """Decay report: profile plus boundedness/top-octave flags."""
    prof = decay_profile(u, q)
    vals = np.array([v for _, v in prof])
    levels = np.array([x for x, _ in prof])
    top = levels[-1]
    half_idx = int(np.argmin(np.abs(levels - top / 2.0)))
    return {"profile": prof,
            "bounded": bool(np.all(np.isfinite(vals))),
            "top_octave_decreasing": bool(vals[-1] < vals[half_idx])
            if half_idx < len(vals) - 1 else True,
            "max": float(vals.max()) if len(vals) else 0.0}


def scaling_invariance_check(f, F, grid, lam, config=None):
    """Solve with (f, F) and with (lam f(lam .), lam^3 F(lam .)) on the
    1/lam-scaled grid; compare lam u(lam x) against the rescaled solution."""
    from .grid import HalfSpaceGrid
    config = config or SolveConfig(dim=grid.dim)
    u, p, _ = picard_solve(f, F, grid, config, keep_iterates=False)
    scaled_grid = HalfSpaceGrid(
        dim=grid.dim, extent=grid.extent / lam, step=grid.step / lam,
        levels=tuple(np.asarray(grid.levels) / lam))
    f2 = None
    if f is not None:
        # lam f(lam x') on the scaled lattice: nodes of the scaled lattice are
        # exactly the original nodes divided by lam, so this is a value copy
        f2 = f.__class__(dim=f.dim, extent=f.extent / lam,
                         step=f.step / lam, rank=f.rank,
                         values=lam * f.values)
    F2 = None
    if F is not None:
        F2 = SampledField(grid=scaled_grid, rank=F.rank,
                          values=lam ** 3 * F.values)
    u2, p2, _ = picard_solve(f2, F2, scaled_grid, config, keep_iterates=False)
    u_ref = lam * u.values
    p_ref = lam ** 2 * p.values
    u_err = np.abs(u2.values - u_ref).max() / max(np.abs(u_ref).max(), 1e-300)
    # compare pressures up to their additive normalization constant
    p_shift = (p2.values - p_ref).mean()
    p_err = np.abs(p2.values - p_ref - p_shift).max() \
        / max(np.abs(p_ref - p_ref.mean()).max(), 1e-300)
    return {"lambda": lam, "u_relative_error": float(u_err),
            "pi_relative_error": float(p_err)}


def bootstrap_higher_q(iterates, q_tilde):
    """X^{q~}/Z^{q~} norms along stored iterates; last-5 boundedness report."""
    if not iterates:
        raise SolverError("no stored iterates")
    norms = []
    for u, p in iterates:
        norms.append(tentspace.space_norm_X(u, q_tilde)
                     + tentspace.space_norm_Z(p, q_tilde))
    tail = norms[-5:]
    mx, mn = max(tail), min(tail)
    return {"q": q_tilde, "norms": [float(x) for x in norms],
            "tail_max": float(mx), "tail_min": float(mn),
            "tail_ratio": float(mx / mn) if mn > 0 else math.inf,
            "bounded": bool(mn == 0.0 or mx <= 2.0 * mn)}
