"""Reproducible test-data generators: bumps, band-limited fields, families.

Everything is driven by numpy Generators seeded explicitly, so suites are
deterministic given the recorded seed.
"""

import math

import numpy as np

from .grid import BoundaryField, HalfSpaceGrid, SampledField, sample, sample_boundary


def make_rng(seed):
    return np.random.default_rng(int(seed))


def bump_profile(r):
    """Standard smooth bump: exp(1 - 1/(1 - r^2)) inside |r| < 1, 0 outside."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = np.abs(r) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
    return out


def boundary_bump(dim, extent, step, center=None, width=1.0, rank=0,
                  direction=None):
    """Compactly supported smooth bump on the boundary lattice."""
    if center is None:
        center = (0.0,) * (dim - 1)
    center = np.asarray(center, dtype=float)

    def func(pts):
        r = np.sqrt(np.sum((pts - center) ** 2, axis=-1)) / width
        prof = bump_profile(r)
        if rank == 0:
            return prof
        d = np.zeros(dim) if direction is None else np.asarray(direction, float)
        if direction is None:
            d[0] = 1.0
        return prof[..., None] * d

    return sample_boundary(dim, extent, step, func, rank)


def interior_bump(grid, center=None, width=0.5, rank=0, direction=None):
    """Smooth bump supported in a ball strictly inside the truncated domain."""
    if center is None:
        center = (0.0,) * (grid.dim - 1) + (2.0 * width,)
    center = np.asarray(center, dtype=float)

    def func(pts):
        r = np.sqrt(np.sum((pts - center) ** 2, axis=-1)) / width
        prof = bump_profile(r)
        if rank == 0:
            return prof
        if rank == 1:
            d = np.zeros(grid.dim) if direction is None else np.asarray(direction, float)
            if direction is None:
                d[0] = 1.0
            return prof[..., None] * d
        t = np.zeros((grid.dim, grid.dim)) if direction is None \
            else np.asarray(direction, float)
        if direction is None:
            t[0, 0] = 1.0
        return prof[..., None, None] * t

    return sample(grid, func, rank)


def random_band_limited_boundary(dim, extent, step, rng, j_lo=0, j_hi=2,
                                 rank=0):
    """Zero-mean real field with spectrum in the annulus 2^{j_lo} <= |xi| <= 2^{j_hi}.

    Random complex coefficients are drawn on the annulus and symmetrized by
    taking the real part of the inverse transform.
    """
    from .freqspace import frequency_grid

    n_h = int(round(2.0 * extent / step))
    hshape = (n_h,) * (dim - 1)
    full = 2.0 * math.pi * np.fft.fftfreq(n_h, d=step)
    mesh = np.meshgrid(*([full] * (dim - 1)), indexing="ij")
    kmag = np.sqrt(sum(m ** 2 for m in mesh))
    annulus = (kmag >= 2.0 ** j_lo) & (kmag <= 2.0 ** j_hi)

    comp = () if rank == 0 else ((dim,) * rank)
    out = np.empty(hshape + comp)
    flat = out.reshape(hshape + (-1,))
    for c in range(flat.shape[-1]):
        coef = (rng.standard_normal(hshape) + 1j * rng.standard_normal(hshape))
        coef *= annulus
        vals = np.fft.ifftn(coef).real
        peak = np.abs(vals).max()
        flat[..., c] = vals / peak if peak > 0 else vals
    return BoundaryField(dim=dim, extent=extent, step=step, rank=rank,
                         values=out)


def random_band_limited_interior(grid, rng, j_lo=0, j_hi=2, rank=0,
                                 vertical_center=0.75, vertical_width=0.5):
    """Band-limited horizontal structure times a smooth vertical bump."""
    b = random_band_limited_boundary(grid.dim, grid.extent, grid.step, rng,
                                     j_lo, j_hi, rank)
    levels = np.asarray(grid.levels)
    prof = bump_profile((levels - vertical_center) / vertical_width)
    shape = (-1,) + (1,) * (b.values.ndim)
    return SampledField(grid=grid, rank=rank,
                        values=prof.reshape(shape) * b.values[None])


def dilated_bump_family(dim, extent, step, scales, width=1.0, rank=0):
    """Family f_lam(x') = lam * f(lam x') of one boundary bump (exact sampling)."""
    fam = []
    for lam in scales:
        fam.append(boundary_bump(dim, extent, step, width=width / lam,
                                 rank=rank) * lam)
    return fam


def dilated_interior_family(grid, scales, width=0.5, rank=0, power=3.0):
    """Family F_lam(x) = lam^power * F(lam x) of one interior bump."""
    fam = []
    for lam in scales:
        base = (0.0,) * (grid.dim - 1) + (2.0 * width / lam,)
        fam.append(interior_bump(grid, center=base, width=width / lam,
                                 rank=rank) * lam ** power)
    return fam
