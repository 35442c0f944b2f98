"""Dyadic Littlewood-Paley analysis on the periodic horizontal lattice.

The lattice on [-L, L]^{n-1} resolves the discrete frequencies pi*k/L up to
the Nyquist magnitude pi*sqrt(n-1)/h; the filter bank covers exactly that
range, so the band sum telescopes to 1 on every resolvable nonzero frequency.
Homogeneous-space subtleties (polynomials, mean modes) are avoided by keeping
test data zero-mean and band-limited.
"""

import math
from dataclasses import dataclass

import numpy as np

from .grid import BoundaryField, GridError, HalfSpaceGrid, SampledField
from .quadrature import lp_norm


class FreqError(ValueError):
    pass


def frequency_grid(dim, extent, step):
    """Frequency vectors of the real FFT on the horizontal lattice.

    Returns (xi, kmag): xi has shape (*spectral_shape, dim-1), kmag is |xi|.
    The last horizontal axis is halved (rfft convention).
    """
    n_h = int(round(2.0 * extent / step))
    full = 2.0 * math.pi * np.fft.fftfreq(n_h, d=step)
    half = full[: n_h // 2 + 1].copy()
    half[-1] = abs(half[-1])
    axes = [full] * (dim - 2) + [half]
    mesh = np.meshgrid(*axes, indexing="ij")
    xi = np.stack(mesh, axis=-1)
    kmag = np.sqrt(np.sum(xi ** 2, axis=-1))
    return xi, kmag


def _smootherstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u ** 3 * (6.0 * u ** 2 - 15.0 * u + 10.0)


def cutoff_phi(r):
    """Radial cutoff: 1 on r <= 1, 0 on r >= 2, C^2 smootherstep in log2 r."""
    r = np.asarray(r, dtype=float)
    out = np.ones_like(r)
    mid = (r > 1.0) & (r < 2.0)
    out[mid] = 1.0 - _smootherstep(np.log2(r[mid]))
    out[r >= 2.0] = 0.0
    return out


def band_psi(r):
    """psi(r) = phi(r) - phi(2r); supported in 1/2 <= r <= 2."""
    return cutoff_phi(r) - cutoff_phi(2.0 * np.asarray(r, dtype=float))


@dataclass(frozen=True)
class LPFilterBank:
    """Dyadic filter bank matched to a horizontal lattice."""

    dim: int
    extent: float
    step: float
    j_min: int
    j_max: int

    @classmethod
    def for_lattice(cls, dim, extent, step):
        k_lo = math.pi / extent                      # smallest nonzero |xi|
        k_hi = math.pi * math.sqrt(dim - 1) / step   # corner of the Nyquist box
        j_min = math.floor(math.log2(k_lo))
        j_max = math.ceil(math.log2(k_hi)) + 1
        return cls(dim=dim, extent=extent, step=step, j_min=j_min, j_max=j_max)

    @property
    def active_range(self):
        return range(self.j_min, self.j_max + 1)

    def psi_hat(self, j):
        if j not in self.active_range:
            raise FreqError(f"block index {j} outside [{self.j_min}, {self.j_max}]")
        _, kmag = frequency_grid(self.dim, self.extent, self.step)
        return band_psi(kmag / 2.0 ** j)

    def descriptor(self):
        return {"cutoff": "smootherstep-log2", "j_min": self.j_min,
                "j_max": self.j_max, "extent": self.extent, "step": self.step}


@dataclass(frozen=True)
class TLParams:
    s: float
    p: float
    q: float

    def __post_init__(self):
        if self.p < 1.0 or self.q < 1.0:
            raise FreqError("p, q must be >= 1")


def _hshape(f):
    return f.horizontal_shape


def _rfft(values, dim):
    axes = tuple(range(dim - 1))
    return np.fft.rfftn(values, axes=axes)


def _irfft(spec, dim, hshape):
    axes = tuple(range(dim - 1))
    return np.fft.irfftn(spec, s=hshape, axes=axes)


def _apply_multiplier(f, mult):
    """Multiply a BoundaryField by a spectral symbol (broadcast over rank)."""
    spec = _rfft(f.values, f.dim)
    m = mult.reshape(mult.shape + (1,) * f.rank)
    vals = _irfft(spec * m, f.dim, _hshape(f))
    return f.map_values(lambda _: vals)


def lp_block(f, j, bank=None):
    """Frequency-localized block: inverse transform of psi_j * spectrum."""
    if bank is None:
        bank = LPFilterBank.for_lattice(f.dim, f.extent, f.step)
    return _apply_multiplier(f, bank.psi_hat(j))


def tl_norm(f, params, bank=None):
    """Triebel-Lizorkin norm sum_j (2^{js} |block_j|)^q, then L^p."""
    if bank is None:
        bank = LPFilterBank.for_lattice(f.dim, f.extent, f.step)
    acc = np.zeros(_hshape(f) + (1,) * f.rank)
    for j in bank.active_range:
        blk = lp_block(f, j, bank).values
        acc = acc + (2.0 ** (j * params.s) * np.abs(blk)) ** params.q
    if f.rank:
        axes = tuple(range(acc.ndim - f.rank, acc.ndim))
        acc = acc.sum(axis=axes)
    sq = acc ** (1.0 / params.q)
    return lp_norm(sq, params.p, f.cell_area)


def sobolev_neg_half_norm(f):
    """Homogeneous H^{-1/2} norm at p = 2(n-1) (the q = 2 data class)."""
    return tl_norm(f, TLParams(s=-0.5, p=2.0 * (f.dim - 1), q=2.0))


def poisson_extend(f, grid):
    """Harmonic extension via the exact multiplier e^{-x_n |xi|} per level."""
    if not f.matches(grid):
        raise GridError("boundary field does not match the grid lattice")
    if len(grid.levels) == 0:
        raise GridError("grid has no vertical levels")
    _, kmag = frequency_grid(f.dim, f.extent, f.step)
    spec = _rfft(f.values, f.dim)
    out = np.empty(grid.shape + f.values.shape[grid.dim - 1:])
    for l, xn in enumerate(grid.levels):
        m = np.exp(-xn * kmag).reshape(kmag.shape + (1,) * f.rank)
        out[l] = _irfft(spec * m, f.dim, _hshape(f))
    return SampledField(grid=grid, rank=f.rank, values=out)


def poisson_tent_equivalence_check(f, q, grid):
    """Pair (||f||_{F^{-1/q}_{p,q}}, ||A_q[Poisson ext]||_{L^p}),
    p = q(q-1)(n-1)."""
    from .tentspace import TentParams, weighted_tent_norm
    n = f.dim
    if not (1.0 < q < math.inf):
        raise FreqError("q must lie in (1, inf)")
    p = q * (q - 1.0) * (n - 1.0)
    tl_value = tl_norm(f, TLParams(s=-1.0 / q, p=p, q=q))
    ext = poisson_extend(f, grid)
    tent_value = weighted_tent_norm(ext, TentParams(p=p, q=q))
    return tl_value, tent_value
