import numpy as np
import pytest

from halfstokes import fields, freqspace
from halfstokes.grid import BoundaryField, make_grid

DIM, L, H = 3, 2.0, 1.0 / 32.0


@pytest.fixture(scope="module")
def bank():
    return freqspace.LPFilterBank.for_lattice(DIM, L, H)


def test_partition_of_unity(bank):
    _, kmag = freqspace.frequency_grid(DIM, L, H)
    total = sum(bank.psi_hat(j) for j in bank.active_range)
    assert np.abs(total[kmag > 0] - 1.0).max() <= 1e-12


def test_block_orthogonality(bank):
    lo = min(bank.active_range)
    assert np.abs(bank.psi_hat(lo) * bank.psi_hat(lo + 2)).max() <= 1e-12


def test_lp_blocks_sum_to_field(bank):
    rng = fields.make_rng(3)
    f = fields.random_band_limited_boundary(DIM, L, H, rng, 1, 3)
    total = sum(freqspace.lp_block(f, j, bank).values
                for j in bank.active_range)
    mean = f.values.mean(axis=(0, 1))
    assert np.abs(total + mean - f.values).max() \
        <= 1e-10 * np.abs(f.values).max()


def test_tl_norm_dilation_law(bank):
    rng = fields.make_rng(9)
    f = fields.random_band_limited_boundary(DIM, L, H, rng, 2, 4)
    params = freqspace.TLParams(s=-0.5, p=4.0, q=2.0)
    n1 = freqspace.tl_norm(f, params, bank)
    lam = 2.0
    f2 = BoundaryField(dim=DIM, extent=L / lam, step=H / lam, rank=f.rank,
                       values=f.values)
    n2 = freqspace.tl_norm(f2, params)
    assert n2 == pytest.approx(lam ** (params.s - (DIM - 1) / params.p) * n1,
                               rel=1e-6)


def test_tl_norm_homogeneity(bank):
    f = fields.boundary_bump(DIM, L, H, width=0.8)
    params = freqspace.TLParams(s=-0.5, p=4.0, q=2.0)
    assert freqspace.tl_norm(f.map_values(lambda v: 2.0 * v), params, bank) \
        == pytest.approx(2.0 * freqspace.tl_norm(f, params, bank), rel=1e-12)


def test_poisson_extend_semigroup():
    f = fields.boundary_bump(DIM, L, H, width=0.8)
    two = make_grid(DIM, L, H, {"min": 0.25, "ratio": 2.0, "count": 2})
    u = freqspace.poisson_extend(f, two)
    mid = BoundaryField(dim=DIM, extent=L, step=H, rank=f.rank,
                        values=u.values[0])
    again = freqspace.poisson_extend(mid, two)
    err = np.abs(again.values[0] - u.values[1]).max()
    assert err <= 1e-8 * np.abs(u.values[1]).max()


def test_poisson_extend_max_principle():
    f = fields.boundary_bump(DIM, L, H, width=0.8)
    grid = make_grid(DIM, L, H, {"min": 0.1, "ratio": 1.4, "count": 8})
    u = freqspace.poisson_extend(f, grid)
    # harmonic extension of nonnegative data stays within the data range
    assert u.values.min() >= -1e-10
    assert u.values.max() <= f.values.max() + 1e-10


def test_bad_exponents_rejected():
    with pytest.raises(freqspace.FreqError):
        freqspace.TLParams(s=-0.5, p=0.5, q=2.0)


def test_poisson_tent_equivalence_single():
    grid = make_grid(DIM, L, H, {"min": H, "ratio": 1.18, "count": 30})
    f = fields.boundary_bump(DIM, L, H, width=0.5)
    tl, tent = freqspace.poisson_tent_equivalence_check(f, 2.0, grid)
    assert np.isfinite(tl) and np.isfinite(tent)
    assert 0.25 <= tl / tent <= 4.0
