import numpy as np
import pytest

from halfstokes import fields, potentials
from halfstokes.grid import BoundaryField, make_grid

DIM = 3


def test_extension_boundary_recovery():
    h = 1.0 / 256.0
    grid = make_grid(DIM, 2.0, h, {"min": h, "ratio": 1.5, "count": 6})
    f = fields.boundary_bump(DIM, 2.0, h, width=1.6, rank=1,
                             direction=(1.0, 0.5, 0.3))
    u0, _ = potentials.stokes_extend_slices(f, grid, np.array([4.0 * h]))
    err = np.abs(u0[0] - f.values).max() / np.abs(f.values).max()
    assert err <= 0.05


def test_extension_scaling_equivariance():
    h = 1.0 / 32.0
    grid = make_grid(DIM, 2.0, h, {"min": h, "ratio": 1.2, "count": 10})
    f = fields.boundary_bump(DIM, 2.0, h, width=0.8, rank=1,
                             direction=(1.0, 0.5, 0.3))
    u, p = potentials.stokes_extend(f, grid)
    lam = 2.0
    f2 = BoundaryField(dim=DIM, extent=2.0 / lam, step=h / lam, rank=1,
                       values=f.values)
    grid2 = make_grid(DIM, 2.0 / lam, h / lam,
                      {"min": h / lam, "ratio": 1.2, "count": 10})
    u2, p2 = potentials.stokes_extend(f2, grid2)
    assert np.abs(u2.values - u.values).max() \
        <= 1e-6 * np.abs(u.values).max()
    assert np.abs(p2.values - lam * p.values).max() \
        <= 1e-6 * lam * np.abs(p.values).max()


@pytest.fixture(scope="module")
def small_grid():
    return make_grid(DIM, 2.0, 1.0 / 8.0,
                     {"min": 1.0 / 16.0, "ratio": 1.3, "count": 12})


def test_green_system_linearity(small_grid):
    F = fields.interior_bump(small_grid, center=(0.0, 0.0, 0.8), width=0.6,
                             rank=1, direction=(1.0, -0.5, 0.3))
    v1, w1 = potentials.green_system(F)
    v2, w2 = potentials.green_system(2.0 * F)
    assert np.abs(v2.values - 2.0 * v1.values).max() \
        <= 1e-10 * np.abs(v1.values).max()
    assert np.abs(w2.values - 2.0 * w1.values).max() \
        <= 1e-10 * np.abs(w1.values).max()


def test_green_boundary_value_small(small_grid):
    F = fields.interior_bump(small_grid, center=(0.0, 0.0, 0.8), width=0.6,
                             rank=1, direction=(0.0, 0.0, 1.0))
    v, _ = potentials.green_system(F)
    vb, _ = potentials.green_slices(F, None, np.array([1e-3]))
    assert np.abs(vb[0]).max() <= 0.01 * np.abs(v.values).max()


def test_gbeta_linearity(small_grid):
    F = fields.interior_bump(small_grid, width=0.6)
    g1 = potentials.g_beta(F, 1.0)
    g2 = potentials.g_beta(2.0 * F, 1.0)
    assert np.abs(g2.values - 2.0 * g1.values).max() \
        <= 1e-10 * np.abs(g1.values).max()


def test_mixed_norm_homogeneity(small_grid):
    F = fields.interior_bump(small_grid, width=0.6)
    params = potentials.MixedNormParams(p=4.0, q=2.0)
    assert potentials.mixed_norm(3.0 * F, params) \
        == pytest.approx(3.0 * potentials.mixed_norm(F, params), rel=1e-12)


def test_gbeta_off_line_refused(small_grid):
    fam = fields.dilated_interior_family(small_grid, [1.0, 2.0], width=0.5)
    bad = {"tau": 2.5, "eta": 1.2, "q": 2.0, "p": 14.0}
    with pytest.raises(potentials.ExponentError):
        potentials.gbeta_boundedness_check(fam, 1.0, bad)


def test_riesz_point_homogeneity():
    g = fields.boundary_bump(DIM, 2.0, 1.0 / 16.0, width=0.5)
    pts = np.array([[0.3, -0.2], [1.0, 0.5]])
    v1 = potentials.riesz_point(g, pts, 1.0)
    v2 = potentials.riesz_point(g.map_values(lambda v: 2.0 * v), pts, 1.0)
    assert np.abs(v2 - 2.0 * v1).max() <= 1e-12 * np.abs(v1).max()


def test_default_forcing_exponents_on_line():
    exps = potentials.default_forcing_exponents(DIM, 2.0)
    assert exps
