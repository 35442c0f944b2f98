import numpy as np
import pytest

from halfstokes import fields, solver
from halfstokes.grid import make_grid

DIM = 3


@pytest.fixture(scope="module")
def grid():
    return make_grid(DIM, 2.0, 1.0 / 8.0,
                     {"min": 1.0 / 16.0, "ratio": 1.2, "count": 20})


@pytest.fixture(scope="module")
def small_data(grid):
    eps = 0.02
    f = fields.boundary_bump(DIM, 2.0, 1.0 / 8.0, width=0.8, rank=1,
                             direction=(eps, 0.5 * eps, 0.2 * eps))
    cfg = solver.SolveConfig(dim=DIM, q=2.0, tolerance=1e-10,
                             max_iterations=30)
    u, pi, diag = solver.picard_solve(f, None, grid, cfg)
    return f, u, pi, diag


def test_picard_contracts(small_data):
    _, _, _, diag = small_data
    assert diag.converged
    assert max(diag.rho) <= 0.5


def test_solution_nearly_divergence_free(small_data):
    f, u, _, _ = small_data
    assert solver.divergence_residual_slices(f, None, u) <= 1e-6


def test_solution_close_to_linear_part(small_data):
    # at this data size the quadratic correction is a small perturbation
    f, u, _, _ = small_data
    from halfstokes import potentials
    lin, _ = potentials.stokes_extend(f, u.grid)
    gap = np.abs(u.values - lin.values).max() / np.abs(lin.values).max()
    assert 0.0 < gap <= 0.1


def test_decay_profile(small_data):
    _, u, _, _ = small_data
    rep = solver.verify_decay(u, 2.0)
    assert rep["bounded"]
    prof = np.asarray(rep["profile"])
    assert prof.shape[1] == 2 and np.all(prof[:, 1] >= 0.0)


def test_two_initializations_agree(grid, small_data):
    f, u, _, _ = small_data
    cfg = solver.SolveConfig(dim=DIM, q=2.0, tolerance=1e-10,
                             max_iterations=30)
    u2, _, _ = solver.picard_solve(f, None, grid, cfg, init="zero",
                                   keep_iterates=False)
    assert np.abs(u2.values - u.values).max() \
        <= 1e-6 * np.abs(u.values).max()


def test_large_data_raises(grid):
    f = fields.boundary_bump(DIM, 2.0, 1.0 / 8.0, width=0.8, rank=1,
                             direction=(80.0, 40.0, 15.0))
    with pytest.raises(solver.PicardDivergenceError):
        solver.picard_solve(f, None, grid,
                            solver.SolveConfig(dim=DIM, max_iterations=25),
                            keep_iterates=False)


def test_bootstrap_bounded(small_data):
    _, _, _, diag = small_data
    boot = solver.bootstrap_higher_q(diag.iterates, 4.0)
    assert np.isfinite(boot["tail_ratio"])
    assert boot["tail_ratio"] <= 2.0


def test_diagnostics_serializable(small_data):
    import json
    _, _, _, diag = small_data
    json.dumps(diag.as_dict())
