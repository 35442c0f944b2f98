import numpy as np
import pytest

from halfstokes import fields
from halfstokes.grid import (GridError, make_grid, sample, sample_boundary,
                             interior_restrict, save_field, load_field,
                             export_slice_csv)


def test_make_grid_geometric_ladder():
    grid = make_grid(3, 2.0, 0.25, {"min": 0.1, "ratio": 2.0, "count": 4})
    assert grid.horizontal_shape == (16, 16)
    assert np.allclose(grid.levels, [0.1, 0.2, 0.4, 0.8])
    assert grid.cell_area == pytest.approx(0.25 ** 2)
    assert grid.points().shape == (4, 16, 16, 3)


def test_make_grid_uniform_ladder():
    grid = make_grid(3, 1.0, 0.5, {"min": 0.25, "ratio": 1.0, "count": 3})
    assert np.allclose(grid.levels, [0.25, 0.5, 0.75])


def test_make_grid_rejects_bad_levels():
    with pytest.raises(GridError):
        make_grid(3, 1.0, 0.5, {"min": -0.1, "ratio": 1.5, "count": 3})
    with pytest.raises(GridError):
        make_grid(3, 1.0, 0.5, {"min": 0.1, "ratio": 0.9, "count": 3})


def test_vertical_weights_cover_ladder():
    grid = make_grid(3, 1.0, 0.5, {"min": 0.25, "ratio": 1.0, "count": 4})
    w = grid.vertical_weights()
    # uniform ladder: trapezoid-type weights integrate constants over (0, top]
    assert np.sum(w) == pytest.approx(grid.levels[-1], rel=0.15)


def test_sample_rejects_non_finite():
    grid = make_grid(3, 1.0, 0.5, {"min": 0.5, "ratio": 1.0, "count": 2})
    with pytest.raises(GridError), np.errstate(divide="ignore"):
        sample(grid, lambda p: 1.0 / p[..., 0], 0)


def test_interior_restrict_drops_margin():
    grid = make_grid(3, 2.0, 0.25, {"min": 0.1, "ratio": 1.5, "count": 6})
    fld = sample(grid, lambda p: np.ones(p.shape[:-1]), 0)
    sub = interior_restrict(fld, 0.5)
    assert min(sub.grid.levels) >= 0.5
    assert sub.values.shape[0] == len(sub.grid.levels)
    assert sub.values.shape[0] < fld.values.shape[0]


def test_save_load_roundtrip(tmp_path):
    grid = make_grid(3, 1.0, 0.25, {"min": 0.2, "ratio": 1.3, "count": 4})
    fld = fields.interior_bump(grid, width=0.6, rank=1,
                               direction=(1.0, -2.0, 0.5))
    prefix = str(tmp_path / "field")
    save_field(fld, prefix)
    back = load_field(prefix)
    assert back.rank == fld.rank
    assert np.array_equal(back.values, fld.values)
    assert np.allclose(back.grid.levels, grid.levels)


def test_export_slice_csv(tmp_path):
    grid = make_grid(3, 1.0, 0.5, {"min": 0.3, "ratio": 1.0, "count": 2})
    fld = fields.interior_bump(grid, width=0.8)
    path = tmp_path / "slice.csv"
    export_slice_csv(fld, str(path), level_index=1)
    assert path.exists() and path.stat().st_size > 0


def test_bump_profile_support_and_rng():
    r = np.array([0.0, 0.5, 1.0, 2.0])
    b = fields.bump_profile(r)
    assert b[0] == pytest.approx(1.0)
    assert b[2] == 0.0 and b[3] == 0.0
    assert 0.0 < b[1] < 1.0
    a = fields.make_rng(7).standard_normal(5)
    b2 = fields.make_rng(7).standard_normal(5)
    assert np.array_equal(a, b2)


def test_boundary_bump_matches_grid():
    grid = make_grid(3, 2.0, 0.25, {"min": 0.2, "ratio": 1.2, "count": 3})
    f = fields.boundary_bump(3, 2.0, 0.25, width=0.9, rank=1,
                             direction=(1.0, 0.0, 0.0))
    assert f.matches(grid)
    assert f.values.shape == (16, 16, 3)


def test_sample_boundary_shapes():
    f = sample_boundary(3, 1.0, 0.5, lambda p: p[..., 0], 0)
    assert f.values.shape == (4, 4)
