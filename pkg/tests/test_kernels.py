import math

import numpy as np
import pytest

from halfstokes import kernels


def test_omega_surface_areas():
    assert kernels.omega(2) == pytest.approx(2.0 * math.pi)
    assert kernels.omega(3) == pytest.approx(4.0 * math.pi)


def test_golden_values():
    assert kernels.fundamental_E(np.array([1.0, 0.0, 0.0]), 0, 0, 3) \
        == pytest.approx(1.0 / (4.0 * math.pi), abs=1e-14)
    assert kernels.odqvist_K(np.array([0.0, 0.0]), 1.0, 2, 2, 3) \
        == pytest.approx(3.0 / (2.0 * math.pi), abs=1e-14)
    assert kernels.odqvist_k(np.array([0.0, 0.0]), 1.0, 2, 3) \
        == pytest.approx(2.0 / (3.0 * math.pi), abs=1e-14)
    assert kernels.poisson_P(np.array([0.0, 0.0]), 1.0, 3) \
        == pytest.approx(1.0 / (2.0 * math.pi), abs=1e-14)


def test_fundamental_E_symmetry_and_scaling():
    x = np.array([0.7, -0.4, 1.1])
    for i in range(3):
        for j in range(3):
            assert kernels.fundamental_E(x, i, j, 3) \
                == pytest.approx(kernels.fundamental_E(x, j, i, 3))
    # E is (2 - n)-homogeneous: E(2x) = E(x) / 2 at n = 3
    assert kernels.fundamental_E(2.0 * x, 0, 1, 3) \
        == pytest.approx(kernels.fundamental_E(x, 0, 1, 3) / 2.0)


def test_kernel_masses():
    for n in (3, 4):
        assert abs(kernels.kernel_mass(0, 0, 0.5, n) - 1.0) <= 1e-6
        assert abs(kernels.kernel_mass(n - 1, n - 1, 2.0, n) - 1.0) <= 1e-6
        assert abs(kernels.kernel_mass(0, 1, 1.0, n)) <= 1e-8
        assert abs(kernels.poisson_mass(1.0, n) - 1.0) <= 1e-8


def test_wall_green_symmetry():
    x = np.array([0.3, -0.2, 0.9])
    y = np.array([-0.5, 0.4, 1.4])
    G_xy = kernels.wall_green_G(x, y)
    G_yx = kernels.wall_green_G(y, x)
    assert np.abs(G_xy - G_yx.T).max() <= 1e-12


def test_wall_green_vanishes_on_wall():
    y = np.array([0.2, -0.1, 1.0])
    x = np.array([0.6, 0.3, 1e-9])
    scale = np.abs(kernels.wall_green_G(np.array([0.6, 0.3, 1.0]), y)).max()
    assert np.abs(kernels.wall_green_G(x, y)).max() <= 1e-6 * scale


def test_wall_green_gradient_matches_fd():
    x = np.array([0.3, -0.2, 0.9])
    y = np.array([-0.5, 0.4, 1.4])
    d = 1e-5
    for c in range(3):
        e = np.zeros(3)
        e[c] = d
        fd_G = (kernels.wall_green_G(x, y + e)
                - kernels.wall_green_G(x, y - e)) / (2.0 * d)
        assert np.abs(kernels.wall_green_G_grad_y(x, y)[c]
                      - fd_G).max() <= 1e-7
        fd_g = (kernels.wall_green_g(x, y + e)
                - kernels.wall_green_g(x, y - e)) / (2.0 * d)
        assert np.abs(kernels.wall_green_g_grad_y(x, y)[c]
                      - fd_g).max() <= 1e-6


def test_green_bound_suite_finite():
    rep = kernels.green_bound_suite(60)
    groups = [k for k in rep if isinstance(rep[k], dict)]
    assert groups
    for k in groups:
        assert rep[k]["finite"]
        assert np.isfinite(rep[k]["drift"])
