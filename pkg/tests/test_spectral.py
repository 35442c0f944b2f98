import numpy as np
import pytest

from halfstokes import spectral

XI = np.array([[0.8, -0.5]])
K = np.array([np.hypot(0.8, 0.5)])


def _fd(values, d):
    d1 = (values[0] - 8.0 * values[1] + 8.0 * values[3] - values[4]) / (12 * d)
    d2 = (-values[0] + 16.0 * values[1] - 30.0 * values[2]
          + 16.0 * values[3] - values[4]) / (12.0 * d ** 2)
    return d1, d2


def test_homogeneous_propagate_boundary_value():
    c = np.array([[1.0 + 0.5j, -0.3j, 0.7]])
    u, _ = spectral.homogeneous_propagate(XI, K, np.array([0.0]), c)
    assert np.abs(u[0, 0] - c[0]).max() <= 1e-14


def test_homogeneous_propagate_solves_stokes():
    c = np.array([[1.0 + 0.5j, -0.3j, 0.7]])
    d = 1e-3
    x = 0.9 + d * np.arange(-2, 3)
    u, p = spectral.homogeneous_propagate(XI, K, x, c)
    du, ddu = _fd(u[0], d)
    dp, _ = _fd(p[0], d)
    # momentum: -(u'' - k^2 u) + (i xi p, p') = 0
    mom_h = -(ddu[:2] - K[0] ** 2 * u[0, 2, :2]) + 1j * XI[0] * p[0, 2]
    mom_n = -(ddu[2] - K[0] ** 2 * u[0, 2, 2]) + dp
    scale = np.abs(ddu).max()
    assert np.abs(mom_h).max() / scale <= 1e-6
    assert abs(mom_n) / scale <= 1e-6
    # divergence: i xi . u' + u_n' = 0
    div = 1j * np.sum(XI[0] * u[0, 2, :2]) + du[2]
    assert abs(div) / np.abs(du).max() <= 1e-8


def test_stokeslet_symbol_solves_stokes_off_source():
    F = np.array([[[0.6, -1.2j, 0.4 + 0.1j]]])      # (K, my=1, n)
    d = 1e-3
    z = (1.3 + d * np.arange(-2, 3))[:, None]        # source at 0, eval z > 0
    u = spectral.stokeslet_velocity(XI, K, z, F)[0, :, 0]
    p = spectral.stokeslet_pressure(XI, K, z, F)[0, :, 0]
    du, ddu = _fd(u, d)
    dp, _ = _fd(p, d)
    mom_h = -(ddu[:2] - K[0] ** 2 * u[2, :2]) + 1j * XI[0] * p[2]
    mom_n = -(ddu[2] - K[0] ** 2 * u[2, 2]) + dp
    scale = np.abs(ddu).max()
    assert np.abs(mom_h).max() / scale <= 1e-6
    assert abs(mom_n) / scale <= 1e-6
    div = 1j * np.sum(XI[0] * u[2, :2]) + du[2]
    assert abs(div) / np.abs(du).max() <= 1e-8


def test_stokeslet_dz_matches_fd():
    F = np.array([[[0.6, -1.2j, 0.4 + 0.1j]]])
    d = 1e-4
    z = (0.8 + d * np.arange(-2, 3))[:, None]
    u = spectral.stokeslet_velocity(XI, K, z, F)[0, :, 0]
    du, _ = _fd(u, d)
    got = spectral.stokeslet_velocity_dz(XI, K, np.array([[0.8]]), F)[0, 0, 0]
    assert np.abs(got - du).max() <= 1e-8
    p = spectral.stokeslet_pressure(XI, K, z, F)[0, :, 0]
    dp, _ = _fd(p, d)
    got_p = spectral.stokeslet_pressure_dz(XI, K, np.array([[0.8]]), F)[0, 0, 0]
    assert abs(got_p - dp) <= 1e-8


def test_green_apply_vanishes_at_wall():
    y = np.array([0.3, 0.6, 1.2])
    w = np.array([0.25, 0.4, 0.6])
    Fhat = np.array([[[0.5, 0.2j, -0.3], [1.0, 0.0, 0.4j],
                      [0.1, -0.2, 0.0]]])
    v, _ = spectral.green_apply(XI, K, np.array([0.0, 1.0]), y, w, Fhat)
    assert np.abs(v[0, 0]).max() <= 1e-12 * np.abs(v[0, 1]).max()


def test_green_zero_mode_wall_and_linearity():
    x = np.array([0.0, 0.5, 1.0])
    y = np.array([0.25, 0.75, 1.5])
    w = np.array([0.3, 0.5, 0.7])
    F0 = np.array([[1.0, -0.5, 0.2], [0.3, 0.1, -0.4], [0.0, 0.2, 0.1]],
                  dtype=complex)
    v, _ = spectral.green_apply_zero_mode(x, y, w, F0)
    assert np.abs(v[0]).max() <= 1e-14          # no-slip at the wall
    assert np.abs(v[:, 2]).max() <= 1e-14       # mean vertical flow vanishes
    v2, _ = spectral.green_apply_zero_mode(x, y, w, 2.0 * F0)
    assert np.abs(v2 - 2.0 * v).max() <= 1e-12


def test_extend_zero_mode_is_constant():
    f0 = np.array([1.0 + 1j, 2.0, -0.5])
    u, p = spectral.extend_zero_mode(np.array([0.1, 1.0, 5.0]), f0)
    assert np.abs(u - f0).max() == 0.0
    assert np.abs(p).max() == 0.0


def test_profiles_identity():
    # psi'' - k^2 psi = -phi links the biharmonic and harmonic profiles
    k = np.array([1.7])
    z = np.array([0.9])
    phi, _, _, ddpsi = spectral._profiles(k, z)
    psi = spectral._psi(k, z)
    assert ddpsi - k ** 2 * psi == pytest.approx(-phi, abs=1e-14)
