"""Per-frequency closed forms for the half-space Stokes operators.

Horizontal Fourier transform turns the Stokes system into, for each nonzero
frequency xi (k = |xi|), a constant-coefficient ODE system in x_n.  The
building blocks below are the scalar profiles

    phi(z)  = e^{-k|z|} / (2k)         (-phi'' + k^2 phi = delta)
    psi(z)  = (1 + k|z|) e^{-k|z|} / (4k^3)   ((d^2/dz^2 - k^2)^2 psi = delta)

and their derivatives; the transformed free-space fundamental solution is

    E_ab = delta_ab phi - xi_a xi_b psi   (a, b horizontal)
    E_an = E_na = i xi_a psi'
    E_nn = phi + psi''

with pressure symbols b_a = -i xi_a phi, b_n = -phi'.  The homogeneous
half-space solution with decaying Dirichlet data c is

    u_a(x_n) = [c_a - i xi_a p0 x_n/(2k)] e^{-k x_n}
    u_n(x_n) = [c_n + p0 x_n / 2] e^{-k x_n}
    pi(x_n)  = p0 e^{-k x_n},     p0 = 2 (k c_n - i xi . c').

Wall Green tensor = free-space part minus the homogeneous extension of its
wall trace.  All functions are vectorized over a flattened frequency axis K;
the zero frequency is handled by the *_zero_mode functions (plain ODEs in
x_n).  Shapes: xi (K, d), k (K,), source levels y (my,), targets x (mx,),
hat-fields (K, my, ncomp).
"""

import numpy as np

from .quadrature import cumulative_vertical


def _profiles(k, z):
    """phi, phi', psi', psi'' at separation z; k > 0.

    k broadcast against z; sgn(0) = 0 gives the principal value at the kink.
    """
    az = np.abs(z)
    s = np.sign(z)
    e = np.exp(-k * az)
    phi = e / (2.0 * k)
    dphi = -s * e / 2.0
    dpsi = -z * e / (4.0 * k)
    ddpsi = (k * az - 1.0) * e / (4.0 * k)
    return phi, dphi, dpsi, ddpsi


def _profiles_dz(k, z):
    """phi', phi'', psi'', psi''' (the z-derivatives of the first set)."""
    az = np.abs(z)
    s = np.sign(z)
    e = np.exp(-k * az)
    dphi = -s * e / 2.0
    ddphi = k * e / 2.0
    ddpsi = (k * az - 1.0) * e / (4.0 * k)
    dddpsi = s * (2.0 - k * az) * e / 4.0
    return dphi, ddphi, ddpsi, dddpsi


def _split(F):
    """(horizontal part, vertical component) of a (K, ..., n) array."""
    return F[..., :-1], F[..., -1]


def stokeslet_velocity(xi, k, z, F):
    """Free-space velocity symbol applied to F.

    xi (K, d), k (K,), z (K-broadcastable, e.g. (mx, my)), F (K, my, n).
    Returns (K, *z-extra, n) where z's trailing axis pairs with F's my axis
    summed out by the caller; here no summation: z (mx, my) gives
    (K, mx, my, n).
    """
    kk = k[:, None, None]
    phi, dphi, dpsi, ddpsi = _profiles(kk, z[None])
    Fh, Fn = _split(F[:, None])          # (K, 1, my, d), (K, 1, my)
    xin = xi[:, None, None]              # (K, 1, 1, d)
    xiF = np.sum(xin * Fh, axis=-1)      # (K, 1, my) broadcast
    out_h = (phi[..., None] * Fh
             - xin * (xiF * _psi(kk, z[None]))[..., None]
             + 1j * xin * (dpsi * Fn)[..., None])
    out_n = 1j * dpsi * xiF + (phi + ddpsi) * Fn
    return np.concatenate([out_h, out_n[..., None]], axis=-1)


def _psi(k, z):
    az = np.abs(z)
    return (1.0 + k * az) * np.exp(-k * az) / (4.0 * k ** 3)


def stokeslet_velocity_dz(xi, k, z, F):
    """z-derivative of the velocity symbol applied to F (for d/dy_n terms)."""
    kk = k[:, None, None]
    dphi, ddphi, ddpsi, dddpsi = _profiles_dz(kk, z[None])
    _, _, dpsi, _ = _profiles(kk, z[None])
    Fh, Fn = _split(F[:, None])
    xin = xi[:, None, None]
    xiF = np.sum(xin * Fh, axis=-1)
    out_h = (dphi[..., None] * Fh
             - xin * (xiF * dpsi)[..., None]
             + 1j * xin * (ddpsi * Fn)[..., None])
    out_n = 1j * ddpsi * xiF + (dphi + dddpsi) * Fn
    return np.concatenate([out_h, out_n[..., None]], axis=-1)


def stokeslet_pressure(xi, k, z, F):
    """Free-space pressure symbol applied to F: -i (xi.F') phi(z) - F_n phi'(z)."""
    kk = k[:, None, None]
    phi, dphi, _, _ = _profiles(kk, z[None])
    Fh, Fn = _split(F[:, None])
    xiF = np.sum(xi[:, None, None] * Fh, axis=-1)
    return -1j * xiF * phi - Fn * dphi


def stokeslet_pressure_dz(xi, k, z, F):
    """z-derivative of the pressure symbol applied to F."""
    kk = k[:, None, None]
    dphi, ddphi, _, _ = _profiles_dz(kk, z[None])
    Fh, Fn = _split(F[:, None])
    xiF = np.sum(xi[:, None, None] * Fh, axis=-1)
    return -1j * xiF * dphi - Fn * ddphi


def homogeneous_propagate(xi, k, x, c):
    """Decaying half-space Stokes solution with wall velocity c.

    xi (K, d), k (K,), x targets (mx,), c (K, n).  Returns (u, p) with
    u (K, mx, n), p (K, mx).
    """
    ch, cn = _split(c)
    p0 = 2.0 * (k * cn - 1j * np.sum(xi * ch, axis=-1))      # (K,)
    kk = k[:, None]
    xx = x[None, :]
    decay = np.exp(-kk * xx)
    u_h = (ch[:, None, :]
           - 1j * xi[:, None, :] * (p0[:, None] * xx / (2.0 * kk))[..., None]) \
        * decay[..., None]
    u_n = (cn[:, None] + p0[:, None] * xx / 2.0) * decay
    p = p0[:, None] * decay
    return np.concatenate([u_h, u_n[..., None]], axis=-1), p


def green_apply(xi, k, x_levels, y_levels, weights, Fhat, Hhat=None):
    """Wall Green potential per frequency: velocity and pressure at targets.

    Fhat (K, my, n) forcing; Hhat (K, my, n, n) optional tensor whose
    divergence is added (entering through source-gradient kernels).
    Returns (v, p): v (K, mx, n), p (K, mx).
    """
    K, my, n = Fhat.shape
    mx = len(x_levels)
    z = x_levels[:, None] - y_levels[None, :]        # (mx, my)
    zw = -y_levels[None, :] * np.ones((1, my))       # wall trace separations

    Feff = Fhat
    Hn = None
    if Hhat is not None:
        # horizontal divergence columns act by i xi_a multiplication
        Feff = Fhat + 1j * np.sum(
            xi[:, None, None, :] * Hhat[..., :-1], axis=-1)
        Hn = Hhat[..., -1]                           # (K, my, n)

    w = weights
    V = np.tensordot(stokeslet_velocity(xi, k, z, Feff), w, axes=(2, 0))
    P = np.tensordot(stokeslet_pressure(xi, k, z, Feff), w, axes=(2, 0))
    cwall = np.tensordot(stokeslet_velocity(xi, k, zw, Feff)[:, 0], w,
                         axes=(1, 0))
    if Hn is not None:
        # -d/dy_n of the kernels = +d/dz, applied to the H_(.,n) column
        V = V + np.tensordot(stokeslet_velocity_dz(xi, k, z, Hn), w,
                             axes=(2, 0))
        P = P + np.tensordot(stokeslet_pressure_dz(xi, k, z, Hn), w,
                             axes=(2, 0))
        cwall = cwall + np.tensordot(
            stokeslet_velocity_dz(xi, k, zw, Hn)[:, 0], w, axes=(1, 0))

    Ucorr, Pcorr = homogeneous_propagate(xi, k, x_levels, cwall)
    return V - Ucorr, P - Pcorr


def green_apply_zero_mode(x_levels, y_levels, weights, F0, H0=None):
    """Zero-frequency (horizontal mean) part of the Green potential.

    The mean mode solves -v_a'' = F_a + (div H)_a with v_a(0) = 0 and
    bounded v_a (kernel min(x, y)), v_n = 0, and pi' = F_n + dH_nn/dy_n.
    """
    mx, my = len(x_levels), len(y_levels)
    n = F0.shape[-1]
    v = np.zeros((mx, n), dtype=complex)
    kernel = np.minimum(x_levels[:, None], y_levels[None, :])
    v[:, :-1] = (kernel * weights[None, :]) @ F0[:, :-1]
    p = _cumulative_complex(F0[:, -1], y_levels, x_levels)
    if H0 is not None:
        for a in range(n - 1):
            v[:, a] -= _cumulative_complex(H0[:, a, -1], y_levels, x_levels)
        p = p + _interp_complex(x_levels, y_levels, H0[:, -1, -1])
    return v, p


def _cumulative_complex(values, levels, targets):
    re = np.array([cumulative_vertical(values.real, levels, t) for t in targets])
    im = np.array([cumulative_vertical(values.imag, levels, t) for t in targets])
    return re + 1j * im


def _interp_complex(x, xp, fp):
    return (np.interp(x, xp, fp.real) + 1j * np.interp(x, xp, fp.imag))


def extend_apply(xi, k, x_levels, fhat):
    """Homogeneous Stokes extension of boundary data per nonzero frequency."""
    return homogeneous_propagate(xi, k, x_levels, fhat)


def extend_zero_mode(x_levels, f0):
    """Zero mode of the extension: constant velocity f0, zero pressure."""
    mx = len(x_levels)
    u = np.broadcast_to(f0, (mx,) + f0.shape).astype(complex)
    return u, np.zeros(mx, dtype=complex)
