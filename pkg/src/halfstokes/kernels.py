"""Closed-form kernels: Stokes fundamental solution, half-space boundary
kernels, Poisson kernel, and the n = 3 wall Green tensor (image system).

Normalization: omega(n) is the surface area of the unit sphere S^{n-1} in
R^n (omega(3) = 4*pi); with this choice the fundamental solution reproduces
the standard Stokeslet (1/(8*pi)) (delta/r + x x / r^3) at n = 3.
"""

import math

import numpy as np
from scipy import integrate

from .quadrature import sphere_area


class KernelError(ValueError):
    pass


def omega(n):
    """Surface area of S^{n-1} in R^n."""
    return sphere_area(n)


# --- fundamental solution ----------------------------------------------------

def fundamental_E(x, i, j, n):
    """Velocity fundamental solution E_ij; log form at n = 2."""
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.sum(x ** 2, axis=-1))
    if np.any(r == 0):
        raise KernelError("E is singular at x = 0")
    d = 1.0 if i == j else 0.0
    if n == 2:
        return (1.0 / (4.0 * math.pi)) * (x[..., i] * x[..., j] / r ** 2
                                          - d * np.log(r))
    w = omega(n)
    return (1.0 / (2.0 * w)) * (d / ((n - 2.0) * r ** (n - 2.0))
                                + x[..., i] * x[..., j] / r ** n)


def fundamental_b(x, j, n):
    """Pressure fundamental solution b_j = x_j / (omega |x|^n)."""
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.sum(x ** 2, axis=-1))
    if np.any(r == 0):
        raise KernelError("b is singular at x = 0")
    return x[..., j] / (omega(n) * r ** n)


# --- half-space boundary kernels ----------------------------------------------

def odqvist_K(xp, xn, i, j, n):
    """Velocity boundary kernel K_ij(x', x_n) = (2n/omega) x_n x_i x_j / |x|^{n+2}."""
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    xn = np.asarray(xn, dtype=float)
    if np.any(xn <= 0):
        raise KernelError("K needs x_n > 0")
    r2 = np.sum(xp ** 2, axis=-1) + xn ** 2
    comp = []
    for idx in (i, j):
        comp.append(xn if idx == n - 1 else xp[..., idx])
    return (2.0 * n / omega(n)) * xn * comp[0] * comp[1] / r2 ** ((n + 2.0) / 2.0)


def odqvist_k(xp, xn, j, n):
    """Pressure boundary kernel k_j(x', x_n)."""
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    xn = np.asarray(xn, dtype=float)
    if np.any(xn <= 0):
        raise KernelError("k needs x_n > 0")
    r2 = np.sum(xp ** 2, axis=-1) + xn ** 2
    w = omega(n)
    if j == n - 1:
        return (4.0 / w) * (n * xn ** 2 - r2) / (n * r2 ** ((n + 2.0) / 2.0))
    return (4.0 / w) * xn * xp[..., j] / r2 ** ((n + 2.0) / 2.0)


def poisson_P(xp, xn, n):
    """Poisson kernel c_n x_n (|x'|^2 + x_n^2)^{-n/2}, c_n = Gamma(n/2)/pi^{n/2}."""
    xp = np.atleast_1d(np.asarray(xp, dtype=float))
    xn = np.asarray(xn, dtype=float)
    if np.any(xn <= 0):
        raise KernelError("P needs x_n > 0")
    c = math.gamma(n / 2.0) / math.pi ** (n / 2.0)
    r2 = np.sum(xp ** 2, axis=-1) + xn ** 2
    return c * xn / r2 ** (n / 2.0)


def kernel_mass(i, j, xn, n):
    """Integral of K_ij(., x_n) over R^{n-1}.

    The angular integral is exact (second moments of the sphere); the radial
    integral over (0, inf) uses adaptive quadrature.  Off-diagonal entries
    vanish by parity of the angular integrand.
    """
    if xn <= 0:
        raise KernelError("mass needs x_n > 0")
    if i != j:
        return 0.0
    area = sphere_area(n - 1) if n >= 3 else 2.0
    pref = 2.0 * n / omega(n)

    if i == n - 1:
        def integrand(r):
            return pref * xn ** 3 * area * r ** (n - 2) \
                / (r * r + xn * xn) ** ((n + 2.0) / 2.0)
    else:
        # mean of x_i^2 over the sphere of radius r in R^{n-1} is r^2/(n-1)
        def integrand(r):
            return pref * xn * (r * r / (n - 1.0)) * area * r ** (n - 2) \
                / (r * r + xn * xn) ** ((n + 2.0) / 2.0)

    val, err = integrate.quad(integrand, 0.0, np.inf, epsabs=1e-12,
                              epsrel=1e-12, limit=200)
    if err > 1e-8:
        raise KernelError("kernel mass quadrature did not converge")
    return val


def poisson_mass(xn, n):
    """Integral of the Poisson kernel over R^{n-1} (should be 1)."""
    if xn <= 0:
        raise KernelError("mass needs x_n > 0")
    c = math.gamma(n / 2.0) / math.pi ** (n / 2.0)
    area = sphere_area(n - 1) if n >= 3 else 2.0

    def integrand(r):
        return c * xn * area * r ** (n - 2) / (r * r + xn * xn) ** (n / 2.0)

    val, err = integrate.quad(integrand, 0.0, np.inf, epsabs=1e-12,
                              epsrel=1e-12, limit=200)
    if err > 1e-8:
        raise KernelError("Poisson mass quadrature did not converge")
    return val


# --- wall Green tensor, n = 3 (image system) -----------------------------------

def _mirror(y):
    ys = np.array(y, dtype=float, copy=True)
    ys[..., 2] = -ys[..., 2]
    return ys


def _stokeslet_block(R):
    """8*pi times the free-space Stokeslet, shape (..., 3, 3)."""
    r = np.sqrt(np.sum(R ** 2, axis=-1))
    eye = np.eye(3)
    return (eye / r[..., None, None]
            + R[..., :, None] * R[..., None, :] / r[..., None, None] ** 3)


def _stokeslet_grad(R):
    """d/dR_k of the Stokeslet block, shape (..., 3, 3, 3) indexed [k, i, j]."""
    r = np.sqrt(np.sum(R ** 2, axis=-1))[..., None, None, None]
    eye = np.eye(3)
    Rk = R[..., :, None, None]
    Ri = R[..., None, :, None]
    Rj = R[..., None, None, :]
    d_ij = eye[None, :, :]
    d_ik = np.transpose(eye, (0, 1))[:, :, None]  # delta_{k i}
    d_jk = eye[:, None, :]                        # delta_{k j}
    return (-d_ij * Rk / r ** 3
            + (d_ik * Rj + d_jk * Ri) / r ** 3
            - 3.0 * Ri * Rj * Rk / r ** 5)


def _pot_doublet(R):
    """PD_ij = delta_ij/r^3 - 3 R_i R_j / r^5, shape (..., 3, 3)."""
    r = np.sqrt(np.sum(R ** 2, axis=-1))[..., None, None]
    return np.eye(3) / r ** 3 - 3.0 * R[..., :, None] * R[..., None, :] / r ** 5


def _pot_doublet_grad(R):
    """d/dR_k of PD_ij, shape (..., 3, 3, 3) indexed [k, i, j]."""
    r = np.sqrt(np.sum(R ** 2, axis=-1))[..., None, None, None]
    eye = np.eye(3)
    Rk = R[..., :, None, None]
    Ri = R[..., None, :, None]
    Rj = R[..., None, None, :]
    d_ij = eye[None, :, :]
    d_ik = eye[:, :, None]
    d_jk = eye[:, None, :]
    return (-3.0 * (d_ij * Rk + d_ik * Rj + d_jk * Ri) / r ** 5
            + 15.0 * Ri * Rj * Rk / r ** 7)


def _stokes_doublet(R):
    """SD_ij = delta_ij R_3/r^3 - delta_i3 R_j/r^3 + delta_3j R_i/r^3
    - 3 R_i R_3 R_j / r^5, shape (..., 3, 3)."""
    r = np.sqrt(np.sum(R ** 2, axis=-1))[..., None, None]
    eye = np.eye(3)
    Ri = R[..., :, None]
    Rj = R[..., None, :]
    R3 = R[..., 2][..., None, None]
    d_i3 = eye[:, 2][:, None]
    d_3j = eye[2, :][None, :]
    return (eye * R3 / r ** 3 - d_i3 * Rj / r ** 3 + d_3j * Ri / r ** 3
            - 3.0 * Ri * R3 * Rj / r ** 5)


def _stokes_doublet_grad(R):
    """d/dR_k of SD_ij, shape (..., 3, 3, 3) indexed [k, i, j]."""
    r = np.sqrt(np.sum(R ** 2, axis=-1))[..., None, None, None]
    eye = np.eye(3)
    Rk = R[..., :, None, None]
    Ri = R[..., None, :, None]
    Rj = R[..., None, None, :]
    R3 = R[..., 2][..., None, None, None]
    d_ij = eye[None, :, :]
    d_ik = eye[:, :, None]
    d_jk = eye[:, None, :]
    d_i3 = eye[:, 2][None, :, None]
    d_j3 = eye[:, 2][None, None, :]
    d_k3 = eye[:, 2][:, None, None]
    term1 = d_ij * (d_k3 / r ** 3 - 3.0 * R3 * Rk / r ** 5)
    term2 = -d_i3 * (d_jk / r ** 3 - 3.0 * Rj * Rk / r ** 5)
    term3 = d_j3 * (d_ik / r ** 3 - 3.0 * Ri * Rk / r ** 5)
    term4 = -3.0 * ((d_ik * R3 * Rj + d_k3 * Ri * Rj + d_jk * Ri * R3) / r ** 5
                    - 5.0 * Ri * R3 * Rj * Rk / r ** 7)
    return term1 + term2 + term3 + term4


_MIRROR_SIGN = np.array([1.0, 1.0, -1.0])


def wall_green_G(x, y):
    """Wall Green tensor G_ij(x, y) for Stokes flow over the plane x_3 = 0.

    Free-space Stokeslet at x - y plus the image system at the reflected
    source (image Stokeslet, potential doublet, Stokes doublet), arranged so
    G vanishes on the wall.  Shape (..., 3, 3), n = 3 only.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_pair(x, y)
    R = x - y
    Rs = x - _mirror(y)
    h = y[..., 2][..., None, None]
    Mj = _MIRROR_SIGN[None, :]
    core = (_stokeslet_block(R) - _stokeslet_block(Rs)
            + 2.0 * h * Mj * (h * _pot_doublet(Rs) - _stokes_doublet(Rs)))
    return core / (8.0 * math.pi)


def wall_green_g(x, y):
    """Pressure vector g_j(x, y) paired with the wall Green tensor; (..., 3)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_pair(x, y)
    R = x - y
    Rs = x - _mirror(y)
    r = np.sqrt(np.sum(R ** 2, axis=-1))[..., None]
    rs = np.sqrt(np.sum(Rs ** 2, axis=-1))[..., None]
    h = y[..., 2][..., None]
    pd3 = _pot_doublet(Rs)[..., 2, :]
    return (R / r ** 3 - Rs / rs ** 3 - 2.0 * h * _MIRROR_SIGN * pd3) \
        / (4.0 * math.pi)


def wall_green_G_grad_y(x, y):
    """Analytic source gradient d/dy_k G_ij(x, y), shape (..., 3, 3, 3)
    indexed [k, i, j]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_pair(x, y)
    R = x - y
    Rs = x - _mirror(y)
    h = y[..., 2][..., None, None]
    Mj = _MIRROR_SIGN[None, :]

    dS = _stokeslet_grad(R)        # d/dR_k
    dSs = _stokeslet_grad(Rs)      # d/dRs_k
    PD = _pot_doublet(Rs)
    dPD = _pot_doublet_grad(Rs)
    SD = _stokes_doublet(Rs)
    dSD = _stokes_doublet_grad(Rs)

    out = np.zeros(R.shape[:-1] + (3, 3, 3))
    # horizontal source derivatives: dR/dy_k = dRs/dy_k = -e_k
    for k in (0, 1):
        out[..., k, :, :] = (-dS[..., k, :, :] + dSs[..., k, :, :]
                             + 2.0 * h * Mj * (-h * dPD[..., k, :, :]
                                               + dSD[..., k, :, :]))
    # vertical: dR_3/dy_3 = -1, dRs_3/dy_3 = +1, dh/dy_3 = 1
    out[..., 2, :, :] = (-dS[..., 2, :, :] - dSs[..., 2, :, :]
                         + 2.0 * Mj * (2.0 * h * PD - SD)
                         + 2.0 * h * Mj * (h * dPD[..., 2, :, :]
                                           - dSD[..., 2, :, :]))
    return out / (8.0 * math.pi)


def wall_green_g_grad_y(x, y):
    """Analytic source gradient d/dy_k g_j(x, y), shape (..., 3, 3)
    indexed [k, j]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_pair(x, y)
    R = x - y
    Rs = x - _mirror(y)
    h = y[..., 2][..., None]
    dq = _stokeslet_pressure_grad(R)     # d/dR_k of R_j/r^3, [k, j]
    dqs = _stokeslet_pressure_grad(Rs)
    pd3 = _pot_doublet(Rs)[..., 2, :]
    dpd3 = _pot_doublet_grad(Rs)[..., :, 2, :]  # [k, j] slice of [k, i, j]

    out = np.zeros(R.shape[:-1] + (3, 3))
    for k in (0, 1):
        out[..., k, :] = (-dq[..., k, :] + dqs[..., k, :]
                          + 2.0 * h * _MIRROR_SIGN * dpd3[..., k, :])
    out[..., 2, :] = (-dq[..., 2, :] - dqs[..., 2, :]
                      - 2.0 * _MIRROR_SIGN * pd3
                      - 2.0 * h * _MIRROR_SIGN * dpd3[..., 2, :])
    return out / (4.0 * math.pi)


def _stokeslet_pressure_grad(R):
    """d/dR_k of q_j = R_j / r^3, shape (..., 3, 3) indexed [k, j]."""
    r = np.sqrt(np.sum(R ** 2, axis=-1))[..., None, None]
    Rk = R[..., :, None]
    Rj = R[..., None, :]
    return np.eye(3) / r ** 3 - 3.0 * Rj * Rk / r ** 5


def _check_pair(x, y):
    if np.any(x[..., 2] <= 0) or np.any(y[..., 2] <= 0):
        raise KernelError("Green tensor needs x_3 > 0 and y_3 > 0")
    if np.any(np.sum((x - y) ** 2, axis=-1) == 0):
        raise KernelError("Green tensor is singular at coincident points")


def green_bound_suite(n_samples, fd_step=1e-4, box=2.0):
    """Sampled-ratio report for the pointwise Green-tensor bounds.

    Bounds tested (ratios should be finite and stable under sample doubling):
      |G|              vs x_3 y_3 / |x-y|^3
      |grad G|         vs |x-y|^{-2}          (central differences)
      |grad_x' G|      vs x_3 / |x-y|^3       (horizontal refinement)
      |g|              vs |x-y|^{-2}
    The sample is a deterministic sweep over polar angle, log separation,
    azimuth, and overall scale; n_samples sets the sweep resolution, so
    doubling it refines the sample and the reported max ratios should be
    stable if the bounds hold.  Pairs closer than 10 * fd_step are skipped.
    """
    def configurations(m):
        res = max(4, int(round(math.sqrt(m / 12.0))))
        thetas = np.linspace(0.05, math.pi - 0.05, 3 * res)
        seps = np.linspace(-3.0, 3.0, 4 * res)      # log2 of |x-y| / x_3
        phis = np.array([0.0, math.pi / 6.0, math.pi / 3.0, math.pi / 2.0])
        scales = np.array([box / 8.0, box / 2.0, 2.0 * box])
        xs, ys = [], []
        for scale in scales:
            x3 = 0.5 * scale
            for b in seps:
                s = x3 * 2.0 ** b
                if s < 10.0 * fd_step:
                    continue
                for th in thetas:
                    y3 = x3 + s * math.cos(th)
                    if y3 < 1e-3 * scale:
                        continue
                    for ph in phis:
                        xs.append((0.0, 0.0, x3))
                        ys.append((s * math.sin(th) * math.cos(ph),
                                   s * math.sin(th) * math.sin(ph), y3))
        return np.asarray(xs), np.asarray(ys)

    def ratios(x, y):
        d = np.sqrt(np.sum((x - y) ** 2, axis=-1))
        G = wall_green_G(x, y)
        gmax = np.abs(G).max(axis=(-2, -1))
        r_G = gmax * d ** 3 / (x[:, 2] * y[:, 2])
        g = wall_green_g(x, y)
        r_g = np.abs(g).max(axis=-1) * d ** 2
        # central differences in x for the gradient bounds
        grads = []
        for k in range(3):
            e = np.zeros(3)
            e[k] = fd_step
            grads.append((wall_green_G(x + e, y) - wall_green_G(x - e, y))
                         / (2.0 * fd_step))
        grads = np.stack(grads, axis=1)  # (m, k, i, j)
        r_grad = np.abs(grads).max(axis=(-3, -2, -1)) * d ** 2
        r_hgrad = (np.abs(grads[:, :2]).max(axis=(-3, -2, -1))
                   * d ** 3 / x[:, 2])
        return {"G_bound": r_G, "gradG_bound": r_grad,
                "horizontal_gradG_bound": r_hgrad, "g_bound": r_g}

    base = ratios(*configurations(n_samples))
    double = ratios(*configurations(2 * n_samples))
    report = {}
    for key in base:
        m1, m2 = float(base[key].max()), float(double[key].max())
        report[key] = {"max_ratio": m1, "max_ratio_doubled": m2,
                       "drift": abs(m2 - m1) / max(m1, m2),
                       "finite": bool(np.isfinite(m1) and np.isfinite(m2))}
    report["samples"] = int(n_samples)
    return report
