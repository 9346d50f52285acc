"""Euler angles, Wigner-D matrices and (real) spherical harmonics.

Convention, fixed once for the whole package: rotations are active,
R = Rz(alpha) @ Ry(beta) @ Rz(gamma), and

    D^l_{m',m} = exp(-i m' alpha) d^l_{m',m}(beta) exp(-i m gamma)

so that the rotation operator acting on functions, P(g) f(x) = f(R_g^-1 x),
satisfies P(g) Y_{l,m} = sum_{m'} D^l_{m',m}(g) Y_{l,m'}.  The real
harmonics are Z^l = U^T Y^l with the unitary U below, and their rotation
is W = U^-1 D U (real for every rotation).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma

import numpy as np
from scipy import special as sp_special

L_MAX_SUPPORTED = 45


@dataclass(frozen=True)
class EulerAngles:
    alpha: float
    beta: float              # in [0, pi]
    gamma: float


def rotation_from_euler(angles: EulerAngles) -> np.ndarray:
    a, b, g = angles.alpha, angles.beta, angles.gamma
    ca, sa = np.cos(a), np.sin(a)
    cb, sb = np.cos(b), np.sin(b)
    cg, sg = np.cos(g), np.sin(g)
    return np.array([
        [ca * cb * cg - sa * sg, -ca * cb * sg - sa * cg, ca * sb],
        [sa * cb * cg + ca * sg, -sa * cb * sg + ca * cg, sa * sb],
        [-sb * cg, sb * sg, cb],
    ])


def euler_from_rotation(r: np.ndarray) -> EulerAngles:
    """z-y-z Euler angles of a rotation matrix, gimbal branches included.

    Uses the quadrant-correct two-argument arctangent; the round trip
    through rotation_from_euler reproduces r to 1e-10.
    """
    r = np.asarray(r, float)
    c = r[2, 2]
    if not -1.0 - 1e-12 <= c <= 1.0 + 1e-12:
        raise ValueError(f"R[2,2] = {c} outside [-1, 1]")
    c = min(1.0, max(-1.0, c))
    # sin(beta) taken from the bottom row, not from arccos(c): near the
    # gimbal points arccos amplifies rounding in c by ~1e-8.
    s = float(np.hypot(r[2, 0], r[2, 1]))
    if s < 1e-9:
        if c > 0:                      # beta = 0: R = Rz(alpha + gamma)
            return EulerAngles(float(np.arctan2(r[1, 0], r[0, 0])), 0.0, 0.0)
        # beta = pi: R = Ry(pi) Rz(gamma) up to the alpha = 0 gauge
        return EulerAngles(0.0, float(np.pi), float(np.arctan2(r[1, 0], r[1, 1])))
    beta = np.arctan2(s, c)
    alpha = np.arctan2(r[1, 2], r[0, 2])
    gamma = np.arctan2(r[2, 1], -r[2, 0])
    return EulerAngles(float(alpha), float(beta), float(gamma))


# -- small-d matrices -------------------------------------------------------

_LOGFACT = np.array([0.0] + [lgamma(k + 1.0) for k in range(1, 4 * L_MAX_SUPPORTED + 2)])


_JY_EIG_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _jy_eig(l: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the Hermitian y-generator on degree l; the
    eigenvalues are exactly the integers -l..l and are snapped to them."""
    if l not in _JY_EIG_CACHE:
        n = 2 * l + 1
        m = np.arange(-l, l, dtype=float)
        c = np.sqrt((l - m) * (l + m + 1)) / 2.0
        jy = np.zeros((n, n), dtype=complex)
        idx = np.arange(n - 1)
        jy[idx + 1, idx] = -1j * c
        jy[idx, idx + 1] = 1j * c
        w, v = np.linalg.eigh(jy)
        _JY_EIG_CACHE[l] = (np.round(w), v)
    return _JY_EIG_CACHE[l]


def wigner_d_small(l: int, beta: float) -> np.ndarray:
    """Real orthogonal (2l+1)x(2l+1) small-d matrix d^l_{m',m}(beta).

    Evaluated as the exponential of the rotation generator through one
    cached eigendecomposition per degree; accurate to ~1e-14 up to l=45,
    where the textbook factorial sum has already lost all precision to
    cancellation (see wigner_d_factorial_sum, kept as a test oracle).
    Rows/columns are indexed m', m = -l..l.
    """
    if not 0 <= l <= L_MAX_SUPPORTED:
        raise ValueError(f"l must be in [0, {L_MAX_SUPPORTED}]")
    n = 2 * l + 1
    if abs(beta) < 1e-14:
        return np.eye(n)
    w, v = _jy_eig(l)
    d = (v * np.exp(-1j * beta * w)) @ v.conj().T
    resid = np.abs(d.imag).max()
    if resid > 1e-12:
        raise AssertionError(f"small-d came out non-real ({resid:.2e})")
    return d.real


def wigner_d_factorial_sum(l: int, beta: float) -> np.ndarray:
    """Explicit factorial-sum formula for d^l(beta), via log-factorials.

    Overflow-free but subject to float cancellation that grows with l
    (~1e-9 at l=20); use only as an independent cross-check at moderate l.
    """
    if not 0 <= l <= L_MAX_SUPPORTED:
        raise ValueError(f"l must be in [0, {L_MAX_SUPPORTED}]")
    n = 2 * l + 1
    if abs(beta) < 1e-14:
        return np.eye(n)
    if abs(beta - np.pi) < 1e-14:
        # d(pi)_{m',m} = (-1)^(l-m) delta_{m',-m}
        d = np.zeros((n, n))
        for m in range(-l, l + 1):
            d[l - m, l + m] = (-1.0) ** (l - m)
        return d

    half = beta / 2.0
    log_c, log_s = np.log(np.cos(half)), np.log(np.sin(half))
    ms = np.arange(-l, l + 1)
    mp = ms[:, None]                       # m'
    m = ms[None, :]
    pref = 0.5 * (_LOGFACT[l + m] + _LOGFACT[l - m] + _LOGFACT[l + mp] + _LOGFACT[l - mp])
    d = np.zeros((n, n))
    for s in range(0, 2 * l + 1):
        a = l + m - s
        b = mp - m + s
        c = l - mp - s
        ok = (a >= 0) & (b >= 0) & (c >= 0)
        if not ok.any():
            continue
        logterm = np.where(ok,
                           pref - _LOGFACT[np.maximum(a, 0)] - _LOGFACT[s]
                           - _LOGFACT[np.maximum(b, 0)] - _LOGFACT[np.maximum(c, 0)]
                           + (2 * l + m - mp - 2 * s) * log_c + (mp - m + 2 * s) * log_s,
                           -np.inf)
        sign = np.where((mp - m + s) % 2 == 0, 1.0, -1.0)
        d += sign * np.exp(logterm)
    return d


def wigner_D(l: int, angles: EulerAngles) -> np.ndarray:
    """Complex unitary Wigner-D matrix for one rotation."""
    d = wigner_d_small(l, angles.beta)
    ms = np.arange(-l, l + 1)
    return (np.exp(-1j * ms[:, None] * angles.alpha) * d
            * np.exp(-1j * ms[None, :] * angles.gamma))


def wigner_D_stack(l: int, rotations: np.ndarray) -> np.ndarray:
    """D^l for a stack of rotation matrices; small-d results are shared
    between rotations with equal beta."""
    cache: dict[float, np.ndarray] = {}
    out = np.empty((len(rotations), 2 * l + 1, 2 * l + 1), dtype=complex)
    ms = np.arange(-l, l + 1)
    for i, r in enumerate(rotations):
        ang = euler_from_rotation(r)
        key = round(ang.beta, 12)
        if key not in cache:
            cache[key] = wigner_d_small(l, ang.beta)
        out[i] = (np.exp(-1j * ms[:, None] * ang.alpha) * cache[key]
                  * np.exp(-1j * ms[None, :] * ang.gamma))
    return out


# -- real-harmonic transform ------------------------------------------------

def real_sh_transform(l: int) -> np.ndarray:
    """Unitary U^l with Z^l = U^T Y^l real: columns m<0 mix i(Y_m -+ Y_-m),
    column 0 is Y_0, columns m>0 mix Y_-m +- Y_m."""
    n = 2 * l + 1
    u = np.zeros((n, n), dtype=complex)
    rt2 = 1.0 / np.sqrt(2.0)
    u[l, l] = 1.0
    for m in range(1, l + 1):
        sgn = (-1.0) ** m
        u[l - m, l - m] = 1j * rt2            # row m'=-m, col m=-m
        u[l + m, l - m] = -1j * sgn * rt2     # row m'=+m, col m=-m
        u[l - m, l + m] = rt2                 # row m'=-m, col m=+m
        u[l + m, l + m] = sgn * rt2           # row m'=+m, col m=+m
    return u


def real_rotation_M(l: int, d: np.ndarray) -> np.ndarray:
    """M^l = D^l U^l, the mixed complex-to-real rotation matrix."""
    return d @ real_sh_transform(l)


def real_rotation_M_cases(l: int, d: np.ndarray) -> np.ndarray:
    """M^l from the explicit three-case combination of D columns; equals
    real_rotation_M entry-wise and serves as its cross-check."""
    n = 2 * l + 1
    m_mat = np.empty((n, n), dtype=complex)
    rt2 = 1.0 / np.sqrt(2.0)
    m_mat[:, l] = d[:, l]
    for m in range(1, l + 1):
        sgn = (-1.0) ** m
        m_mat[:, l - m] = 1j * rt2 * (d[:, l - m] - sgn * d[:, l + m])
        m_mat[:, l + m] = rt2 * (d[:, l - m] + sgn * d[:, l + m])
    return m_mat


# -- spherical harmonics ----------------------------------------------------

def eval_complex_sh(l: int, m: int, theta, phi) -> np.ndarray:
    """Y_{l,m}(theta, phi) with the Condon-Shortley phase."""
    theta = np.asarray(theta, float)
    phi = np.asarray(phi, float)
    if hasattr(sp_special, "sph_harm_y"):
        return np.asarray(sp_special.sph_harm_y(l, m, theta, phi))
    return np.asarray(sp_special.sph_harm(m, l, phi, theta))


def eval_sh_vector(l: int, theta, phi) -> np.ndarray:
    """Stack [Y_{l,-l} ... Y_{l,l}] with shape (2l+1,) + theta.shape."""
    theta = np.atleast_1d(np.asarray(theta, float))
    phi = np.atleast_1d(np.asarray(phi, float))
    out = np.empty((2 * l + 1,) + theta.shape, dtype=complex)
    for m in range(-l, l + 1):
        out[l + m] = eval_complex_sh(l, m, theta, phi)
    return out


def eval_real_sh(l: int, m: int, theta, phi) -> np.ndarray:
    """Real spherical harmonic Z_{l,m} = (U^T Y^l)_m."""
    if m == 0:
        val = eval_complex_sh(l, 0, theta, phi)
    elif m < 0:
        ym = eval_complex_sh(l, m, theta, phi)
        ymm = eval_complex_sh(l, -m, theta, phi)
        val = 1j / np.sqrt(2.0) * (ym - (-1.0) ** m * ymm)
    else:
        ym = eval_complex_sh(l, m, theta, phi)
        ymm = eval_complex_sh(l, -m, theta, phi)
        val = 1.0 / np.sqrt(2.0) * (ymm + (-1.0) ** m * ym)
    resid = np.abs(np.imag(val)).max() if np.ndim(val) else abs(np.imag(val))
    if resid > 1e-12:
        raise AssertionError(f"real harmonic has imaginary residue {resid:.2e}")
    return np.real(val)


def spherical_from_cartesian(xyz: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(theta, phi) of unit-normalized cartesian points, shape (..., 3)."""
    xyz = np.asarray(xyz, float)
    r = np.linalg.norm(xyz, axis=-1)
    theta = np.arccos(np.clip(xyz[..., 2] / r, -1.0, 1.0))
    phi = np.arctan2(xyz[..., 1], xyz[..., 0])
    return theta, phi
