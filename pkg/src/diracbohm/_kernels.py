"""Compiled spinor and guidance-velocity kernels.

A superposition is packed into a real table ``rtab`` (one row per mode) and a
complex table ``ctab`` so that a single numba kernel can evaluate any mode
family at a point. Column layouts:

plane 2D   rtab = [px, py, E, sign]                 ctab = [a1, a2]
oscillator rtab = [E, m*omega, q1, q2, degree]      ctab = [c, P1[0..D), P2[0..D)]
box        rtab = [E, k, kin, kout, beta', V0, R', m] ctab = [c]
plane 3D   rtab = [px, py, pz, E, sign]             ctab = [a1, a2, a3, a4]

For plane waves the complex amplitudes already include the superposition
coefficient; for bound modes ``c`` carries coefficient times mode norm.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from numba import njit

from .special import _jn, _kn

PLANE2D = 0
OSCILLATOR = 1
BOX = 2


@njit(cache=True)
def _zpow(z, q):
    # z**q for q >= 0, conj(z)**(-q) for q < 0
    w = z if q >= 0 else z.conjugate()
    out = 1.0 + 0.0j
    for _ in range(abs(q)):
        out *= w
    return out


@njit(cache=True)
def _unit_pow(x, y, r, q):
    # e^{i q theta}; the origin is assigned theta = 0
    if r == 0.0:
        return 1.0 + 0.0j
    return _zpow(complex(x / r, y / r), q)


@njit(cache=True)
def _horner(coef, start, deg, v):
    acc = 0.0 + 0.0j
    for i in range(deg, -1, -1):
        acc = acc * v + coef[start + i]
    return acc


@njit(cache=True)
def spinor2(fam, rtab, ctab, t, x, y):
    psi1 = 0.0 + 0.0j
    psi2 = 0.0 + 0.0j
    nm = rtab.shape[0]
    if fam == PLANE2D:
        for j in range(nm):
            ph = cmath.exp(1j * (-rtab[j, 3] * rtab[j, 2] * t + rtab[j, 0] * x + rtab[j, 1] * y))
            psi1 += ctab[j, 0] * ph
            psi2 += ctab[j, 1] * ph
    elif fam == OSCILLATOR:
        # modes are packed sorted by energy and share m*omega
        d = (ctab.shape[1] - 1) // 2
        z = complex(x, y)
        zb = complex(x, -y)
        xi = rtab[0, 1] * (x * x + y * y)
        g = math.exp(-0.5 * xi)
        e_prev = np.nan
        ph = 0.0 + 0.0j
        for j in range(nm):
            if rtab[j, 0] != e_prev:
                e_prev = rtab[j, 0]
                ph = g * cmath.exp(-1j * e_prev * t)
            deg = int(rtab[j, 4])
            p1 = ctab[j, 1 + deg]
            p2 = ctab[j, 1 + d + deg]
            for i in range(deg - 1, -1, -1):
                p1 = p1 * xi + ctab[j, 1 + i]
                p2 = p2 * xi + ctab[j, 1 + d + i]
            q1 = int(rtab[j, 2])
            w = z if q1 >= 0 else zb
            for _ in range(abs(q1)):
                p1 *= w
            q2 = q1 + 1
            w = z if q2 >= 0 else zb
            for _ in range(abs(q2)):
                p2 *= w
            amp = ctab[j, 0] * ph
            psi1 += amp * p1
            psi2 += amp * p2
    else:
        r = math.sqrt(x * x + y * y)
        e_prev = np.nan
        ph = 0.0 + 0.0j
        for j in range(nm):
            e = rtab[j, 0]
            k = rtab[j, 1]
            q1 = int(round(k - 0.5))
            rp = rtab[j, 6]
            m = rtab[j, 7]
            if e != e_prev:
                e_prev = e
                ph = cmath.exp(-1j * e * t)
            amp = ctab[j, 0] * ph
            if r <= rp:
                kap = rtab[j, 2]
                s = kap * r
                f1 = math.sqrt(kap) * _jn(q1, s)
                # (1-2k)/s J_{k-1/2} + J_{k-3/2} = -J_{k+1/2}
                f2 = kap ** 1.5 * _jn(q1 + 1, s) / (e + rtab[j, 5] + m)
            else:
                kap = rtab[j, 3]
                s = kap * r
                bp = rtab[j, 4]
                f1 = math.sqrt(kap) * bp * _kn(q1, s)
                # (1-2k)/s K_{k-1/2} - K_{k-3/2} = -K_{k+1/2}
                f2 = kap ** 1.5 * bp * _kn(q1 + 1, s) / (e + m)
            psi1 += amp * f1 * _unit_pow(x, y, r, q1)
            psi2 += amp * 1j * f2 * _unit_pow(x, y, r, q1 + 1)
    return psi1, psi2


@njit(cache=True)
def spinor4(rtab, ctab, t, x, y, z):
    out = np.zeros(4, dtype=np.complex128)
    for j in range(rtab.shape[0]):
        ph = cmath.exp(
            1j * (-rtab[j, 4] * rtab[j, 3] * t + rtab[j, 0] * x + rtab[j, 1] * y + rtab[j, 2] * z)
        )
        for a in range(4):
            out[a] += ctab[j, a] * ph
    return out


@njit(cache=True)
def velocity2(args, t, pos, out):
    """Write the 2+1D guidance velocity into ``out``; return the density."""
    fam, rtab, ctab = args
    p1, p2 = spinor2(fam, rtab, ctab, t, pos[0], pos[1])
    rho = p1.real * p1.real + p1.imag * p1.imag + p2.real * p2.real + p2.imag * p2.imag
    if rho <= 0.0:
        out[:] = 0.0
        return 0.0
    c = p1.conjugate() * p2
    out[0] = 2.0 * c.real / rho
    out[1] = 2.0 * c.imag / rho
    return rho


@njit(cache=True)
def velocity4(args, t, pos, out):
    """3+1D Weyl-representation guidance velocity; returns the density."""
    _, rtab, ctab = args
    s = spinor4(rtab, ctab, t, pos[0], pos[1], pos[2])
    rho = 0.0
    for a in range(4):
        rho += s[a].real * s[a].real + s[a].imag * s[a].imag
    if rho <= 0.0:
        out[:] = 0.0
        return 0.0
    # alpha_j = diag(-sigma_j, sigma_j)
    cl = s[0].conjugate() * s[1]
    cr = s[2].conjugate() * s[3]
    dl = abs(s[0]) ** 2 - abs(s[1]) ** 2
    dr = abs(s[2]) ** 2 - abs(s[3]) ** 2
    out[0] = (2.0 * cr.real - 2.0 * cl.real) / rho
    out[1] = (2.0 * cr.imag - 2.0 * cl.imag) / rho
    out[2] = (dr - dl) / rho
    return rho


@njit(cache=True)
def guide_velocity(args, t, pos, out):
    """Velocity for either dimension; ``args`` is (family code, rtab, ctab)."""
    if pos.size == 3:
        return velocity4(args, t, pos, out)
    return velocity2(args, t, pos, out)


@njit(cache=True)
def spinor2_many(fam, rtab, ctab, t, x, y):
    n = x.size
    out = np.empty((n, 2), dtype=np.complex128)
    for i in range(n):
        a, b = spinor2(fam, rtab, ctab, t[i], x[i], y[i])
        out[i, 0] = a
        out[i, 1] = b
    return out


@njit(cache=True)
def spinor4_many(rtab, ctab, t, x, y, z):
    n = x.size
    out = np.empty((n, 4), dtype=np.complex128)
    for i in range(n):
        out[i] = spinor4(rtab, ctab, t[i], x[i], y[i], z[i])
    return out


@njit(cache=True)
def density2_grid(fam, rtab, ctab, t, xs, ys):
    """psi^dagger psi on the tensor grid xs (fast) by ys, shape (ny, nx)."""
    out = np.empty((ys.size, xs.size))
    for j in range(ys.size):
        for i in range(xs.size):
            a, b = spinor2(fam, rtab, ctab, t, xs[i], ys[j])
            out[j, i] = a.real * a.real + a.imag * a.imag + b.real * b.real + b.imag * b.imag
    return out
