"""Dirac eigenmode families and their superpositions.

Units are hbar = c = 1 throughout. Four families are supported:

* ``PlaneWave3D`` - free 3+1D plane waves in the Weyl representation
* ``PlaneWave2D`` - free 2+1D plane waves with alpha = (sigma_1, sigma_2)
* ``OscillatorMode`` - bound states of the 2D Dirac oscillator, built from
  generalized Laguerre polynomials
* ``BoxMode`` - bound states of a circular well of depth V0 and radius R',
  Bessel J inside and Bessel K outside

A ``WaveFunction`` is a phased, weighted superposition of modes from one family
with a numerically determined normalization constant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels as K
from .special import _jn, _kn, laguerre_coefficients


def _half_integer(k) -> float:
    k = float(Fraction(k)) if isinstance(k, str) else float(k)
    if abs(2.0 * k - round(2.0 * k)) > 1e-12 or round(2.0 * k) % 2 == 0:
        raise ValueError(f"k must be a half-integer, got {k}")
    return k


# ------------------------------------------------------------ plane waves --

def helicity_spinor(p, helicity: str) -> np.ndarray:
    """Two-component eigenvector of sigma . p_hat with eigenvalue +1 (R) or -1 (L)."""
    p = np.asarray(p, dtype=float)
    pn = np.linalg.norm(p)
    if pn == 0.0:
        th, ph = 0.0, 0.0
    else:
        th = math.acos(max(-1.0, min(1.0, p[2] / pn)))
        ph = math.atan2(p[1], p[0])
    if helicity == "R":
        return np.array([math.cos(th / 2), np.exp(1j * ph) * math.sin(th / 2)])
    if helicity == "L":
        return np.array([-np.exp(-1j * ph) * math.sin(th / 2), math.cos(th / 2)])
    raise ValueError("helicity must be 'R' or 'L'")


@dataclass(frozen=True)
class PlaneWave3D:
    p: tuple[float, float, float]
    m: float
    helicity: str = "R"
    energy_sign: int = 1

    @property
    def energy(self) -> float:
        return math.sqrt(float(np.dot(self.p, self.p)) + self.m ** 2)

    def amplitude(self) -> np.ndarray:
        """Four-spinor u (positive energy) or v (negative energy), unit density."""
        e = self.energy
        pn = float(np.linalg.norm(self.p))
        chi = helicity_spinor(self.p, self.helicity)
        small = math.sqrt((e - pn) / (2 * e))
        large = math.sqrt((e + pn) / (2 * e))
        pos = self.energy_sign > 0
        if self.helicity == "R":
            upper, lower = (small, large) if pos else (large, -small)
        else:
            upper, lower = (large, small) if pos else (small, -large)
        return np.concatenate([upper * chi, lower * chi])

    def evaluate(self, t, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        phase = np.exp(1j * (-self.energy_sign * self.energy * t + x @ np.asarray(self.p, float)))
        return np.multiply.outer(phase, self.amplitude())


@dataclass(frozen=True)
class PlaneWave2D:
    p: tuple[float, float]
    m: float
    energy_sign: int = 1

    @property
    def energy(self) -> float:
        return math.sqrt(self.p[0] ** 2 + self.p[1] ** 2 + self.m ** 2)

    def amplitude(self) -> np.ndarray:
        e, m = self.energy, self.m
        px, py = self.p
        pref = math.sqrt((e + m) / (2 * e))
        if self.energy_sign > 0:
            return pref * np.array([1.0, (px + 1j * py) / (e + m)])
        return pref * np.array([(-px + 1j * py) / (e + m), 1.0])

    def evaluate(self, t, x, y) -> np.ndarray:
        phase = np.exp(1j * (-self.energy_sign * self.energy * np.asarray(t)
                             + self.p[0] * np.asarray(x) + self.p[1] * np.asarray(y)))
        return np.multiply.outer(phase, self.amplitude())


# ------------------------------------------------------- Dirac oscillator --

def oscillator_delta2(n: int, k: float) -> float:
    """Delta^2 = (E^2 - m^2)/(m omega); branch fixed by regularity at r = 0."""
    return 4.0 * n if k > 0 else 4.0 * n - 4.0 * k + 2.0


def oscillator_energy(n: int, k, m: float = 1.0, omega: float = 1.0) -> float:
    if n < 1:
        raise ValueError("oscillator radial number n must be >= 1")
    k = _half_integer(k)
    return math.sqrt(m * m + m * omega * oscillator_delta2(n, k))


@dataclass(frozen=True)
class OscillatorMode:
    """Positive-energy eigenstate (n, k) of the 2D Dirac oscillator.

    With xi = m omega r^2 the upper radial function is
    exp(-xi/2) xi^alpha L_n^mu(xi) / sqrt(r) and the lower one follows from
    i(E+m) psi2' = (d/dr - k/r + m omega r) psi1'. Each component is written as
    P(xi) z^q exp(-xi/2) with z = x + iy (conj(z) for q < 0) and P a
    polynomial, so the origin needs no special treatment.
    """

    n: int
    k: float
    m: float = 1.0
    omega: float = 1.0
    norm: float = field(init=False, repr=False)
    p1: np.ndarray = field(init=False, repr=False, compare=False)
    p2: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        k = _half_integer(self.k)
        object.__setattr__(self, "k", k)
        if self.n < 1:
            raise ValueError("oscillator radial number n must be >= 1")
        p1, p2 = self._raw_polynomials()
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)
        object.__setattr__(self, "norm", 1.0 / math.sqrt(self._raw_norm2()))

    @property
    def energy(self) -> float:
        return oscillator_energy(self.n, self.k, self.m, self.omega)

    @property
    def delta2(self) -> float:
        return oscillator_delta2(self.n, self.k)

    @property
    def alpha(self) -> float:
        return self.k / 2 if self.k > 0 else 0.5 - self.k / 2

    @property
    def mu(self) -> int:
        return int(round(self.k - 0.5)) if self.k > 0 else int(round(0.5 - self.k))

    @property
    def q1(self) -> int:
        return int(round(self.k - 0.5))

    @property
    def q2(self) -> int:
        return int(round(self.k + 0.5))

    def _raw_polynomials(self):
        n, k, mu = self.n, self.k, self.mu
        mw = self.m * self.omega
        e = self.energy
        scale = mw ** self.alpha
        lag = laguerre_coefficients(n, mu).astype(complex)
        # d/dxi L_n^mu = -L_{n-1}^{mu+1}
        dlag = np.zeros(n + 1, dtype=complex)
        dlag[:n] = -laguerre_coefficients(n - 1, mu + 1)
        p1 = scale * lag
        if k > 0:
            # the (2 alpha - k) term vanishes and one power of xi absorbs 1/r
            p2 = -2j * mw * scale * dlag / (e + self.m)
        else:
            xi_dlag = np.concatenate([[0.0], dlag[:-1]])
            p2 = -1j * scale * ((1 - 2 * k) * lag + 2 * xi_dlag) / (e + self.m)
        return p1, p2

    def _raw_norm2(self) -> float:
        # integrand in xi is exp(-xi) times a polynomial: Gauss-Laguerre is exact
        mw = self.m * self.omega
        xi, w = np.polynomial.laguerre.laggauss(48)
        a = np.polyval(self.p1[::-1], xi)
        b = np.polyval(self.p2[::-1], xi)
        f = np.abs(a) ** 2 * (xi / mw) ** abs(self.q1) + np.abs(b) ** 2 * (xi / mw) ** abs(self.q2)
        return float(math.pi / mw * np.sum(w * f))

    def evaluate(self, t, r, theta) -> np.ndarray:
        """Normalized spinor (psi1, psi2) at polar coordinates, shape (..., 2)."""
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("r must be non-negative")
        x, y = r * np.cos(theta), r * np.sin(theta)
        return self.evaluate_xy(t, x, y)

    def evaluate_xy(self, t, x, y) -> np.ndarray:
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        mw = self.m * self.omega
        xi = mw * (x * x + y * y)
        z = x + 1j * y
        zq1 = z ** self.q1 if self.q1 >= 0 else np.conj(z) ** (-self.q1)
        zq2 = z ** self.q2 if self.q2 >= 0 else np.conj(z) ** (-self.q2)
        g = self.norm * np.exp(-0.5 * xi) * np.exp(-1j * self.energy * np.asarray(t))
        a = np.polyval(self.p1[::-1], xi) * zq1 * g
        b = np.polyval(self.p2[::-1], xi) * zq2 * g
        return np.stack([a, b], axis=-1)


# ------------------------------------------------------------- circular box --

def _box_kappas(e, m, v0):
    kin = math.sqrt((e + v0) ** 2 - m * m)
    kout = math.sqrt(m * m - e * e)
    return kin, kout


def _check_box_domain(e, m, v0):
    if not (m - v0 < e < m):
        raise ValueError(f"E={e} outside the bound-state window ({m - v0}, {m})")


def box_match_residual(e: float, k, m: float = 1.0, v0: float = 1.0, r_prime: float = 5.0) -> float:
    """psi1/psi2 at r = R' from the interior minus the same ratio from the exterior.

    The common factor -i e^{-iEt} e^{i theta} is dropped, leaving a real
    function of E whose zeros are the bound-state energies.
    """
    k = _half_integer(k)
    _check_box_domain(e, m, v0)
    q = int(round(k - 0.5))
    kin, kout = _box_kappas(e, m, v0)
    sin, sout = kin * r_prime, kout * r_prime
    ratio_in = (e + v0 + m) * _jn(q, sin) / (kin * _jn(q + 1, sin))
    ratio_out = (e + m) * _kn(q, sout) / (kout * _kn(q + 1, sout))
    return ratio_in - ratio_out


def solve_box_eigenvalues(k, m: float = 1.0, v0: float = 1.0, r_prime: float = 5.0,
                          scan_resolution: int = 4000, tol: float = 1e-13) -> list[float]:
    """All bound-state energies for angular number k, ascending.

    A uniform scan of the open window (m - V0, m) brackets sign changes that are
    then bisected. Brackets around poles of the ratio (zeros of psi2 at R') are
    discarded: bisection there drives |residual| up instead of down.
    """
    if scan_resolution < 1000:
        raise ValueError("scan_resolution must be at least 1000")
    k = _half_integer(k)
    lo, hi = m - v0, m
    grid = np.linspace(lo, hi, scan_resolution + 1)[1:-1]
    vals = np.array([box_match_residual(e, k, m, v0, r_prime) for e in grid])
    roots = []
    for i in range(len(grid) - 1):
        fa, fb = vals[i], vals[i + 1]
        if not (np.isfinite(fa) and np.isfinite(fb)) or fa * fb > 0:
            continue
        a, b = grid[i], grid[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        bound = max(abs(fa), abs(fb))
        while b - a > tol:
            c = 0.5 * (a + b)
            fc = box_match_residual(c, k, m, v0, r_prime)
            if fc == 0.0:
                a = b = c
                break
            if fa * fc < 0:
                b = c
            else:
                a, fa = c, fc
        c = 0.5 * (a + b)
        if abs(box_match_residual(c, k, m, v0, r_prime)) <= bound:
            roots.append(c)
    return sorted(roots)


def solve_box_beta_prime(e: float, k, m: float = 1.0, v0: float = 1.0, r_prime: float = 5.0) -> float:
    """Exterior coefficient making psi1 continuous at R' (interior coefficient 1)."""
    k = _half_integer(k)
    _check_box_domain(e, m, v0)
    q = int(round(k - 0.5))
    kin, kout = _box_kappas(e, m, v0)
    outer = math.sqrt(kout) * _kn(q, kout * r_prime)
    if outer == 0.0:
        raise ValueError("exterior psi1 vanishes at R'; beta' undefined")
    return math.sqrt(kin) * _jn(q, kin * r_prime) / outer


@dataclass(frozen=True)
class BoxMode:
    """Bound state of angular number k in the circular well.

    ``norm`` rescales the interior-coefficient-1 convention to unit probability.
    """

    k: float
    energy: float
    beta_prime: float
    m: float = 1.0
    v0: float = 1.0
    r_prime: float = 5.0
    norm: float = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "k", _half_integer(self.k))
        _check_box_domain(self.energy, self.m, self.v0)
        object.__setattr__(self, "norm", 1.0 / math.sqrt(self._raw_norm2()))

    @classmethod
    def solve(cls, k, m: float = 1.0, v0: float = 1.0, r_prime: float = 5.0,
              index: int = 0, energy_hint: float | None = None) -> "BoxMode":
        """Build a mode from the eigenvalue solver.

        ``energy_hint`` picks the eigenvalue closest to it, otherwise ``index``
        selects from the ascending list.
        """
        roots = solve_box_eigenvalues(k, m, v0, r_prime)
        if not roots:
            raise ValueError(f"no bound state for k={k}")
        e = min(roots, key=lambda r: abs(r - energy_hint)) if energy_hint is not None else roots[index]
        return cls(k, e, solve_box_beta_prime(e, k, m, v0, r_prime), m, v0, r_prime)

    @property
    def kappa_in(self) -> float:
        return _box_kappas(self.energy, self.m, self.v0)[0]

    @property
    def kappa_out(self) -> float:
        return _box_kappas(self.energy, self.m, self.v0)[1]

    def radial(self, r):
        """Unnormalized radial functions (f1, f2) with psi2 = i f2 e^{i(k+1/2)theta}."""
        r = np.atleast_1d(np.asarray(r, dtype=float))
        q = int(round(self.k - 0.5))
        kin, kout = self.kappa_in, self.kappa_out
        e, m = self.energy, self.m
        f1 = np.empty_like(r)
        f2 = np.empty_like(r)
        for i, ri in enumerate(r):
            if ri <= self.r_prime:
                s = kin * ri
                f1[i] = math.sqrt(kin) * _jn(q, s)
                f2[i] = kin ** 1.5 * _jn(q + 1, s) / (e + self.v0 + m)
            else:
                s = kout * ri
                f1[i] = math.sqrt(kout) * self.beta_prime * _kn(q, s)
                f2[i] = kout ** 1.5 * self.beta_prime * _kn(q + 1, s) / (e + m)
        return f1, f2

    def _raw_norm2(self) -> float:
        xg, wg = np.polynomial.legendre.leggauss(200)
        rp = self.r_prime
        r_in = 0.5 * rp * (xg + 1)
        w_in = 0.5 * rp * wg
        # exterior: |psi|^2 ~ exp(-2 kout r); integrate 60 decay lengths
        span = 30.0 / self.kappa_out
        r_out = rp + 0.5 * span * (xg + 1)
        w_out = 0.5 * span * wg
        total = 0.0
        for rr, ww in ((r_in, w_in), (r_out, w_out)):
            f1, f2 = self.radial(rr)
            total += float(np.sum(ww * rr * (f1 ** 2 + f2 ** 2)))
        return 2 * math.pi * total

    def evaluate(self, t, r, theta) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("r must be non-negative")
        shape = np.broadcast_shapes(np.shape(t), r.shape, np.shape(theta))
        rb = np.broadcast_to(r, shape).ravel()
        thb = np.broadcast_to(theta, shape).ravel()
        tb = np.broadcast_to(t, shape).ravel()
        f1, f2 = self.radial(rb)
        q = int(round(self.k - 0.5))
        ph = self.norm * np.exp(-1j * self.energy * tb)
        a = ph * f1 * np.exp(1j * q * thb)
        b = ph * 1j * f2 * np.exp(1j * (q + 1) * thb)
        return np.stack([a, b], axis=-1).reshape(shape + (2,))

    def evaluate_xy(self, t, x, y) -> np.ndarray:
        x, y = np.asarray(x, float), np.asarray(y, float)
        return self.evaluate(t, np.hypot(x, y), np.arctan2(y, x))


# --------------------------------------------------------- superpositions --

DEFAULT_HINT = {"oscillator": (-10.0, 10.0, -10.0, 10.0), "box": (-15.0, 15.0, -15.0, 15.0)}


def _family(mode) -> str:
    if isinstance(mode, PlaneWave2D):
        return "plane2d"
    if isinstance(mode, PlaneWave3D):
        return "plane3d"
    if isinstance(mode, OscillatorMode):
        return "oscillator"
    if isinstance(mode, BoxMode):
        return "box"
    raise TypeError(f"unsupported mode {mode!r}")


@dataclass(frozen=True)
class WaveFunction:
    """Normalized superposition sum_j c_j psi_j with c_j = weight_j e^{i phase_j}.

    ``norm_constant`` multiplies the whole sum. Bound families are normalized
    by tensor-product midpoint quadrature over ``domain_hint`` at t = 0; plane
    waves are not square integrable and are scaled to unit mean density instead
    (1/sqrt(sum |c_j|^2)).
    """

    modes: tuple
    coefficients: np.ndarray
    norm_constant: float
    domain_hint: tuple[float, float, float, float] | None = None
    family: str = field(init=False)
    rtab: np.ndarray = field(init=False, repr=False)
    ctab: np.ndarray = field(init=False, repr=False)
    density_floor: float = field(init=False, repr=False, default=0.0)

    def __post_init__(self):
        fams = {_family(md) for md in self.modes}
        if len(fams) != 1:
            raise ValueError("all modes of a superposition must share one family")
        object.__setattr__(self, "family", fams.pop())
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=complex))
        rtab, ctab = _pack(self.family, self.modes, self.coefficients * self.norm_constant)
        object.__setattr__(self, "rtab", rtab)
        object.__setattr__(self, "ctab", ctab)
        object.__setattr__(self, "density_floor", 1e-300 * self._peak_density())

    @property
    def fam_code(self) -> int:
        return {"plane2d": K.PLANE2D, "oscillator": K.OSCILLATOR, "box": K.BOX}.get(self.family, -1)

    @property
    def dim(self) -> int:
        return 3 if self.family == "plane3d" else 2

    def kernel_args(self):
        return (np.int64(self.fam_code), self.rtab, self.ctab)

    def _peak_density(self) -> float:
        if self.family in ("plane2d", "plane3d"):
            return 1.0
        # cheap estimate on a coarse grid
        x0, x1, y0, y1 = self.domain_hint
        xs = np.linspace(x0, x1, 61)
        ys = np.linspace(y0, y1, 61)
        return float(K.density2_grid(self.fam_code, self.rtab, self.ctab, 0.0, xs, ys).max())

    def spinor(self, t, *coords) -> np.ndarray:
        """Spinor components at (t, x, y[, z]); arrays broadcast, shape (..., 2|4)."""
        arrs = np.broadcast_arrays(np.asarray(t, float), *[np.asarray(c, float) for c in coords])
        shape = arrs[0].shape
        flat = [np.ascontiguousarray(a).ravel() for a in arrs]
        if self.family == "plane3d":
            out = K.spinor4_many(self.rtab, self.ctab, *flat)
        else:
            out = K.spinor2_many(np.int64(self.fam_code), self.rtab, self.ctab, *flat)
        return out.reshape(shape + (out.shape[-1],))

    def density(self, t, *coords) -> np.ndarray:
        s = self.spinor(t, *coords)
        return np.sum(s.real ** 2 + s.imag ** 2, axis=-1)

    def density_grid(self, t: float, xs, ys) -> np.ndarray:
        """psi^dagger psi on a tensor grid, shape (len(ys), len(xs))."""
        return K.density2_grid(np.int64(self.fam_code), self.rtab, self.ctab, float(t),
                               np.asarray(xs, float), np.asarray(ys, float))

    def norm2(self, n: int = 2048, t: float = 0.0) -> float:
        """Midpoint-rule integral of psi^dagger psi over ``domain_hint``."""
        return _midpoint_norm2(self.fam_code, self.rtab, self.ctab, self.domain_hint, n, t)

    def subset(self, count: int) -> "WaveFunction":
        """Superposition of the first ``count`` modes, renormalized."""
        return superpose(self.modes[:count], np.angle(self.coefficients[:count]),
                         np.abs(self.coefficients[:count]), self.domain_hint)


def _midpoint_norm2(fam, rtab, ctab, hint, n, t=0.0) -> float:
    x0, x1, y0, y1 = hint
    hx, hy = (x1 - x0) / n, (y1 - y0) / n
    xs = x0 + hx * (np.arange(n) + 0.5)
    ys = y0 + hy * (np.arange(n) + 0.5)
    total = 0.0
    step = 256
    for j in range(0, n, step):
        total += float(K.density2_grid(np.int64(fam), rtab, ctab, float(t), xs, ys[j:j + step]).sum())
    return total * hx * hy


def _pack(family, modes, coef):
    nm = len(modes)
    if family in ("oscillator", "box"):
        # kernels reuse the time phase across consecutive equal energies
        order = sorted(range(nm), key=lambda j: modes[j].energy)
        modes = [modes[j] for j in order]
        coef = np.asarray(coef)[order]
    if family == "oscillator" and len({md.m * md.omega for md in modes}) != 1:
        raise ValueError("oscillator modes in one superposition must share m*omega")
    if family == "plane2d":
        rtab = np.array([[md.p[0], md.p[1], md.energy, md.energy_sign] for md in modes], float)
        ctab = np.array([c * md.amplitude() for md, c in zip(modes, coef)], complex)
    elif family == "plane3d":
        rtab = np.array([[*md.p, md.energy, md.energy_sign] for md in modes], float)
        ctab = np.array([c * md.amplitude() for md, c in zip(modes, coef)], complex)
    elif family == "oscillator":
        d = max(len(md.p1) for md in modes)
        rtab = np.zeros((nm, 5))
        ctab = np.zeros((nm, 1 + 2 * d), complex)
        for j, (md, c) in enumerate(zip(modes, coef)):
            rtab[j] = [md.energy, md.m * md.omega, md.q1, md.q2, len(md.p1) - 1]
            ctab[j, 0] = c * md.norm
            ctab[j, 1:1 + len(md.p1)] = md.p1
            ctab[j, 1 + d:1 + d + len(md.p2)] = md.p2
    else:
        rtab = np.array([[md.energy, md.k, md.kappa_in, md.kappa_out, md.beta_prime,
                          md.v0, md.r_prime, md.m] for md in modes], float)
        ctab = np.array([[c * md.norm] for md, c in zip(modes, coef)], complex)
    return np.ascontiguousarray(rtab), np.ascontiguousarray(ctab)


def superpose(modes: Sequence, phases: Sequence[float] | None = None,
              weights: Sequence[float] | None = None, domain_hint=None,
              quadrature_points: int = 2048) -> WaveFunction:
    """Phased superposition, normalized to unit probability (or unit mean density)."""
    modes = tuple(modes)
    if not modes:
        raise ValueError("at least one mode is required")
    phases = np.zeros(len(modes)) if phases is None else np.asarray(phases, float)
    weights = np.ones(len(modes)) if weights is None else np.asarray(weights, float)
    if len(phases) != len(modes) or len(weights) != len(modes):
        raise ValueError("modes, phases and weights must have equal length")
    if not np.any(weights != 0):
        raise ValueError("all weights are zero")
    coef = weights * np.exp(1j * phases)
    fams = {_family(md) for md in modes}
    if len(fams) != 1:
        raise ValueError("all modes of a superposition must share one family")
    fam = fams.pop()
    if fam in ("plane2d", "plane3d"):
        return WaveFunction(modes, coef, 1.0 / math.sqrt(float(np.sum(np.abs(coef) ** 2))), domain_hint)
    hint = tuple(domain_hint) if domain_hint is not None else DEFAULT_HINT[fam]
    rtab, ctab = _pack(fam, modes, coef)
    code = K.OSCILLATOR if fam == "oscillator" else K.BOX
    n2 = _midpoint_norm2(code, rtab, ctab, hint, quadrature_points)
    return WaveFunction(modes, coef, 1.0 / math.sqrt(n2), hint)


# ------------------------------------------------------------------ catalogs --

OSCILLATOR_PHASES = {
    (1, 0.5): 4.869, (1, -0.5): 1.049, (2, 0.5): 4.291, (2, -0.5): 3.066,
    (1, 1.5): 0.188, (1, -1.5): 1.288, (2, 1.5): 0.219, (2, -1.5): 4.706,
}

# (k, E, beta', phase) for m = 1, V0 = 1, R' = 5, in superposition order
BOX_TABLE = (
    (0.5, 0.410077354998218, -32.6316901377613, 0.797881698340871),
    (1.5, 0.610542082182398, -19.79344405979468, 5.73890975922526),
    (2.5, 0.812057491976715, -5.13915809445641, 3.97323032474265),
    (-0.5, 0.598385922365134, 22.59183163168054, 1.74985591686112),
    (-1.5, 0.356509811273382, 24.1846971959765, 5.11905989575681),
    (-2.5, 0.510184308650916, -12.1855792791713, 0.61286443954863),
)


def oscillator_spinor(m: float = 1.0, omega: float = 1.0, domain_hint=None,
                      quadrature_points: int = 2048) -> WaveFunction:
    """Equal-weight eight-mode oscillator superposition with the tabulated phases."""
    modes = [OscillatorMode(n, k, m, omega) for (n, k) in OSCILLATOR_PHASES]
    return superpose(modes, list(OSCILLATOR_PHASES.values()), None, domain_hint, quadrature_points)


def box_modes(count: int = 6, m: float = 1.0, v0: float = 1.0, r_prime: float = 5.0,
              solve: bool = True) -> list[BoxMode]:
    """The tabulated box modes; energies and beta' re-solved unless ``solve`` is False."""
    out = []
    for k, e, bp, _ in BOX_TABLE[:count]:
        if solve:
            out.append(BoxMode.solve(k, m, v0, r_prime, energy_hint=e))
        else:
            out.append(BoxMode(k, e, bp, m, v0, r_prime))
    return out


def box_spinor(count: int = 6, m: float = 1.0, v0: float = 1.0, r_prime: float = 5.0,
               domain_hint=None, quadrature_points: int = 2048, solve: bool = True) -> WaveFunction:
    """Superposition of the first ``count`` tabulated box modes with their phases."""
    modes = box_modes(count, m, v0, r_prime, solve)
    phases = [row[3] for row in BOX_TABLE[:count]]
    return superpose(modes, phases, None, domain_hint, quadrature_points)


# momenta and phases of the three-wave free spinors
FREE_MODES_3D = (((1.0, 0.0, 1.0), 0.0), ((-1.0, -2.0, -1.0), 4.0), ((1.0, -1.0, 1.0), 9.0))
FREE_MODES_2D = (((1.0, 0.0), 0.0), ((-1.0, -2.0), 4.0), ((1.0, -1.0), 9.0))


def free_spinor3d(m: float, helicity: str = "R") -> WaveFunction:
    """Three positive-energy plane waves of one helicity, weights 1/sqrt(3)."""
    modes = [PlaneWave3D(p, m, helicity) for p, _ in FREE_MODES_3D]
    return superpose(modes, [ph for _, ph in FREE_MODES_3D])


def free_spinor2d(m: float) -> WaveFunction:
    """Three positive-energy 2+1D plane waves, weights 1/sqrt(3)."""
    modes = [PlaneWave2D(p, m) for p, _ in FREE_MODES_2D]
    return superpose(modes, [ph for _, ph in FREE_MODES_2D])
