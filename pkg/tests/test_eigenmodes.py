import math

import numpy as np
import pytest
from scipy import special as sp

from diracbohm.eigenmodes import (BOX_TABLE, BoxMode, OscillatorMode, PlaneWave2D, PlaneWave3D,
                                  box_match_residual, box_modes, helicity_spinor,
                                  oscillator_energy, solve_box_beta_prime, solve_box_eigenvalues,
                                  superpose, WaveFunction)
from diracbohm.spinor import PAULI, REP_WEYL

rng = np.random.default_rng(7)
S5, S13, S17 = math.sqrt(5), math.sqrt(13), math.sqrt(17)


# ------------------------------------------------------------- plane waves --

@pytest.mark.parametrize("hel", ["R", "L"])
@pytest.mark.parametrize("sign", [1, -1])
def test_plane_wave_3d_solves_dirac(hel, sign):
    for _ in range(5):
        p = rng.normal(size=3)
        m = rng.uniform(0.1, 3)
        pw = PlaneWave3D(tuple(p), m, hel, sign)
        amp = pw.amplitude()
        h = sum(a * pj for a, pj in zip(REP_WEYL.alpha, p)) + m * REP_WEYL.beta
        np.testing.assert_allclose(h @ amp, sign * pw.energy * amp, atol=1e-12)
        assert np.vdot(amp, amp).real == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("hel,eig", [("R", 1), ("L", -1)])
def test_helicity_eigenvectors(hel, eig):
    for _ in range(20):
        p = rng.normal(size=3)
        chi = helicity_spinor(p, hel)
        sp_hat = sum(s * c for s, c in zip(PAULI, p / np.linalg.norm(p)))
        np.testing.assert_allclose(sp_hat @ chi, eig * chi, atol=1e-12)


def test_plane_wave_3d_massless_limit():
    pw = PlaneWave3D((0.3, -0.4, 1.2), 1e-9, "R")
    amp = pw.amplitude()
    np.testing.assert_allclose(amp[:2], 0, atol=1e-8)
    np.testing.assert_allclose(amp[2:], helicity_spinor(pw.p, "R"), atol=1e-8)
    np.testing.assert_allclose(helicity_spinor((0, 0, 1), "R"), [1, 0])


def test_plane_wave_densities_are_one():
    t, x = rng.uniform(-50, 50, 1000), rng.uniform(-50, 50, (1000, 3))
    for pw in (PlaneWave3D((1, 0, 1), 3.0), PlaneWave3D((1, -2, 1), 0.5, "L", -1)):
        psi = pw.evaluate(t[0], x)
        np.testing.assert_allclose(np.sum(np.abs(psi) ** 2, -1), 1.0, atol=1e-13)
    for pw in (PlaneWave2D((1, 0), 1.0), PlaneWave2D((-1, -2), 6.0, -1)):
        psi = pw.evaluate(t, x[:, 0], x[:, 1])
        np.testing.assert_allclose(np.sum(np.abs(psi) ** 2, -1), 1.0, atol=1e-13)


def test_plane_wave_2d_rest_frame():
    t = 0.7
    np.testing.assert_allclose(PlaneWave2D((0, 0), 2.0).evaluate(t, 0.3, 0.1), [np.exp(-2j * t), 0])
    np.testing.assert_allclose(PlaneWave2D((0, 0), 2.0, -1).evaluate(t, 0.3, 0.1), [0, np.exp(2j * t)])


@pytest.mark.parametrize("sign", [1, -1])
def test_plane_wave_2d_solves_dirac(sign):
    pw = PlaneWave2D((0.8, -1.3), 1.7, sign)
    h = 1e-4
    for t, x, y in rng.uniform(-3, 3, (5, 3)):
        psi = pw.evaluate(t, x, y)
        dt = (pw.evaluate(t + h, x, y) - pw.evaluate(t - h, x, y)) / (2 * h)
        dx = (pw.evaluate(t, x + h, y) - pw.evaluate(t, x - h, y)) / (2 * h)
        dy = (pw.evaluate(t, x, y + h) - pw.evaluate(t, x, y - h)) / (2 * h)
        hpsi = -1j * (PAULI[0] @ dx + PAULI[1] @ dy) + 1.7 * PAULI[2] @ psi
        np.testing.assert_allclose(1j * dt, hpsi, atol=1e-7)


# ------------------------------------------------------- Dirac oscillator --

def test_oscillator_energies():
    want = {(1, .5): S5, (1, -.5): 3, (2, .5): 3, (2, -.5): S13, (1, 1.5): S5, (1, -1.5): S13,
            (2, 1.5): 3, (2, -1.5): S17}
    for (n, k), e in want.items():
        assert oscillator_energy(n, k) == pytest.approx(e, abs=1e-15)
        assert OscillatorMode(n, k).delta2 == pytest.approx(e * e - 1, abs=1e-13)
    assert oscillator_energy(1, -0.5) == oscillator_energy(2, 0.5) == oscillator_energy(2, 1.5) == 3
    assert oscillator_energy(1, "1/2", 2.0, 0.5) == pytest.approx(math.sqrt(4 + 4))
    with pytest.raises(ValueError):
        oscillator_energy(0, 0.5)
    with pytest.raises(ValueError):
        OscillatorMode(1, 1.0)


def _table(n, k, t, r, th):
    """Closed-form eigenstates for m = omega = 1; the Gaussian factor is
    restored in the two n = 2, |k| = 3/2 rows where the table omits it."""
    g = np.exp(-r * r / 2)
    e = np.exp
    if (n, k) == (1, .5):
        c = math.sqrt(2 * math.pi) * math.sqrt(5 - S5)
        return e(-1j * S5 * t) * g * 2 * (1 - r * r) / c, 4j * e(1j * th) * r * e(-1j * S5 * t) * g / (c * (1 + S5))
    if (n, k) == (1, -.5):
        c = math.sqrt(3 * math.pi)
        return e(-1j * th) * e(-3j * t) * g * r * (2 - r * r) / c, e(-3j * t) * g * 1j * (r * r - 1) / c
    if (n, k) == (2, .5):
        c = math.sqrt(6 * math.pi)
        return e(-3j * t) * g * (r ** 4 - 4 * r * r + 2) / c, e(1j * th) * e(-3j * t) * g * 1j * r * (2 - r * r) / c
    if (n, k) == (2, -.5):
        c = math.sqrt(2 * math.pi) * math.sqrt(13 - S13)
        return (e(-1j * th) * e(-1j * S13 * t) * g * r * (r ** 4 - 6 * r * r + 6) / c,
                e(-1j * S13 * t) * g * 6j * (-r ** 4 + 4 * r * r - 2) / (c * (1 + S13)))
    if (n, k) == (1, 1.5):
        c = math.sqrt(math.pi) * math.sqrt(5 - S5)
        return (e(1j * th) * e(-1j * S5 * t) * g * r * (2 - r * r) / c,
                2 * e(2j * th) * e(-1j * S5 * t) * g * 1j * r * r / (c * (1 + S5)))
    if (n, k) == (1, -1.5):
        c = math.sqrt(math.pi) * math.sqrt(13 - S13)
        return (e(-2j * th) * e(-1j * S13 * t) * g * r * r * (3 - r * r) / c,
                e(-1j * th) * e(-1j * S13 * t) * g * 6j * r * (r * r - 2) / (c * (1 + S13)))
    if (n, k) == (2, 1.5):
        c = 3 * math.sqrt(2 * math.pi)
        return (e(1j * th) * e(-3j * t) * g * r * (r ** 4 - 6 * r * r + 6) / c,
                e(2j * th) * e(-3j * t) * g * 1j * r * r * (3 - r * r) / c)
    c = math.sqrt(6 * math.pi) * math.sqrt(17 - S17)
    return (e(-2j * th) * e(-1j * S17 * t) * g * r * r * (r ** 4 - 8 * r * r + 12) / c,
            e(-1j * th) * e(-1j * S17 * t) * g * 8j * r * (-r ** 4 + 6 * r * r - 6) / (c * (1 + S17)))


TABLE_MODES = [(1, .5), (1, -.5), (2, .5), (2, -.5), (1, 1.5), (1, -1.5), (2, 1.5), (2, -1.5)]


@pytest.mark.parametrize("n,k", TABLE_MODES)
def test_oscillator_matches_closed_form(n, k):
    t, r, th = rng.uniform(0, 10, 100), rng.uniform(0, 4, 100), rng.uniform(-np.pi, np.pi, 100)
    got = OscillatorMode(n, k).evaluate(t, r, th)
    a, b = _table(n, k, t, r, th)
    np.testing.assert_allclose(got[:, 0], a, rtol=0, atol=1e-10)
    np.testing.assert_allclose(got[:, 1], b, rtol=0, atol=1e-10)


def test_oscillator_nodes():
    assert abs(OscillatorMode(1, -0.5).evaluate(0, 1.0, 0.4)[1]) < 1e-15
    assert abs(OscillatorMode(1, 0.5).evaluate(0, 1.0, 2.0)[0]) < 1e-15
    assert abs(OscillatorMode(2, 1.5).evaluate(0, math.sqrt(3), 1.0)[1]) < 1e-14
    with pytest.raises(ValueError):
        OscillatorMode(1, 0.5).evaluate(0, -1.0, 0.0)


def _fd_residual(fn, energy, pts, mw=0.0, m=1.0, pot=None, h=1e-4):
    """max |H psi - E psi| / max |psi| by central differences."""
    worst, peak = 0.0, 0.0
    for x, y in pts:
        psi = fn(x, y)
        dx = (fn(x + h, y) - fn(x - h, y)) / (2 * h)
        dy = (fn(x, y + h) - fn(x, y - h)) / (2 * h)
        v = pot(math.hypot(x, y)) if pot else 0.0
        h1 = m * psi[0] - 1j * (dx[1] - 1j * dy[1]) + 1j * mw * (x - 1j * y) * psi[1] + v * psi[0]
        h2 = -m * psi[1] - 1j * (dx[0] + 1j * dy[0]) - 1j * mw * (x + 1j * y) * psi[0] + v * psi[1]
        worst = max(worst, abs(h1 - energy * psi[0]), abs(h2 - energy * psi[1]))
        peak = max(peak, float(np.max(np.abs(psi))))
    return worst / peak


def _annulus(n, r0, r1):
    r = rng.uniform(r0, r1, n)
    th = rng.uniform(0, 2 * np.pi, n)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


@pytest.mark.parametrize("n,k", TABLE_MODES + [(3, 2.5), (3, -2.5)])
def test_oscillator_eigen_residual(n, k):
    md = OscillatorMode(n, k)
    res = _fd_residual(lambda x, y: md.evaluate_xy(0.0, x, y), md.energy, _annulus(200, 0.2, 4), mw=1.0)
    assert res < 1e-5


def test_oscillator_normalization_quadrature():
    # polar midpoint quadrature, independent of the Gauss-Laguerre norm
    r = (np.arange(4000) + 0.5) * 10 / 4000
    th = (np.arange(64) + 0.5) * 2 * np.pi / 64
    rr, tt = np.meshgrid(r, th)
    for n, k in TABLE_MODES:
        psi = OscillatorMode(n, k).evaluate(0.0, rr, tt)
        total = np.sum(np.sum(np.abs(psi) ** 2, -1) * rr) * (10 / 4000) * (2 * np.pi / 64)
        assert total == pytest.approx(1.0, abs=1e-6)


def test_oscillator_general_parameters_regular():
    md = OscillatorMode(2, -1.5, m=2.0, omega=0.7)
    assert np.all(np.isfinite(md.evaluate(0.0, np.array([0.0, 1e-8]), 0.0)))
    res = _fd_residual(lambda x, y: md.evaluate_xy(0.0, x, y), md.energy, _annulus(50, 0.2, 3),
                       mw=1.4, m=2.0)
    assert res < 1e-5


# ------------------------------------------------------------- circular box --

TABULATED = {row[0]: row for row in BOX_TABLE}


@pytest.mark.parametrize("k", [0.5, 1.5, 2.5, -0.5, -1.5, -2.5])
def test_box_eigenvalue_and_beta(k):
    _, e, bp, _ = TABULATED[k]
    roots = solve_box_eigenvalues(k)
    assert min(abs(r - e) for r in roots) < 1e-9
    assert abs(box_match_residual(e, k)) < 1e-9 * max(1.0, abs(bp))
    root = min(roots, key=lambda r: abs(r - e))
    assert solve_box_beta_prime(root, k) == pytest.approx(bp, rel=1e-6)
    assert roots == sorted(roots)


def test_box_residual_domain():
    assert abs(box_match_residual(0.5, 0.5)) > 1e-3
    for bad in (0.0, 1.0, 1.5):
        with pytest.raises(ValueError):
            box_match_residual(bad, 0.5)
    with pytest.raises(ValueError):
        solve_box_eigenvalues(0.5, scan_resolution=100)
    assert solve_box_eigenvalues(0.5, v0=1e-3, r_prime=0.1) == []


def test_box_matching_continuity():
    for md in box_modes(6):
        f1i, f2i = md.radial(np.array([md.r_prime]))
        s = md.kappa_out * md.r_prime
        q = int(md.k - 0.5)
        f1o = math.sqrt(md.kappa_out) * md.beta_prime * sp.kv(q, s)
        f2o = md.kappa_out ** 1.5 * md.beta_prime * sp.kv(q + 1, s) / (md.energy + md.m)
        assert f1i[0] == pytest.approx(f1o, rel=1e-9)
        assert f1i[0] / f2i[0] == pytest.approx(f1o / f2o, rel=1e-9)


def test_box_matches_literal_bessel_forms():
    # psi2 with the unsimplified (1-2k)/s J_{k-1/2} + J_{k-3/2} bracket and
    # its K analogue outside, evaluated with scipy
    for md in box_modes(6):
        k, e, m, v0 = md.k, md.energy, md.m, md.v0
        for r in (0.3, 1.7, 4.2, 6.0, 9.5):
            th = 0.9
            got = md.evaluate(0.0, r, th) / md.norm
            if r <= md.r_prime:
                kap, s, a = md.kappa_in, md.kappa_in * r, 1.0
                f = lambda nu: a * sp.jv(nu, s)
                br = (1 - 2 * k) / s * f(k - .5) + f(k - 1.5)
                den = e + v0 + m
            else:
                kap, s, a = md.kappa_out, md.kappa_out * r, md.beta_prime
                f = lambda nu: a * sp.kv(nu, s)
                br = (1 - 2 * k) / s * f(k - .5) - f(k - 1.5)
                den = e + m
            psi1 = math.sqrt(kap) * np.exp(1j * (k - .5) * th) * f(k - .5)
            psi2 = -1j * kap ** 1.5 * np.exp(1j * (k + .5) * th) / den * br
            assert got[0] == pytest.approx(psi1, rel=1e-10, abs=1e-14)
            assert got[1] == pytest.approx(psi2, rel=1e-10, abs=1e-14)


def test_box_regularity_and_decay():
    md = box_modes(1)[0]
    near = md.evaluate(0.0, 1e-9, 0.3)
    assert np.isfinite(near).all() and abs(near[1]) < 1e-8
    d = lambda r: float(np.sum(np.abs(md.evaluate(0.0, r, 0.0)) ** 2))
    for md in box_modes(6):
        assert d(2 * md.r_prime) < d(md.r_prime)
    with pytest.raises(ValueError):
        md.evaluate(0.0, -0.1, 0.0)


@pytest.mark.parametrize("md", box_modes(6), ids=lambda md: f"k{md.k:+g}")
def test_box_eigen_residual(md):
    pot = lambda r: -md.v0 if r <= md.r_prime else 0.0
    fn = lambda x, y: md.evaluate_xy(0.0, x, y)
    assert _fd_residual(fn, md.energy, _annulus(200, 0.2, 4), pot=pot) < 1e-5
    assert _fd_residual(fn, md.energy, _annulus(50, 5.5, 9), pot=pot) < 1e-5


def test_box_solve_selects_by_hint():
    md = BoxMode.solve(0.5, energy_hint=0.4)
    assert md.energy == pytest.approx(0.410077354998218, abs=1e-9)
    assert BoxMode.solve(0.5, index=0).energy < md.energy


# ---------------------------------------------------------- superpositions --

def test_single_mode_norm_constant():
    wf = superpose([OscillatorMode(1, 0.5)], [0.0])
    assert wf.norm_constant == pytest.approx(1.0, abs=1e-6)
    wf = superpose([OscillatorMode(2, -1.5)], [1.0], [3.0])
    assert abs(wf.coefficients[0]) * wf.norm_constant == pytest.approx(1.0, abs=1e-6)


def test_eight_mode_norm_constant(osc_wf):
    assert osc_wf.norm_constant == pytest.approx(1 / math.sqrt(8), abs=1e-4)
    assert osc_wf.norm2(1024) == pytest.approx(1.0, abs=1e-6)


def test_box_spinor_normalized(box_wf):
    # distinct k are orthogonal, so the exact norm^2 is the number of modes
    assert box_wf.norm_constant == pytest.approx(1 / math.sqrt(6), rel=1e-6)
    wider = WaveFunction(box_wf.modes, box_wf.coefficients, box_wf.norm_constant, (-20, 20, -20, 20))
    wider = wider.norm2(1536)
    assert wider == pytest.approx(1.0, abs=1e-6)


def test_box_modes_orthogonal():
    mods = box_modes(3)
    x = (np.arange(1200) + 0.5) * 30 / 1200 - 15
    gx, gy = np.meshgrid(x, x)
    a = mods[0].evaluate_xy(0.0, gx, gy)
    b = mods[1].evaluate_xy(0.0, gx, gy)
    overlap = np.sum(np.conj(a) * b) * (30 / 1200) ** 2
    assert abs(overlap) < 1e-4


def test_superpose_validation():
    with pytest.raises(ValueError):
        superpose([])
    with pytest.raises(ValueError):
        superpose([OscillatorMode(1, 0.5)], [0.0], [0.0])
    with pytest.raises(ValueError):
        superpose([OscillatorMode(1, 0.5)], [0.0, 1.0])
    with pytest.raises(ValueError):
        superpose([OscillatorMode(1, 0.5), box_modes(1)[0]])


def test_kernel_matches_mode_evaluation(osc_wf):
    x, y, t = rng.uniform(-4, 4, 50), rng.uniform(-4, 4, 50), rng.uniform(0, 30, 50)
    direct = sum(c * md.evaluate_xy(t, x, y) for c, md in zip(osc_wf.coefficients, osc_wf.modes))
    np.testing.assert_allclose(osc_wf.spinor(t, x, y), osc_wf.norm_constant * direct, atol=1e-13)
