import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diracbohm.density import (CoarseGrainSpec, DensityGrid, InitialDensity, LatticeSpec,
                               build_lattice, coarse_grain, equilibrium_grid, read_coarse_grid,
                               read_density_grid, reconstruct_densities, reconstruct_density,
                               relaxation_metrics, smooth_coarse_grain, write_coarse_grid,
                               write_density_grid)
from diracbohm.dynamics import IntegratorConfig, integrate
from diracbohm.eigenmodes import OscillatorMode, superpose

CFG = IntegratorConfig(abs_tolerance=1e-11, min_step=1e-12)
SMOOTH = CoarseGrainSpec(kind="smooth")


def _polar_integral(d: InitialDensity) -> float:
    # Gauss-Legendre in radius, periodic trapezoid in angle, about the center
    xg, wg = np.polynomial.legendre.leggauss(80)
    r = 0.5 * d.radius * (xg + 1)
    w = 0.5 * d.radius * wg
    th = 2 * np.pi * np.arange(64) / 64
    rr, tt = np.meshgrid(r, th)
    vals = d(d.center[0] + rr * np.cos(tt), d.center[1] + rr * np.sin(tt))
    return float(np.sum(vals * rr * w[None, :]) * 2 * np.pi / 64)


@pytest.mark.parametrize("j", range(5))
def test_initial_density_normalized(j):
    d = InitialDensity.rho(j)
    assert _polar_integral(d) == pytest.approx(1.0, abs=1e-6)


def test_initial_density_values():
    d = InitialDensity.rho(0)
    assert float(d(0.0, 0.0)) == pytest.approx(2 * math.pi / (16 * (math.pi ** 2 - 4)), rel=1e-14)
    assert float(d(0.0, 0.0)) == pytest.approx(0.0669038, abs=5e-8)
    assert float(d(4.0, 0.0)) == pytest.approx(0.0, abs=1e-18)
    assert float(d(3.0, 3.0)) == 0.0
    d1 = InitialDensity.rho(1)
    assert d1.center == (2.0, 0.0) and d1.radius == 2.0
    assert float(d1(4.5, 0.0)) == 0.0 and float(d1(2.0, 0.0)) > 0
    assert [InitialDensity.rho(j).center for j in range(1, 5)] == [(2, 0), (0, 2), (-2, 0), (0, -2)]
    with pytest.raises(ValueError):
        InitialDensity("rho0", (0, 0), 0.0)
    with pytest.raises(ValueError):
        InitialDensity("gauss")


def test_lattice_layout():
    big = LatticeSpec(2048, 2048)
    xs, ys = big.axes()
    assert xs[0] == -4.99755859375 and ys[0] == -4.99755859375
    assert xs[-1] == 4.99755859375
    assert np.all(np.abs(xs) < 5)
    small = build_lattice(LatticeSpec(2, 2, (-1, 1, -1, 1)))
    np.testing.assert_array_equal(small, [[-0.5, -0.5], [-0.5, 0.5], [0.5, -0.5], [0.5, 0.5]])
    with pytest.raises(ValueError):
        LatticeSpec(0, 4)
    with pytest.raises(ValueError):
        LatticeSpec(4, 4, (1, -1, 0, 1))


def test_equilibrium_reconstruction_matches_direct(osc_wf):
    lat = LatticeSpec(16, 16)
    g = reconstruct_density(osc_wf, None, 0.0, 10.0, lat, CFG)
    direct = equilibrium_grid(osc_wf, 10.0, lat)
    assert g.good.mean() > 0.9
    np.testing.assert_allclose(g.values[g.good], direct.values[g.good], rtol=0, atol=1e-4)
    assert np.all(np.isnan(g.values[~g.good]))


def test_stationary_state_transports_along_circles():
    wf = superpose([OscillatorMode(1, 0.5)])
    lat = LatticeSpec(8, 8, (-3, 3, -3, 3))
    d = InitialDensity.rho(1)
    g = reconstruct_density(wf, d, 0.0, 7.0, lat, CFG)
    assert g.good.all()
    pts = lat.points().reshape(8, 8, 2)
    np.testing.assert_allclose(np.hypot(*np.moveaxis(g.origins, -1, 0)), np.hypot(*np.moveaxis(pts, -1, 0)),
                               atol=1e-8)
    np.testing.assert_allclose(g.values, d(g.origins[..., 0], g.origins[..., 1]), atol=1e-12)


def test_reconstruct_at_initial_time_and_bad_order(osc_wf):
    lat = LatticeSpec(4, 4)
    d = InitialDensity.rho(0)
    g = reconstruct_density(osc_wf, d, 0.0, 0.0, lat)
    pts = lat.points()
    np.testing.assert_allclose(g.values.ravel(), d(pts[:, 0], pts[:, 1]), rtol=1e-14)
    with pytest.raises(ValueError):
        reconstruct_density(osc_wf, d, 5.0, 1.0, lat)


def test_multi_density_shares_trajectories(osc_wf):
    lat = LatticeSpec(6, 6)
    many = reconstruct_densities(osc_wf, [InitialDensity.rho(0), InitialDensity.rho(2)], 0.0, 5.0, lat, CFG)
    single = reconstruct_density(osc_wf, InitialDensity.rho(2), 0.0, 5.0, lat, CFG)
    np.testing.assert_array_equal(many[1].values, single.values)


def test_liouville_jacobian(osc_wf):
    # psi^dag psi(t, x(t)) det(dx/dx0) = psi^dag psi(0, x0)
    h, t = 1e-5, 3.0
    for x0 in ([0.8, -0.3], [-1.5, 1.1], [0.2, 2.0]):
        x0 = np.array(x0)
        end = lambda p: integrate(osc_wf, 0.0, p, t, CFG).end_position
        jac = np.column_stack([(end(x0 + h * e) - end(x0 - h * e)) / (2 * h) for e in np.eye(2)])
        lhs = float(osc_wf.density(t, *end(x0))) * np.linalg.det(jac)
        assert lhs == pytest.approx(float(osc_wf.density(0.0, *x0)), rel=1e-4)


def _grid(values, good=None, box=(-5, 5, -5, 5)):
    n = values.shape[0]
    g = np.ones_like(values, dtype=bool) if good is None else good
    return DensityGrid(LatticeSpec(n, n, box), 0.0, values, g)


def test_standard_cg_basics():
    cg = coarse_grain(_grid(np.full((64, 64), 2.5)))
    assert cg.values.shape == (32, 32) and np.all(cg.values == 2.5)
    assert cg.centers_x[1] - cg.centers_x[0] == pytest.approx(0.3125)
    vals = np.zeros((64, 64))
    vals[10, 40] = 1.0
    assert np.count_nonzero(coarse_grain(_grid(vals)).values) == 1


def test_standard_cg_reference_cell_counts():
    good = np.ones((2048, 2048), dtype=bool)
    good[0, 0] = False
    cg = coarse_grain(_grid(np.ones((2048, 2048)), good))
    assert cg.good_fraction[0, 0] == pytest.approx(4095 / 4096)
    assert cg.good_fraction[1, 1] == 1.0
    assert cg.cell_weight == pytest.approx(0.3125 ** 2)


def test_bad_points_excluded_and_empty_cells_flagged():
    vals = np.ones((64, 64))
    good = np.ones_like(vals, dtype=bool)
    vals[0, 0], good[0, 0] = 1e9, False
    good[2:4, 2:4] = False
    cg = coarse_grain(_grid(vals, good))
    assert cg.values[0, 0] == 1.0
    assert np.isnan(cg.values[1, 1]) and cg.empty[1, 1] and cg.good_fraction[1, 1] == 0.0


def test_smooth_cg_layout():
    lat = LatticeSpec(256, 256)
    xs, ys = lat.axes()
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    cg = smooth_coarse_grain(DensityGrid(lat, 0.0, gx.copy(), np.ones_like(gx, dtype=bool)), SMOOTH)
    assert cg.values.shape == (121, 121)
    assert cg.centers_x[0] == pytest.approx(-5 + 0.3125) and cg.centers_x[-1] == pytest.approx(4.6875)
    # the cell mean of x equals the cell center: the cell covers [-5, -4.375]
    np.testing.assert_allclose(cg.values[:, 0], cg.centers_x, atol=1e-12)
    const = smooth_coarse_grain(_grid(np.full((256, 256), 0.7)), SMOOTH)
    np.testing.assert_allclose(const.values, 0.7, rtol=1e-12)
    with pytest.raises(ValueError):
        smooth_coarse_grain(_grid(np.ones((64, 64))), CoarseGrainSpec("smooth", steps=200))


def test_smooth_cg_tiling_equals_standard():
    rng = np.random.default_rng(3)
    vals = rng.random((128, 128))
    good = rng.random((128, 128)) > 0.1
    std = coarse_grain(_grid(vals, good))
    tiled = smooth_coarse_grain(_grid(vals, good), CoarseGrainSpec("smooth", cell_side=10 / 32, shift=10 / 32,
                                                                   steps=32))
    np.testing.assert_array_equal(std.values, tiled.values)
    np.testing.assert_array_equal(std.good_fraction, tiled.good_fraction)


def test_metrics():
    a = coarse_grain(_grid(np.full((64, 64), 0.01)))
    m = relaxation_metrics(a, a)
    assert m.l1 == 0.0 and m.h == 0.0
    left = np.zeros((64, 64))
    left[:32] = 0.02
    right = np.zeros((64, 64))
    right[32:] = 0.02
    m = relaxation_metrics(coarse_grain(_grid(left)), coarse_grain(_grid(right)))
    assert m.l1 == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValueError):
        relaxation_metrics(a, smooth_coarse_grain(_grid(np.ones((64, 64))), SMOOTH))


def test_equilibrium_cg_mass(osc_wf):
    cg = coarse_grain(equilibrium_grid(osc_wf, 0.0, LatticeSpec(128, 128)))
    assert np.nansum(cg.values) * cg.cell_weight == pytest.approx(1.0, abs=0.02)


def test_h_nonnegative_for_normalized_grids(osc_wf):
    lat = LatticeSpec(128, 128)
    eq = coarse_grain(equilibrium_grid(osc_wf, 0.0, lat))
    rho = coarse_grain(reconstruct_density(osc_wf, InitialDensity.rho(0), 0.0, 0.0, lat))
    assert relaxation_metrics(rho, eq).h > -1e-3


def test_grid_files_roundtrip(tmp_path):
    rng = np.random.default_rng(5)
    vals = rng.random((8, 8))
    good = rng.random((8, 8)) > 0.2
    vals[~good] = np.nan
    g = DensityGrid(LatticeSpec(8, 8, (-1, 1, -2, 2)), 12.5, vals, good)
    write_density_grid(tmp_path / "g.txt", g)
    text = (tmp_path / "g.txt").read_text()
    assert text.startswith("# t = 12.5\n# box = -1,1,-2,2\n# nx = 8\n# ny = 8\n")
    back = read_density_grid(tmp_path / "g.txt")
    np.testing.assert_array_equal(back.good, good)
    np.testing.assert_array_equal(back.values[good], vals[good])
    cg = coarse_grain(g, CoarseGrainSpec(cells_per_side=4))
    write_coarse_grid(tmp_path / "c.txt", cg)
    cb = read_coarse_grid(tmp_path / "c.txt")
    np.testing.assert_array_equal(cb.values, cg.values)
    np.testing.assert_array_equal(cb.centers_y, cg.centers_y)
    assert cb.cell_weight == cg.cell_weight


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), frac=st.floats(0.0, 1.0))
def test_cell_means_bounded(seed, frac):
    rng = np.random.default_rng(seed)
    vals = rng.random((32, 32))
    good = rng.random((32, 32)) < frac
    cg = coarse_grain(_grid(vals, good), CoarseGrainSpec(cells_per_side=8))
    ok = ~np.isnan(cg.values)
    assert np.all((cg.good_fraction >= 0) & (cg.good_fraction <= 1))
    if good.any():
        assert cg.values[ok].min() >= vals[good].min() - 1e-12
        assert cg.values[ok].max() <= vals[good].max() + 1e-12
    assert np.array_equal(ok, cg.good_fraction > 0)
