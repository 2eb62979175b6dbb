"""Non-equilibrium densities transported by backtracking, and coarse-graining.

The ratio rho / psi^dagger psi is constant along trajectories, so the density
at a lattice point (t, x) follows from its backtracked origin x0:

    rho(t, x) = psi^dagger psi(t, x) * rho(t0, x0) / psi^dagger psi(t0, x0)

Points whose trajectories fail certification are flagged bad and left out of
every cell average.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .dynamics import Failure, IntegratorConfig, backtrack_many
from .eigenmodes import WaveFunction

OFFSET_CENTERS = ((2.0, 0.0), (0.0, 2.0), (-2.0, 0.0), (0.0, -2.0))


@dataclass(frozen=True)
class InitialDensity:
    """cos^2 bump 2 pi cos^2(pi d / 2R) / (R^2 (pi^2 - 4)) on the disk d <= R."""

    kind: str = "rho0"
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 4.0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.kind not in ("rho0", "rho_offset"):
            raise ValueError(f"unknown initial density kind {self.kind!r}")

    @classmethod
    def rho(cls, j: int) -> "InitialDensity":
        """rho_0 (R0 = 4 at the origin) or rho_1..rho_4 (R = 2 at the offset centers)."""
        if j == 0:
            return cls("rho0", (0.0, 0.0), 4.0)
        return cls("rho_offset", OFFSET_CENTERS[j - 1], 2.0)

    def __call__(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        d = np.hypot(x - self.center[0], y - self.center[1])
        r = self.radius
        val = 2 * np.pi * np.cos(np.pi * d / (2 * r)) ** 2 / (r * r * (np.pi ** 2 - 4))
        return np.where(d <= r, val, 0.0)


@dataclass(frozen=True)
class LatticeSpec:
    nx: int
    ny: int
    box: tuple[float, float, float, float] = (-5.0, 5.0, -5.0, 5.0)

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("lattice dimensions must be positive")
        x0, x1, y0, y1 = self.box
        if not (x1 > x0 and y1 > y0):
            raise ValueError("empty lattice box")

    @property
    def spacing(self) -> tuple[float, float]:
        x0, x1, y0, y1 = self.box
        return (x1 - x0) / self.nx, (y1 - y0) / self.ny

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates x_k = xmin + dx/2 + k dx and likewise y_l."""
        x0, _, y0, _ = self.box
        dx, dy = self.spacing
        return x0 + dx / 2 + dx * np.arange(self.nx), y0 + dy / 2 + dy * np.arange(self.ny)

    def points(self) -> np.ndarray:
        """All points, shape (nx*ny, 2), index k*ny + l (l fastest)."""
        xs, ys = self.axes()
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])


def build_lattice(spec: LatticeSpec) -> np.ndarray:
    return spec.points()


@dataclass
class DensityGrid:
    """Per-point densities on a lattice; arrays are indexed [k, l] (x, y)."""

    spec: LatticeSpec
    t: float
    values: np.ndarray
    good: np.ndarray
    status: np.ndarray | None = None
    origins: np.ndarray | None = None
    kind: str = "density"

    @property
    def good_fraction(self) -> float:
        return float(self.good.mean())


@dataclass
class CoarseGrid:
    """Cell means over good points; cells without good points hold NaN."""

    centers_x: np.ndarray
    centers_y: np.ndarray
    values: np.ndarray
    good_fraction: np.ndarray
    cell_weight: float
    kind: str = "standard"
    t: float = 0.0
    box: tuple[float, float, float, float] = (-5.0, 5.0, -5.0, 5.0)
    label: str = ""

    @property
    def empty(self) -> np.ndarray:
        return np.isnan(self.values)


@dataclass(frozen=True)
class CoarseGrainSpec:
    kind: str = "standard"
    cells_per_side: int = 32
    cell_side: float = 10.0 / 16.0
    shift: float = 10.0 / 128.0
    steps: int = 121

    def __post_init__(self):
        if self.kind not in ("standard", "smooth"):
            raise ValueError(f"unknown coarse-graining kind {self.kind!r}")


def reconstruct_densities(wf: WaveFunction, initials, t0: float, t_final: float,
                          lattice: LatticeSpec, cfg: IntegratorConfig = IntegratorConfig(),
                          workers: int | None = None) -> list[DensityGrid]:
    """Several densities at t_final from one backtracking pass over the lattice.

    Each entry of ``initials`` maps (x, y) arrays to rho(t0); ``None`` stands
    for equilibrium, rho(t0) = psi^dagger psi(t0). At t_final == t0 no
    trajectory is integrated.
    """
    if t_final < t0:
        raise ValueError("t_final must not precede t0")
    pts = lattice.points()
    if t_final == t0:
        origins = pts.copy()
        status = np.zeros(len(pts), dtype=np.int64)
    else:
        origins, status, _, _ = backtrack_many(wf, t_final, pts, t0, cfg, workers)
        status = status.copy()
    rho_fin = wf.density(t_final, pts[:, 0], pts[:, 1])
    rho_ini = wf.density(t0, origins[:, 0], origins[:, 1])
    degenerate = (status == Failure.NONE) & (rho_ini < wf.density_floor)
    status[degenerate] = Failure.DEGENERATE_DENSITY
    good = status == Failure.NONE
    shape = (lattice.nx, lattice.ny)
    out = []
    for initial in initials:
        values = np.full(len(pts), np.nan)
        if initial is None:
            values[good] = rho_fin[good]
        else:
            r0 = np.asarray(initial(origins[good, 0], origins[good, 1]), float)
            values[good] = rho_fin[good] * r0 / rho_ini[good]
        out.append(DensityGrid(lattice, float(t_final), values.reshape(shape), good.reshape(shape),
                               status.reshape(shape), origins.reshape(shape + (2,)),
                               getattr(initial, "kind", "equilibrium" if initial is None else "density")))
    return out


def reconstruct_density(wf: WaveFunction, initial: Callable | InitialDensity | None,
                        t0: float, t_final: float, lattice: LatticeSpec,
                        cfg: IntegratorConfig = IntegratorConfig(),
                        workers: int | None = None) -> DensityGrid:
    """Density at t_final on the lattice via backtracking to t0 (``None``: equilibrium)."""
    return reconstruct_densities(wf, [initial], t0, t_final, lattice, cfg, workers)[0]


def equilibrium_grid(wf: WaveFunction, t: float, lattice: LatticeSpec) -> DensityGrid:
    """psi^dagger psi evaluated directly on the lattice (every point good)."""
    xs, ys = lattice.axes()
    vals = wf.density_grid(t, xs, ys).T.copy()
    return DensityGrid(lattice, float(t), vals, np.ones_like(vals, dtype=bool), kind="equilibrium")


def _index_ranges(lo, side, axis0, spacing, n):
    # lattice indices i with axis0 + (i + 1/2) spacing in [lo, lo + side)
    a = np.ceil((lo - axis0) / spacing - 0.5).astype(np.int64)
    b = np.ceil((lo + side - axis0) / spacing - 0.5).astype(np.int64)
    return np.clip(a, 0, n), np.clip(b, 0, n)


def _cell_means(grid: DensityGrid, lows_x, lows_y, side_x, side_y):
    spec = grid.spec
    x0, _, y0, _ = spec.box
    dx, dy = spec.spacing
    ax, bx = _index_ranges(np.asarray(lows_x), side_x, x0, dx, spec.nx)
    ay, by = _index_ranges(np.asarray(lows_y), side_y, y0, dy, spec.ny)
    vals = np.where(grid.good, grid.values, 0.0)
    cnt = grid.good.astype(np.int64)
    # summed-area tables with a zero border
    sv = np.zeros((spec.nx + 1, spec.ny + 1))
    sv[1:, 1:] = vals.cumsum(0).cumsum(1)
    sc = np.zeros((spec.nx + 1, spec.ny + 1), dtype=np.int64)
    sc[1:, 1:] = cnt.cumsum(0).cumsum(1)

    def box_sum(s):
        return (s[bx[:, None], by[None, :]] - s[ax[:, None], by[None, :]]
                - s[bx[:, None], ay[None, :]] + s[ax[:, None], ay[None, :]])

    total = box_sum(sv)
    good = box_sum(sc)
    npts = (bx - ax)[:, None] * (by - ay)[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        means = np.where(good > 0, total / np.maximum(good, 1), np.nan)
        frac = np.where(npts > 0, good / np.maximum(npts, 1), 0.0)
    return means, frac


def coarse_grain(grid: DensityGrid, cg: CoarseGrainSpec = CoarseGrainSpec()) -> CoarseGrid:
    """Average good-point densities over non-overlapping cells tiling the box."""
    if cg.kind == "smooth":
        return smooth_coarse_grain(grid, cg)
    x0, x1, y0, y1 = grid.spec.box
    n = cg.cells_per_side
    sx, sy = (x1 - x0) / n, (y1 - y0) / n
    lx = x0 + sx * np.arange(n)
    ly = y0 + sy * np.arange(n)
    means, frac = _cell_means(grid, lx, ly, sx, sy)
    return CoarseGrid(lx + sx / 2, ly + sy / 2, means, frac, sx * sy, "standard", grid.t,
                      grid.spec.box, grid.kind)


def smooth_coarse_grain(grid: DensityGrid, cg: CoarseGrainSpec = CoarseGrainSpec(kind="smooth")) -> CoarseGrid:
    """Average over overlapping square cells translated from the lower-left corner.

    Cell (n, m) covers [xmin + n shift, xmin + n shift + side) and likewise in y.
    The cell weight is shift^2, so weighted sums approximate area integrals.
    """
    x0, x1, y0, y1 = grid.spec.box
    side = cg.cell_side
    reach = side + (cg.steps - 1) * cg.shift
    if reach > min(x1 - x0, y1 - y0) + 1e-12:
        raise ValueError("smooth coarse-graining cells extend beyond the box")
    lx = x0 + cg.shift * np.arange(cg.steps)
    ly = y0 + cg.shift * np.arange(cg.steps)
    means, frac = _cell_means(grid, lx, ly, side, side)
    return CoarseGrid(lx + side / 2, ly + side / 2, means, frac, cg.shift ** 2, "smooth", grid.t,
                      grid.spec.box, grid.kind)


@dataclass(frozen=True)
class RelaxationMetrics:
    l1: float
    h: float


def relaxation_metrics(rho_cg: CoarseGrid, eq_cg: CoarseGrid) -> RelaxationMetrics:
    """Weighted L1 distance and coarse-grained H-function between two grids.

    Cells empty in either grid are skipped; the H sum uses only cells where
    both densities are positive.
    """
    if rho_cg.values.shape != eq_cg.values.shape:
        raise ValueError("coarse grids have different layouts")
    a, b = rho_cg.values, eq_cg.values
    ok = ~(np.isnan(a) | np.isnan(b))
    w = rho_cg.cell_weight
    l1 = float(np.sum(np.abs(a[ok] - b[ok])) * w)
    pos = ok & (a > 0) & (b > 0)
    h = float(np.sum(a[pos] * np.log(a[pos] / b[pos])) * w)
    return RelaxationMetrics(l1, h)


def cell_good_stats(cg: CoarseGrid) -> tuple[float, float]:
    """Mean and worst per-cell good-point fraction."""
    return float(cg.good_fraction.mean()), float(cg.good_fraction.min())


# ------------------------------------------------------------------ file io --

def _write_header(fh, header):
    for key, val in header.items():
        fh.write(f"# {key} = {val}\n")


def _read_header(path):
    header = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, val = line[1:].partition("=")
            header[key.strip()] = val.strip()
    return header


def write_density_grid(path, grid: DensityGrid) -> None:
    """Text file: '# key = value' header, then 'x y value good' per point, l fastest."""
    pts = grid.spec.points()
    vals = grid.values.ravel()
    good = grid.good.ravel()
    with open(path, "w", encoding="utf-8") as fh:
        _write_header(fh, {"t": repr(grid.t), "box": ",".join(repr(b) for b in grid.spec.box),
                           "nx": grid.spec.nx, "ny": grid.spec.ny, "kind": grid.kind})
        for (x, y), v, g in zip(pts, vals, good):
            fh.write(f"{x:.17g} {y:.17g} {v:.17g} {int(g)}\n")


def read_density_grid(path) -> DensityGrid:
    h = _read_header(path)
    spec = LatticeSpec(int(h["nx"]), int(h["ny"]), tuple(float(v) for v in h["box"].split(",")))
    data = np.loadtxt(path, comments="#", ndmin=2)
    shape = (spec.nx, spec.ny)
    return DensityGrid(spec, float(h["t"]), data[:, 2].reshape(shape),
                       data[:, 3].astype(bool).reshape(shape), kind=h.get("kind", "density"))


def write_coarse_grid(path, cg: CoarseGrid) -> None:
    """Text file: header, then 'x y value good_fraction' per cell, y fastest."""
    with open(path, "w", encoding="utf-8") as fh:
        _write_header(fh, {"t": repr(cg.t), "box": ",".join(repr(b) for b in cg.box),
                           "nx": len(cg.centers_x), "ny": len(cg.centers_y),
                           "kind": cg.kind, "cell_weight": repr(cg.cell_weight),
                           "label": cg.label})
        for i, x in enumerate(cg.centers_x):
            for j, y in enumerate(cg.centers_y):
                fh.write(f"{x:.17g} {y:.17g} {cg.values[i, j]:.17g} {cg.good_fraction[i, j]:.17g}\n")


def read_coarse_grid(path) -> CoarseGrid:
    h = _read_header(path)
    nx, ny = int(h["nx"]), int(h["ny"])
    data = np.loadtxt(path, comments="#", ndmin=2)
    cx = data[::ny, 0].copy()
    cy = data[:ny, 1].copy()
    return CoarseGrid(cx, cy, data[:, 2].reshape(nx, ny), data[:, 3].reshape(nx, ny),
                      float(h["cell_weight"]), h["kind"], float(h["t"]),
                      tuple(float(v) for v in h["box"].split(",")), h.get("label", ""))
