"""Experiment orchestration: build the guiding spinor, run, write text outputs.

Every run directory holds ``manifest.json`` with the config echo, library
versions, timings and a SHA-256 checksum per output file. Relaxation runs
record finished checkpoints there, so an interrupted run resumes where it
stopped.
"""
from __future__ import annotations

import hashlib
import json
import math
import platform
import time
from dataclasses import dataclass, field
from pathlib import Path

import numba
import numpy as np

from . import __version__
from .config import ExperimentConfig
from .density import (CoarseGrainSpec, InitialDensity, coarse_grain, equilibrium_grid,
                      reconstruct_densities, relaxation_metrics, write_coarse_grid,
                      write_density_grid, read_coarse_grid)
from .dynamics import Failure, backtrack_many, integrate, write_trajectory
from .eigenmodes import (BOX_TABLE, FREE_MODES_2D, FREE_MODES_3D, OSCILLATOR_PHASES, BoxMode,
                         OscillatorMode, PlaneWave2D, PlaneWave3D, WaveFunction,
                         solve_box_beta_prime, solve_box_eigenvalues, superpose)

MANIFEST = "manifest.json"


@dataclass
class RunResult:
    status: int
    out_dir: Path
    files: list[str] = field(default_factory=list)
    skipped: list[float] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _tag(t: float) -> str:
    return f"t{t:g}"


class _Manifest:
    def __init__(self, out_dir: Path, cfg: ExperimentConfig):
        self.path = out_dir / MANIFEST
        self.out_dir = out_dir
        self.data = None
        if self.path.exists():
            old = json.loads(self.path.read_text(encoding="utf-8"))
            if old.get("numeric_key") == cfg.numeric_key():
                self.data = old
        if self.data is None:
            self.data = {"experiment": cfg.experiment, "numeric_key": cfg.numeric_key(),
                         "files": {}, "checkpoints_done": [], "timings": {}}
        self.data["config"] = cfg.source
        self.data["workers"] = cfg.workers
        self.data["versions"] = {"diracbohm": __version__, "python": platform.python_version(),
                                 "numpy": np.__version__, "numba": numba.__version__}

    def checkpoint_complete(self, t: float, names: list[str]) -> bool:
        if t not in self.data["checkpoints_done"]:
            return False
        files = self.data["files"]
        for name in names:
            p = self.out_dir / name
            if name not in files or not p.exists() or sha256_file(p) != files[name]:
                return False
        return True

    def add(self, name: str) -> None:
        self.data["files"][name] = sha256_file(self.out_dir / name)

    def save(self) -> None:
        tmp = self.path.with_suffix(".tmp")
        tmp.write_text(json.dumps(self.data, indent=1, sort_keys=True), encoding="utf-8")
        tmp.replace(self.path)


# ------------------------------------------------------------ wavefunctions --

def build_wavefunction(cfg: ExperimentConfig, extra_mode=None) -> WaveFunction:
    """Guiding spinor of a relaxation or probe config (tabulated modes if none listed)."""
    if cfg.experiment == "relax_oscillator":
        hint = (-10.0, 10.0, -10.0, 10.0)
        rows = [md.values for md in cfg.modes] or [(n, k, ph) for (n, k), ph in OSCILLATOR_PHASES.items()]
        modes = [OscillatorMode(int(n), k, cfg.m, cfg.omega) for n, k, _ in rows]
        return superpose(modes, [r[2] for r in rows], None, hint, cfg.quadrature_points)
    count = 3 if cfg.experiment == "confinement_probe" else 6
    rows = [md.values for md in cfg.modes] or [(k, e, ph) for k, e, _, ph in BOX_TABLE[:count]]
    if extra_mode is not None:
        rows = list(rows) + [extra_mode]
    modes = [BoxMode.solve(k, cfg.m, cfg.v0, cfg.r_prime, energy_hint=e) for k, e, _ in rows]
    reach = max(15.0, 3.0 * cfg.r_prime)
    return superpose(modes, [r[2] for r in rows], None, (-reach, reach, -reach, reach),
                     cfg.quadrature_points)


def _plane_spinor(cfg: ExperimentConfig, mass: float) -> WaveFunction:
    if cfg.experiment == "trajectories3d":
        rows = [(md.values[:3], md.values[3], md.helicity) for md in cfg.modes] or \
            [(p, ph, "R") for p, ph in FREE_MODES_3D]
        modes = [PlaneWave3D(tuple(p), mass, h) for p, _, h in rows]
    else:
        rows = [(md.values[:2], md.values[2], "R") for md in cfg.modes] or \
            [(p, ph, "R") for p, ph in FREE_MODES_2D]
        modes = [PlaneWave2D(tuple(p), mass) for p, _, _ in rows]
    return superpose(modes, [r[1] for r in rows])


# --------------------------------------------------------------- runners --

def run_experiment(cfg: ExperimentConfig, out_dir=None, log=None) -> RunResult:
    """Run ``cfg`` and write its outputs under ``out_dir`` (default ``cfg.output``)."""
    out = Path(out_dir if out_dir is not None else cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    log = log or (lambda msg: None)
    man = _Manifest(out, cfg)
    runner = {"eigensolve": _run_eigensolve, "trajectories2d": _run_trajectories,
              "trajectories3d": _run_trajectories, "relax_oscillator": _run_relax,
              "relax_box": _run_relax, "confinement_probe": _run_probe}[cfg.experiment]
    t_start = time.perf_counter()
    result = runner(cfg, out, man, log)
    man.data["timings"]["total"] = time.perf_counter() - t_start
    man.save()
    result.files = sorted(man.data["files"])
    return result


def _run_eigensolve(cfg, out, man, log):
    rows = []
    for k in cfg.eigen_k:
        for i, e in enumerate(solve_box_eigenvalues(k, cfg.m, cfg.v0, cfg.r_prime, cfg.scan_resolution)):
            rows.append((k, i, e, solve_box_beta_prime(e, k, cfg.m, cfg.v0, cfg.r_prime)))
    name = "eigenvalues.txt"
    with open(out / name, "w", encoding="utf-8") as fh:
        fh.write(f"# m = {cfg.m!r}\n# v0 = {cfg.v0!r}\n# r_prime = {cfg.r_prime!r}\n")
        fh.write("# columns = k index energy beta_prime\n")
        for k, i, e, bp in rows:
            fh.write(f"{k:g} {i} {e:.17g} {bp:.17g}\n")
    man.add(name)
    log(f"{len(rows)} bound states written to {out / name}")
    return RunResult(0, out, summary={"states": rows})


def read_eigenvalues(path) -> list[tuple[float, int, float, float]]:
    data = np.loadtxt(path, comments="#", ndmin=2)
    return [(float(r[0]), int(r[1]), float(r[2]), float(r[3])) for r in data]


def _run_trajectories(cfg, out, man, log):
    summary = {}
    lines = []
    for mass in cfg.masses:
        wf = _plane_spinor(cfg, mass)
        t1 = time.perf_counter()
        res = integrate(wf, 0.0, cfg.start, cfg.t_end, cfg.integrator, record=True)
        path = res.path_sample
        if len(path) > cfg.max_samples:
            keep = np.unique(np.linspace(0, len(path) - 1, cfg.max_samples).round().astype(int))
            path = [path[i] for i in keep]
        name = f"traj_m{mass:g}.txt"
        write_trajectory(out / name, path, {"mass": repr(mass), "status": res.failure_reason.name.lower(),
                                            "steps": res.steps_taken})
        man.add(name)
        man.data["timings"][name] = time.perf_counter() - t1
        summary[mass] = res
        lines.append(f"{mass:g} {res.failure_reason.name.lower()} {res.steps_taken} "
                     + " ".join(f"{v:.17g}" for v in res.end_position))
        log(f"mass {mass:g}: {res.failure_reason.name.lower()} after {res.steps_taken} steps")
    with open(out / "trajectories.txt", "w", encoding="utf-8") as fh:
        fh.write("# columns = mass status steps end_position\n")
        fh.write("\n".join(lines) + "\n")
    man.add("trajectories.txt")
    bad = any(not r.good for r in summary.values())
    return RunResult(1 if bad else 0, out, summary=summary)


def density_label(j: int) -> str:
    return f"rho{j}"


def _run_relax(cfg, out, man, log):
    wf = build_wavefunction(cfg)
    lat = cfg.lattice
    std = CoarseGrainSpec("standard", cfg.coarse.cells_per_side)
    initials = [InitialDensity.rho(j) for j in cfg.densities]
    labels = [density_label(j) for j in cfg.densities]
    skipped = []
    for t in cfg.checkpoints:
        tag = _tag(t)
        names = [f"eq_{tag}.cg.txt", f"metrics_{tag}.txt"] + [f"{lb}_{tag}.cg.txt" for lb in labels]
        if cfg.save_grids:
            names += [f"{lb}_{tag}.grid.txt" for lb in labels]
        if man.checkpoint_complete(t, names):
            log(f"checkpoint {t:g} already complete, skipped")
            skipped.append(t)
            continue
        t1 = time.perf_counter()
        eq = equilibrium_grid(wf, t, lat)
        eq_cg = coarse_grain(eq, cfg.coarse)
        eq_cg.label = "equilibrium"
        write_coarse_grid(out / names[0], eq_cg)
        grids = reconstruct_densities(wf, initials, cfg.t0, t, lat, cfg.integrator, cfg.workers)
        status = grids[0].status
        mrows = []
        for lb, g in zip(labels, grids):
            g.kind = lb
            cg = coarse_grain(g, cfg.coarse)
            cg.label = lb
            write_coarse_grid(out / f"{lb}_{tag}.cg.txt", cg)
            if cfg.save_grids:
                write_density_grid(out / f"{lb}_{tag}.grid.txt", g)
            met = relaxation_metrics(cg, eq_cg)
            mrows.append((lb, met))
        cells = coarse_grain(grids[0], std).good_fraction
        with open(out / names[1], "w", encoding="utf-8") as fh:
            fh.write(f"# t = {t!r}\n# coarse_grain = {cfg.coarse.kind}\n")
            fh.write(f"# good_fraction = {float(np.mean(status == Failure.NONE)):.17g}\n")
            fh.write(f"# cell_good_mean = {float(cells.mean()):.17g}\n")
            fh.write(f"# cell_good_worst = {float(cells.min()):.17g}\n")
            for f in Failure:
                fh.write(f"# count_{f.name.lower()} = {int(np.sum(status == f))}\n")
            fh.write("# columns = density l1 h\n")
            for lb, met in mrows:
                fh.write(f"{lb} {met.l1:.17g} {met.h:.17g}\n")
        for name in names:
            man.add(name)
        man.data["checkpoints_done"] = sorted(set(man.data["checkpoints_done"]) | {t})
        man.data["timings"][tag] = time.perf_counter() - t1
        man.save()
        log(f"checkpoint {t:g}: " + ", ".join(f"{lb} l1={m.l1:.4f}" for lb, m in mrows)
            + f", good {float(cells.mean()):.4f} (worst cell {float(cells.min()):.4f})")
    return RunResult(0, out, skipped=skipped)


def read_metrics(path) -> tuple[dict, dict]:
    """Header values and ``{density: (l1, h)}`` from a metrics file."""
    header, rows = {}, {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                header[key.strip()] = val.strip()
            elif line.strip():
                lb, l1, h = line.split()
                rows[lb] = (float(l1), float(h))
    return header, rows


def probe_points(n: int, radius: float, seed: int) -> np.ndarray:
    """``n`` uniform points in the disk of given radius."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(n))
    th = 2 * np.pi * rng.random(n)
    return np.column_stack([r * np.cos(th), r * np.sin(th)])


def _probe_once(cfg, out, man, wf, name, log):
    pts = probe_points(cfg.probe_points, cfg.probe_radius, cfg.seed)
    ends, status, steps, _ = backtrack_many(wf, cfg.probe_t_final, pts, cfg.t0, cfg.integrator, cfg.workers)
    r0 = np.hypot(ends[:, 0], ends[:, 1])
    good = status == Failure.NONE
    with open(out / f"{name}.txt", "w", encoding="utf-8") as fh:
        fh.write(f"# t_final = {cfg.probe_t_final!r}\n# t0 = {cfg.t0!r}\n")
        fh.write(f"# good = {int(good.sum())}\n")
        fh.write(f"# max_radius = {float(r0[good].max()) if good.any() else math.nan:.17g}\n")
        fh.write(f"# inside_core = {int(np.sum(good & (r0 <= cfg.core_radius)))}\n")
        fh.write("# columns = x y x0 y0 r0 status steps\n")
        for p, e, r, s, n in zip(pts, ends, r0, status, steps):
            fh.write(f"{p[0]:.17g} {p[1]:.17g} {e[0]:.17g} {e[1]:.17g} {r:.17g} "
                     f"{Failure(int(s)).name.lower()} {int(n)}\n")
    man.add(f"{name}.txt")
    for i in range(min(cfg.record, len(pts))):
        res = integrate(wf, cfg.probe_t_final, pts[i], cfg.t0, cfg.integrator, record=True)
        path = res.path_sample
        if len(path) > cfg.max_samples:
            keep = np.unique(np.linspace(0, len(path) - 1, cfg.max_samples).round().astype(int))
            path = [path[j] for j in keep]
        pname = f"{name}_path{i}.txt"
        write_trajectory(out / pname, path, {"status": res.failure_reason.name.lower()})
        man.add(pname)
    log(f"{name}: {int(good.sum())}/{len(pts)} good, max |x0| = "
        f"{float(r0[good].max()) if good.any() else math.nan:.4f}")
    return {"start": pts, "ends": ends, "status": status, "r0": r0, "good": good}


def _run_probe(cfg, out, man, log):
    summary = {"probe": _probe_once(cfg, out, man, build_wavefunction(cfg), "probe", log)}
    if cfg.control_mode is not None:
        k, e, ph = cfg.control_mode
        if not math.isfinite(e):
            e = next(row[1] for row in BOX_TABLE if row[0] == k) if any(row[0] == k for row in BOX_TABLE) \
                else solve_box_eigenvalues(k, cfg.m, cfg.v0, cfg.r_prime)[0]
        wf = build_wavefunction(cfg, extra_mode=(k, e, ph))
        summary["control"] = _probe_once(cfg, out, man, wf, "control", log)
    return RunResult(0, out, summary=summary)


# ----------------------------------------------------------------- export --

_FIGURES = {"relax_oscillator": {0: "fig4", 1: "fig5"}, "relax_box": {}}


def _write_matrix(path, cg) -> None:
    # rows follow y (up), columns follow x (right)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# t = {cg.t!r}\n# rows = y {cg.centers_y[0]!r}..{cg.centers_y[-1]!r}\n")
        fh.write(f"# columns = x {cg.centers_x[0]!r}..{cg.centers_x[-1]!r}\n")
        for row in cg.values.T:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def read_matrix(path) -> np.ndarray:
    return np.loadtxt(path, comments="#", ndmin=2)


def export_figures_data(run_dir, out_dir=None) -> list[Path]:
    """Re-shape a run's outputs into per-figure text matrices and polylines."""
    run = Path(run_dir)
    mpath = run / MANIFEST
    if not mpath.exists():
        raise FileNotFoundError(f"no run manifest in {run}")
    man = json.loads(mpath.read_text(encoding="utf-8"))
    dest = Path(out_dir) if out_dir is not None else run / "figures"
    dest.mkdir(parents=True, exist_ok=True)
    exp = man["experiment"]
    files = man["files"]
    written = []
    if exp in ("relax_oscillator", "relax_box"):
        done = sorted(man["checkpoints_done"])
        final = done[-1] if done else None
        rhos = sorted({n.split("_")[0] for n in files if n.startswith("rho") and n.endswith(".cg.txt")})
        for t in done:
            tag = _tag(t)
            eq = read_coarse_grid(run / f"eq_{tag}.cg.txt")
            for lb in rhos:
                j = int(lb[3:])
                fig = _FIGURES[exp].get(j, f"osc_{lb}") if exp == "relax_oscillator" else "fig6"
                rho = read_coarse_grid(run / f"{lb}_{tag}.cg.txt")
                # "b" panels are the final-time surface views
                letters = "ab" if t == final and (exp == "relax_oscillator" or j == 0) else "a"
                for letter in letters:
                    for cg, what in ((eq, "eq"), (rho, lb)):
                        p = dest / f"{fig}{letter}_{what}_{tag}.mat.txt"
                        if p not in written:
                            _write_matrix(p, cg)
                            written.append(p)
    elif exp in ("trajectories2d", "trajectories3d"):
        fig = "fig1" if exp == "trajectories3d" else "fig1b"
        for name in sorted(files):
            if name.startswith("traj_m"):
                p = dest / f"{fig}_{name[5:-4]}.path.txt"
                p.write_bytes((run / name).read_bytes())
                written.append(p)
    elif exp == "confinement_probe":
        for name in sorted(files):
            if "_path" in name:
                p = dest / f"fig7_{name[:-4]}.path.txt"
                p.write_bytes((run / name).read_bytes())
                written.append(p)
    elif exp == "eigensolve":
        p = dest / "box_eigenvalues.txt"
        p.write_bytes((run / "eigenvalues.txt").read_bytes())
        written.append(p)
    return written
