"""Experiment configuration: a small line-oriented ``key = value`` format.

Example::

    experiment = relax_oscillator
    output = runs/osc

    [physics]
    m = 1
    omega = 1

    [modes]
    # n, k, phase
    mode = 1, 1/2, 4.869
    mode = 1, -1/2, 1.049

    [time]
    checkpoints = 0, 25, 50, 75, 100

Comments start with ``#``. Lists are comma separated. ``mode`` may repeat;
every other key may appear once. Problems are collected and reported
together, each tagged with its line number.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .density import CoarseGrainSpec, LatticeSpec
from .dynamics import IntegratorConfig

EXPERIMENTS = ("trajectories3d", "trajectories2d", "eigensolve", "relax_oscillator",
               "relax_box", "confinement_probe")


class ConfigError(ValueError):
    """Raised with every problem found; ``errors`` keeps them separately."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


def _number(s: str) -> float:
    return float(Fraction(s.strip())) if "/" in s else float(s)


def _integer(s: str) -> int:
    v = _number(s)
    if v != int(v):
        raise ValueError(f"{s!r} is not an integer")
    return int(v)


def _boolean(s: str) -> bool:
    low = s.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"{s!r} is not a boolean")


def _half_int(s: str) -> float:
    v = _number(s)
    if (v - 0.5) != round(v - 0.5):
        raise ValueError(f"{s!r} is not a half-integer")
    return v


def _list(conv):
    def parse(s):
        items = [p for p in s.split(",")]
        if any(not p.strip() for p in items):
            raise ValueError("empty list item")
        return tuple(conv(p) for p in items)
    return parse


_SCHEMA = {
    "": {"experiment": str, "output": str, "workers": _integer, "seed": _integer},
    "physics": {"m": _number, "omega": _number, "v0": _number, "r_prime": _number,
                "quadrature_points": _integer},
    "lattice": {"n": _integer, "nx": _integer, "ny": _integer, "box": _list(_number),
                "save_grids": _boolean},
    "coarse_grain": {"kind": str, "cells_per_side": _integer, "cell_side": _number,
                     "shift": _number, "steps": _integer},
    "time": {"t0": _number, "checkpoints": _list(_number)},
    "integrator": {"abs_tolerance": _number, "min_step": _number, "max_step": _number,
                   "max_iterations": _integer, "backtrack_precision": _number,
                   "roundtrip_check": _boolean},
    "densities": {"rho": _list(_integer)},
    "trajectories": {"masses": _list(_number), "start": _list(_number), "t_end": _number,
                     "max_samples": _integer},
    "probe": {"points": _integer, "radius": _number, "t_final": _number, "core_radius": _number,
              "control_k": _half_int, "control_energy": _number, "control_phase": _number,
              "record": _integer},
    "eigensolve": {"k": _list(_half_int), "scan_resolution": _integer},
    "modes": {},
}


@dataclass(frozen=True)
class ModeSpec:
    """One ``mode = ...`` line: numbers in family order plus optional helicity."""

    values: tuple[float, ...]
    helicity: str = "R"
    line: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    output: str = "run"
    workers: int = 1
    seed: int = 0
    m: float = 1.0
    omega: float = 1.0
    v0: float = 1.0
    r_prime: float = 5.0
    quadrature_points: int = 2048
    modes: tuple[ModeSpec, ...] = ()
    lattice: LatticeSpec = LatticeSpec(256, 256)
    save_grids: bool = False
    coarse: CoarseGrainSpec = CoarseGrainSpec(kind="smooth")
    t0: float = 0.0
    checkpoints: tuple[float, ...] = (0.0, 50.0, 100.0)
    integrator: IntegratorConfig = IntegratorConfig()
    densities: tuple[int, ...] = (0,)
    masses: tuple[float, ...] = (3.0, 6.0, 9.0)
    start: tuple[float, ...] = (0.0, 0.0, 0.0)
    t_end: float = 200.0
    max_samples: int = 4001
    probe_points: int = 100
    probe_radius: float = 0.5
    probe_t_final: float = 1000.0
    core_radius: float = 2.0
    control_mode: tuple[float, float, float] | None = None
    record: int = 10
    eigen_k: tuple[float, ...] = (0.5, 1.5, 2.5, -0.5, -1.5, -2.5)
    scan_resolution: int = 4000
    source: str = field(default="", compare=False, repr=False)

    def with_overrides(self, lattice: int | None = None, precision: float | None = None,
                       workers: int | None = None, output: str | None = None) -> "ExperimentConfig":
        """Command-line overrides; the result is validated like a parsed file."""
        cfg = self
        if lattice is not None:
            if lattice < 1:
                raise ConfigError(["--lattice must be a positive integer"])
            cfg = replace(cfg, lattice=LatticeSpec(lattice, lattice, cfg.lattice.box))
        if precision is not None:
            if precision <= 0:
                raise ConfigError(["--precision must be positive"])
            cfg = replace(cfg, integrator=replace(cfg.integrator, backtrack_precision=precision))
        if workers is not None:
            if workers < 1:
                raise ConfigError(["--workers must be >= 1"])
            cfg = replace(cfg, workers=workers)
        if output is not None:
            cfg = replace(cfg, output=output)
        return cfg

    def numeric_key(self) -> str:
        """Digest of everything that affects numeric output (not workers or paths)."""
        parts = [self.experiment, self.m, self.omega, self.v0, self.r_prime, self.quadrature_points,
                 self.modes, self.lattice, self.coarse, self.t0, self.checkpoints, self.integrator,
                 self.densities, self.masses, self.start, self.t_end, self.max_samples,
                 self.probe_points, self.probe_radius, self.probe_t_final, self.core_radius,
                 self.control_mode, self.record, self.eigen_k, self.scan_resolution, self.seed]
        return hashlib.sha256(repr(parts).encode()).hexdigest()[:16]


_DEFAULT_BOX = {"relax_box": (-3.0, 3.0, -3.0, 3.0)}
_DEFAULT_N = {"relax_box": 1024}
_MODE_WIDTH = {"relax_oscillator": (3,), "relax_box": (3,), "confinement_probe": (3,),
               "trajectories2d": (3,), "trajectories3d": (4,), "eigensolve": (2, 3)}
_MODE_HELP = {"relax_oscillator": "n, k, phase", "relax_box": "k, energy, phase",
              "confinement_probe": "k, energy, phase", "trajectories2d": "px, py, phase",
              "trajectories3d": "px, py, pz, phase[, R|L]", "eigensolve": "k, energy[, phase]"}


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate; raise :class:`ConfigError` listing every problem."""
    errors: list[str] = []
    values: dict[tuple[str, str], tuple[object, int]] = {}
    raw_modes: list[tuple[str, int]] = []
    section = ""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                errors.append(f"line {lineno}: malformed section header {line!r}")
                continue
            section = line[1:-1].strip()
            if section not in _SCHEMA:
                errors.append(f"line {lineno}: unknown section [{section}]")
            continue
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not eq or not key:
            errors.append(f"line {lineno}: expected 'key = value'")
            continue
        if section not in _SCHEMA:
            continue
        if section == "modes":
            if key != "mode":
                errors.append(f"line {lineno}: unknown key {key!r} in [modes]")
            else:
                raw_modes.append((val, lineno))
            continue
        conv = _SCHEMA[section].get(key)
        where = f"[{section}]" if section else "top level"
        if conv is None:
            errors.append(f"line {lineno}: unknown key {key!r} at {where}")
            continue
        if (section, key) in values:
            errors.append(f"line {lineno}: duplicate key {key!r} (first at line {values[section, key][1]})")
            continue
        try:
            values[section, key] = (conv(val), lineno)
        except (ValueError, ZeroDivisionError) as exc:
            errors.append(f"line {lineno}: bad value for {key!r}: {exc}")

    def get(section, key, default=None):
        return values[section, key][0] if (section, key) in values else default

    def line_of(section, key):
        return values[section, key][1] if (section, key) in values else 0

    exp = get("", "experiment")
    if exp is None:
        errors.append("missing experiment")
        raise ConfigError(errors)
    if exp not in EXPERIMENTS:
        errors.append(f"line {line_of('', 'experiment')}: unknown experiment {exp!r}; "
                      f"expected one of {', '.join(EXPERIMENTS)}")
        raise ConfigError(errors)

    modes = []
    widths = _MODE_WIDTH[exp]
    for val, lineno in raw_modes:
        items = [p.strip() for p in val.split(",")]
        hel = "R"
        if exp == "trajectories3d" and len(items) == 5:
            hel = items.pop().upper()
            if hel not in ("R", "L"):
                errors.append(f"line {lineno}: helicity must be R or L")
                continue
        if len(items) not in widths:
            errors.append(f"line {lineno}: mode needs {_MODE_HELP[exp]}")
            continue
        try:
            nums = tuple(_number(p) for p in items)
        except (ValueError, ZeroDivisionError) as exc:
            errors.append(f"line {lineno}: bad mode value: {exc}")
            continue
        modes.append(ModeSpec(nums, hel, lineno))

    cfg_kw = {"experiment": exp, "source": text}
    for key in ("output", "workers", "seed"):
        if ("", key) in values:
            cfg_kw[key] = get("", key)
    for key in ("m", "omega", "v0", "r_prime", "quadrature_points"):
        if ("physics", key) in values:
            cfg_kw[key] = get("physics", key)
    cfg_kw["modes"] = tuple(modes)

    box = get("lattice", "box", _DEFAULT_BOX.get(exp, (-5.0, 5.0, -5.0, 5.0)))
    n = get("lattice", "n", _DEFAULT_N.get(exp, 256))
    nx, ny = get("lattice", "nx", n), get("lattice", "ny", n)
    if len(box) != 4:
        errors.append(f"line {line_of('lattice', 'box')}: box needs xmin, xmax, ymin, ymax")
    else:
        try:
            cfg_kw["lattice"] = LatticeSpec(nx, ny, tuple(box))
        except ValueError as exc:
            errors.append(f"line {line_of('lattice', 'n') or line_of('lattice', 'box')}: {exc}")
    cfg_kw["save_grids"] = get("lattice", "save_grids", False)

    width = (box[1] - box[0]) if len(box) == 4 else 10.0
    try:
        coarse = CoarseGrainSpec(kind=get("coarse_grain", "kind", "smooth"),
                                 cells_per_side=get("coarse_grain", "cells_per_side", 32),
                                 cell_side=get("coarse_grain", "cell_side", width / 16),
                                 shift=get("coarse_grain", "shift", width / 128),
                                 steps=get("coarse_grain", "steps", 121))
        if coarse.kind == "smooth" and len(box) == 4:
            reach = coarse.cell_side + (coarse.steps - 1) * coarse.shift
            if reach > min(box[1] - box[0], box[3] - box[2]) + 1e-12:
                errors.append(f"line {line_of('coarse_grain', 'steps') or line_of('coarse_grain', 'cell_side')}: "
                              "smooth coarse-graining cells extend beyond the box")
        if coarse.cells_per_side < 1:
            errors.append(f"line {line_of('coarse_grain', 'cells_per_side')}: cells_per_side must be >= 1")
        cfg_kw["coarse"] = coarse
    except ValueError as exc:
        errors.append(f"line {line_of('coarse_grain', 'kind')}: {exc}")

    t0 = get("time", "t0", 0.0)
    cps = get("time", "checkpoints", (0.0, 50.0, 100.0))
    if any(b <= a for a, b in zip(cps, cps[1:])):
        errors.append(f"line {line_of('time', 'checkpoints')}: non-increasing checkpoints")
    if cps and cps[0] < t0:
        errors.append(f"line {line_of('time', 'checkpoints')}: checkpoints precede t0")
    cfg_kw["t0"], cfg_kw["checkpoints"] = t0, tuple(cps)

    ikw = {k: get("integrator", k) for k in _SCHEMA["integrator"] if ("integrator", k) in values}
    bad = [k for k, v in ikw.items() if k != "roundtrip_check" and v <= 0]
    for k in bad:
        errors.append(f"line {line_of('integrator', k)}: {k} must be positive")
    if not bad:
        try:
            cfg_kw["integrator"] = IntegratorConfig(**ikw)
        except ValueError as exc:
            errors.append(f"line {max(line_of('integrator', k) for k in ikw) if ikw else 0}: {exc}")

    dens = get("densities", "rho", (0,))
    if any(j < 0 or j > 4 for j in dens):
        errors.append(f"line {line_of('densities', 'rho')}: density index must be 0..4")
    cfg_kw["densities"] = tuple(dens)

    for key, name in (("masses", "masses"), ("start", "start"), ("t_end", "t_end"),
                      ("max_samples", "max_samples")):
        if ("trajectories", key) in values:
            cfg_kw[name] = get("trajectories", key)
    if any(mv <= 0 for mv in cfg_kw.get("masses", (1.0,))):
        errors.append(f"line {line_of('trajectories', 'masses')}: masses must be positive")
    dim = 3 if exp == "trajectories3d" else 2
    if exp.startswith("trajectories"):
        start = cfg_kw.get("start", (0.0,) * dim)
        if len(start) < dim:
            errors.append(f"line {line_of('trajectories', 'start')}: start needs {dim} coordinates")
        cfg_kw["start"] = tuple(start[:dim]) if len(start) >= dim else start

    pmap = {"points": "probe_points", "radius": "probe_radius", "t_final": "probe_t_final",
            "core_radius": "core_radius", "record": "record"}
    for key, name in pmap.items():
        if ("probe", key) in values:
            cfg_kw[name] = get("probe", key)
    if ("probe", "control_k") in values:
        cfg_kw["control_mode"] = (get("probe", "control_k"), get("probe", "control_energy", float("nan")),
                                  get("probe", "control_phase", 0.0))
    if ("eigensolve", "k") in values:
        cfg_kw["eigen_k"] = get("eigensolve", "k")
    if ("eigensolve", "scan_resolution") in values:
        cfg_kw["scan_resolution"] = get("eigensolve", "scan_resolution")

    if cfg_kw.get("workers", 1) < 1:
        errors.append(f"line {line_of('', 'workers')}: workers must be >= 1")
    errors.extend(_check_modes(exp, modes, cfg_kw))
    if errors:
        raise ConfigError(errors)
    return ExperimentConfig(**cfg_kw)


def _check_modes(exp, modes, kw):
    errs = []
    m, v0 = kw.get("m", 1.0), kw.get("v0", 1.0)
    for md in modes:
        v = md.values
        if exp == "relax_oscillator":
            if v[0] < 1 or v[0] != int(v[0]):
                errs.append(f"line {md.line}: oscillator n must be an integer >= 1")
            if (v[1] - 0.5) != round(v[1] - 0.5):
                errs.append(f"line {md.line}: k must be a half-integer")
        elif exp in ("relax_box", "confinement_probe", "eigensolve"):
            if (v[0] - 0.5) != round(v[0] - 0.5):
                errs.append(f"line {md.line}: k must be a half-integer")
            if not (m - v0 < v[1] < m):
                errs.append(f"line {md.line}: energy {v[1]} outside the bound window ({m - v0}, {m})")
    if kw.get("m", 1.0) <= 0:
        errs.append("physics: m must be positive")
    if exp in ("relax_box", "confinement_probe", "eigensolve"):
        if kw.get("v0", 1.0) <= 0 or kw.get("r_prime", 5.0) <= 0:
            errs.append("physics: v0 and r_prime must be positive")
    return errs


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
