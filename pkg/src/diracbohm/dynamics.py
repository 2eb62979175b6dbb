"""Guidance-equation dynamics: velocity field, RKF45 trajectories, circulation.

Trajectories are integrated by a compiled Runge-Kutta-Fehlberg 4(5) stepper,
one trajectory at a time, so a batch of lattice points gives bit-identical
results however it is split between workers. Backward integration runs the
same stepper forward in tau = -t on the negated field.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from numba import njit

from . import _kernels as K
from .eigenmodes import WaveFunction


class Failure(IntEnum):
    NONE = 0
    PRECISION = 1
    ITERATION_CAP = 2
    DEGENERATE_DENSITY = 3


@dataclass(frozen=True)
class IntegratorConfig:
    abs_tolerance: float = 1e-8
    min_step: float = 1e-8
    max_step: float = 0.1
    max_iterations: int = 100_000
    backtrack_precision: float = 1e-3
    roundtrip_check: bool = True

    def __post_init__(self):
        if not (0 < self.min_step <= self.max_step):
            raise ValueError("need 0 < min_step <= max_step")
        if self.abs_tolerance <= 0:
            raise ValueError("abs_tolerance must be positive")
        if self.backtrack_precision <= 0:
            raise ValueError("backtrack_precision must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class TrajectoryOutcome:
    end_position: np.ndarray
    good: bool
    failure_reason: Failure
    steps_taken: int
    path_sample: list | None = None
    roundtrip_error: float = 0.0


@njit(cache=True)
def _rkf45(args, t0, t1, x0, tol, hmin, hmax, maxit, floor, rec):
    """Integrate dx/dt = v(t, x) from t0 to t1 (either direction).

    Returns (x, status, iterations, n_recorded). Every attempted step counts
    toward ``maxit``. A step already at ``hmin`` is accepted even if its
    error estimate exceeds ``tol``. ``rec`` is either empty or an (maxit+1, d+1)
    buffer receiving (t, x) after each accepted step.
    """
    d = x0.size
    x = x0.copy()
    sgn = 1.0 if t1 >= t0 else -1.0
    span = abs(t1 - t0)
    tau = 0.0
    h = min(hmax, span)
    k1 = np.empty(d)
    k2 = np.empty(d)
    k3 = np.empty(d)
    k4 = np.empty(d)
    k5 = np.empty(d)
    k6 = np.empty(d)
    xs = np.empty(d)
    nrec = 0
    record = rec.shape[0] > 0
    if record:
        rec[0, 0] = t0
        for i in range(d):
            rec[0, i + 1] = x[i]
        nrec = 1
    it = 0
    while tau < span:
        if it >= maxit:
            return x, 2, it, nrec
        it += 1
        last = False
        if tau + h >= span:
            h = span - tau
            last = True
        t = t0 + sgn * tau
        if K.guide_velocity(args, t, x, k1) < floor:
            return x, 3, it, nrec
        for i in range(d):
            xs[i] = x[i] + sgn * h * (0.25 * k1[i])
        if K.guide_velocity(args, t + sgn * 0.25 * h, xs, k2) < floor:
            return x, 3, it, nrec
        for i in range(d):
            xs[i] = x[i] + sgn * h * (3.0 / 32.0 * k1[i] + 9.0 / 32.0 * k2[i])
        if K.guide_velocity(args, t + sgn * 0.375 * h, xs, k3) < floor:
            return x, 3, it, nrec
        for i in range(d):
            xs[i] = x[i] + sgn * h * (1932.0 / 2197.0 * k1[i] - 7200.0 / 2197.0 * k2[i]
                                      + 7296.0 / 2197.0 * k3[i])
        if K.guide_velocity(args, t + sgn * (12.0 / 13.0) * h, xs, k4) < floor:
            return x, 3, it, nrec
        for i in range(d):
            xs[i] = x[i] + sgn * h * (439.0 / 216.0 * k1[i] - 8.0 * k2[i] + 3680.0 / 513.0 * k3[i]
                                      - 845.0 / 4104.0 * k4[i])
        if K.guide_velocity(args, t + sgn * h, xs, k5) < floor:
            return x, 3, it, nrec
        for i in range(d):
            xs[i] = x[i] + sgn * h * (-8.0 / 27.0 * k1[i] + 2.0 * k2[i] - 3544.0 / 2565.0 * k3[i]
                                      + 1859.0 / 4104.0 * k4[i] - 11.0 / 40.0 * k5[i])
        if K.guide_velocity(args, t + sgn * 0.5 * h, xs, k6) < floor:
            return x, 3, it, nrec
        err2 = 0.0
        for i in range(d):
            e = h * (1.0 / 360.0 * k1[i] - 128.0 / 4275.0 * k3[i] - 2197.0 / 75240.0 * k4[i]
                     + 1.0 / 50.0 * k5[i] + 2.0 / 55.0 * k6[i])
            err2 += e * e
        err = np.sqrt(err2)
        if err <= tol or h <= hmin:
            for i in range(d):
                x[i] += sgn * h * (25.0 / 216.0 * k1[i] + 1408.0 / 2565.0 * k3[i]
                                   + 2197.0 / 4104.0 * k4[i] - 0.2 * k5[i])
            tau = span if last else tau + h
            if record:
                rec[nrec, 0] = t0 + sgn * tau
                for i in range(d):
                    rec[nrec, i + 1] = x[i]
                nrec += 1
            if last:
                break
        if err == 0.0:
            fac = 5.0
        else:
            fac = min(5.0, max(0.2, 0.9 * (tol / err) ** 0.2))
        h = min(hmax, max(hmin, h * fac))
    return x, 0, it, nrec


@njit(cache=True)
def _distance(a, b):
    s = 0.0
    for i in range(a.size):
        s += (a[i] - b[i]) ** 2
    return np.sqrt(s)


@njit(cache=True)
def _backtrack_batch(args, t_final, t0, pts, tol, hmin, hmax, maxit, floor, prec, roundtrip):
    n, d = pts.shape
    ends = np.empty((n, d))
    status = np.empty(n, dtype=np.int64)
    steps = np.empty(n, dtype=np.int64)
    rterr = np.zeros(n)
    rec = np.empty((0, d + 1))
    for p in range(n):
        xf = pts[p].copy()
        x0, st, it, _ = _rkf45(args, t_final, t0, xf, tol, hmin, hmax, maxit, floor, rec)
        if st == 0 and roundtrip:
            x1, st2, it2, _ = _rkf45(args, t0, t_final, x0, tol, hmin, hmax, maxit, floor, rec)
            it += it2
            if st2 != 0:
                st = st2
            else:
                rterr[p] = _distance(x1, xf)
                if rterr[p] > prec:
                    st = 1
        ends[p] = x0
        status[p] = st
        steps[p] = it
    return ends, status, steps, rterr


def velocity(wf: WaveFunction, t, *coords) -> np.ndarray:
    """Guidance velocity psi^dag alpha psi / psi^dag psi at broadcast (t, x, y[, z]).

    Raises ``FloatingPointError`` where the density falls below the
    wavefunction's degenerate-density floor.
    """
    psi = wf.spinor(t, *coords)
    rho = np.sum(psi.real ** 2 + psi.imag ** 2, axis=-1)
    if np.any(rho < wf.density_floor) or np.any(rho == 0):
        raise FloatingPointError("degenerate density: velocity undefined")
    if wf.dim == 2:
        c = np.conj(psi[..., 0]) * psi[..., 1]
        return np.stack([2 * c.real, 2 * c.imag], axis=-1) / rho[..., None]
    cl = np.conj(psi[..., 0]) * psi[..., 1]
    cr = np.conj(psi[..., 2]) * psi[..., 3]
    dl = np.abs(psi[..., 0]) ** 2 - np.abs(psi[..., 1]) ** 2
    dr = np.abs(psi[..., 2]) ** 2 - np.abs(psi[..., 3]) ** 2
    j = np.stack([2 * (cr.real - cl.real), 2 * (cr.imag - cl.imag), dr - dl], axis=-1)
    return j / rho[..., None]


def integrate(wf: WaveFunction, t_start: float, x_start, t_end: float,
              cfg: IntegratorConfig = IntegratorConfig(), record: bool = False) -> TrajectoryOutcome:
    """Single trajectory from (t_start, x_start) to t_end; t_end may precede t_start."""
    x0 = np.asarray(x_start, dtype=float).copy()
    if x0.size != wf.dim:
        raise ValueError(f"position must have {wf.dim} components")
    rec = np.empty((cfg.max_iterations + 1 if record else 0, wf.dim + 1))
    x, st, it, nrec = _rkf45(wf.kernel_args(), float(t_start), float(t_end), x0,
                             cfg.abs_tolerance, cfg.min_step, cfg.max_step, cfg.max_iterations,
                             wf.density_floor, rec)
    path = [(row[0], row[1:].copy()) for row in rec[:nrec]] if record else None
    return TrajectoryOutcome(x, st == 0, Failure(st), int(it), path)


def backtrack(wf: WaveFunction, t_final: float, x_final, t0: float,
              cfg: IntegratorConfig = IntegratorConfig()) -> TrajectoryOutcome:
    """Initial position at t0 of the trajectory ending at x_final at t_final.

    With ``cfg.roundtrip_check`` the result is re-integrated forward and the
    point is certified only if it returns within ``backtrack_precision``.
    """
    if not t0 < t_final:
        raise ValueError("backtracking requires t0 < t_final")
    pts = np.asarray(x_final, dtype=float).reshape(1, -1)
    ends, status, steps, rterr = backtrack_many(wf, t_final, pts, t0, cfg, workers=1)
    st = Failure(int(status[0]))
    return TrajectoryOutcome(ends[0], st == Failure.NONE, st, int(steps[0]), None, float(rterr[0]))


def _backtrack_chunk(fam_args, dim, floor, t_final, t0, pts, cfg):
    return _backtrack_batch(fam_args, t_final, t0, pts, cfg.abs_tolerance, cfg.min_step,
                            cfg.max_step, cfg.max_iterations, floor, cfg.backtrack_precision,
                            cfg.roundtrip_check)


def default_workers() -> int:
    return max(1, int(os.environ.get("DIRACBOHM_WORKERS", "1")))


def backtrack_many(wf: WaveFunction, t_final: float, points, t0: float,
                   cfg: IntegratorConfig = IntegratorConfig(), workers: int | None = None):
    """Backtrack a batch of final positions.

    Returns ``(ends, status, steps, roundtrip_error)`` arrays. Points are split
    into contiguous chunks across ``workers`` processes; every trajectory is
    computed independently, so the output does not depend on the split.
    """
    pts = np.ascontiguousarray(np.asarray(points, dtype=float).reshape(-1, wf.dim))
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    args = wf.kernel_args()
    if workers == 1 or len(pts) < 2:
        return _backtrack_chunk(args, wf.dim, wf.density_floor, float(t_final), float(t0), pts, cfg)
    chunks = np.array_split(pts, workers)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [ex.submit(_backtrack_chunk, args, wf.dim, wf.density_floor, float(t_final),
                          float(t0), np.ascontiguousarray(c), cfg) for c in chunks if len(c)]
        parts = [f.result() for f in futs]
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(4))


def circulation(wf: WaveFunction, t: float, loop_center=(0.0, 0.0), loop_radius: float = 1.0,
                n_samples: int = 512, clockwise: bool = False) -> float:
    """Trapezoidal loop integral of v . dl around a circle (counter-clockwise by default)."""
    th = 2 * np.pi * np.arange(n_samples) / n_samples
    if clockwise:
        th = -th
    cx, cy = loop_center
    x = cx + loop_radius * np.cos(th)
    y = cy + loop_radius * np.sin(th)
    v = velocity(wf, t, x, y)
    # dl/dtheta, with the orientation sign carried by dtheta
    tx, ty = -loop_radius * np.sin(th), loop_radius * np.cos(th)
    dth = (-1.0 if clockwise else 1.0) * 2 * np.pi / n_samples
    return float(np.sum(v[:, 0] * tx + v[:, 1] * ty) * dth)


def write_trajectory(path, samples, header: dict | None = None) -> None:
    """Text dump: '#' comment header then one 't x y [z]' line per sample."""
    with open(path, "w", encoding="utf-8") as fh:
        for key, val in (header or {}).items():
            fh.write(f"# {key} = {val}\n")
        for t, x in samples:
            fh.write(" ".join(f"{v:.17g}" for v in (t, *x)) + "\n")


def read_trajectory(path) -> np.ndarray:
    return np.loadtxt(path, comments="#", ndmin=2)
