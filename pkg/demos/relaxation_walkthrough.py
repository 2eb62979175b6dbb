"""Watch a non-equilibrium density relax under the 8-mode oscillator spinor.

A coarse 64x64 lattice keeps this to a few minutes on one core. The numbers
are noisier than on the 256x256 acceptance lattice but the trend is the same:
the coarse-grained distance l1 between rho and psi^dagger psi shrinks.

    python demos/relaxation_walkthrough.py [n] [t_max]
"""
import sys
import time

from diracbohm import (CoarseGrainSpec, InitialDensity, IntegratorConfig, LatticeSpec, coarse_grain,
                       equilibrium_grid, oscillator_spinor, reconstruct_densities, relaxation_metrics)


def main(n=64, t_max=60.0):
    wf = oscillator_spinor()
    lattice = LatticeSpec(n, n)
    cg = CoarseGrainSpec(kind="smooth")
    cfg = IntegratorConfig(abs_tolerance=1e-10, min_step=1e-12)
    initials = [InitialDensity.rho(0), InitialDensity.rho(1)]
    print(f"{'t':>6} {'l1(rho0)':>10} {'l1(rho1)':>10} {'good':>7} {'sec':>6}")
    for t in (0.0, t_max / 3, 2 * t_max / 3, t_max):
        t1 = time.perf_counter()
        eq = coarse_grain(equilibrium_grid(wf, t, lattice), cg)
        grids = reconstruct_densities(wf, initials, 0.0, t, lattice, cfg)
        l1 = [relaxation_metrics(coarse_grain(g, cg), eq).l1 for g in grids]
        print(f"{t:6.1f} {l1[0]:10.4f} {l1[1]:10.4f} {grids[0].good_fraction:7.3f} "
              f"{time.perf_counter() - t1:6.1f}")


if __name__ == "__main__":
    args = sys.argv[1:]
    main(int(args[0]) if args else 64, float(args[1]) if len(args) > 1 else 60.0)
