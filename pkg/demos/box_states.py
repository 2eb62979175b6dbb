"""Bound states of the cylindrical well and the circulation around its axis.

Positive-k modes all wind the same way around r = 0; adding a negative-k mode
breaks that, which is what lets trajectories leave the inner core.

    python demos/box_states.py
"""
import numpy as np

from diracbohm import BoxMode, circulation, solve_box_beta_prime, solve_box_eigenvalues, superpose
from diracbohm.eigenmodes import BOX_TABLE


def main():
    for k in (0.5, 1.5, 2.5, -0.5, -1.5, -2.5):
        energies = solve_box_eigenvalues(k)
        listed = ", ".join(f"{e:.12f} (beta' {solve_box_beta_prime(e, k):+.6g})" for e in energies)
        print(f"k={k:+.1f}: {listed}")

    hint = (-15.0, 15.0, -15.0, 15.0)
    three = [BoxMode.solve(k, energy_hint=e) for k, e, _, _ in BOX_TABLE[:3]]
    four = three + [BoxMode.solve(BOX_TABLE[3][0], energy_hint=BOX_TABLE[3][1])]
    phases = [row[3] for row in BOX_TABLE[:4]]
    for name, modes in (("k > 0 only", three), ("with k = -1/2", four)):
        wf = superpose(modes, phases[:len(modes)], None, hint, 512)
        circ = [circulation(wf, t, (0.0, 0.0), 1.0) for t in np.linspace(0, 50, 6)]
        print(f"{name:>14}: circulation around r=1 at t=0..50: " + " ".join(f"{c:+.3f}" for c in circ))


if __name__ == "__main__":
    main()
