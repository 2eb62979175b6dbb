"""Trajectories guided by three superposed free plane waves, in 3+1D and 2+1D.

Heavier particles move more slowly, so their paths stay closer to the origin
over the same time span. Each path is written as ``t x y [z]`` text for plotting.

    python demos/free_trajectories.py [out_dir]
"""
import sys
from pathlib import Path

import numpy as np

from diracbohm import free_spinor2d, free_spinor3d, integrate
from diracbohm.dynamics import write_trajectory


def main(out_dir="free_paths"):
    out = Path(out_dir)
    out.mkdir(exist_ok=True)
    for label, make in (("3d", free_spinor3d), ("2d", free_spinor2d)):
        for m in (3.0, 6.0, 9.0):
            wf = make(m)
            res = integrate(wf, 0.0, np.zeros(wf.dim), 200.0, record=True)
            path = np.array([x for _, x in res.path_sample])
            reach = float(np.max(np.linalg.norm(path, axis=1)))
            write_trajectory(out / f"{label}_m{m:g}.txt", res.path_sample, {"mass": m})
            print(f"{label} m={m:g}: {res.steps_taken} steps, farthest {reach:.2f} from the origin, "
                  f"{res.failure_reason.name.lower()}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
