"""De Broglie-Bohm trajectories and quantum relaxation for Dirac fermions in 2+1D."""
__version__ = "0.1.0"

from .config import ConfigError, ExperimentConfig, load_config, parse_config
from .density import (CoarseGrainSpec, CoarseGrid, DensityGrid, InitialDensity, LatticeSpec,
                      RelaxationMetrics, build_lattice, coarse_grain, equilibrium_grid,
                      reconstruct_densities, reconstruct_density, relaxation_metrics,
                      smooth_coarse_grain)
from .dynamics import (Failure, IntegratorConfig, TrajectoryOutcome, backtrack, backtrack_many,
                       circulation, integrate, velocity)
from .eigenmodes import (BoxMode, OscillatorMode, PlaneWave2D, PlaneWave3D, WaveFunction,
                         box_match_residual, box_spinor, free_spinor2d, free_spinor3d,
                         oscillator_energy, oscillator_spinor, solve_box_beta_prime,
                         solve_box_eigenvalues, superpose)
from .experiments import export_figures_data, run_experiment
from .special import bessel, laguerre
from .spinor import REP_2D, REP_WEYL, MatrixRep, current, velocity_from_spinor

__all__ = [
    "__version__", "ConfigError", "ExperimentConfig", "load_config", "parse_config",
    "CoarseGrainSpec", "CoarseGrid", "DensityGrid", "InitialDensity", "LatticeSpec",
    "RelaxationMetrics", "build_lattice", "coarse_grain", "equilibrium_grid",
    "reconstruct_densities", "reconstruct_density", "relaxation_metrics", "smooth_coarse_grain",
    "Failure", "IntegratorConfig", "TrajectoryOutcome", "backtrack", "backtrack_many",
    "circulation", "integrate", "velocity", "BoxMode", "OscillatorMode", "PlaneWave2D",
    "PlaneWave3D", "WaveFunction", "box_match_residual", "box_spinor", "free_spinor2d",
    "free_spinor3d", "oscillator_energy", "oscillator_spinor", "solve_box_beta_prime",
    "solve_box_eigenvalues", "superpose", "export_figures_data", "run_experiment", "bessel",
    "laguerre", "REP_2D", "REP_WEYL", "MatrixRep", "current", "velocity_from_spinor",
]
