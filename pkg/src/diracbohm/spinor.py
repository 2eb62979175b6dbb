"""Spinor algebra and the fixed Dirac matrix representations.

Spinors are plain complex numpy arrays whose last axis holds the components,
so a single spinor has shape ``(2,)`` or ``(4,)`` and a batch has shape
``(..., 2)`` or ``(..., 4)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)


@dataclass(frozen=True)
class MatrixRep:
    """Hermitian alpha/beta matrices of a Dirac Hamiltonian."""

    alpha: tuple[np.ndarray, ...]
    beta: np.ndarray
    spacetime: str

    @property
    def size(self) -> int:
        return self.beta.shape[0]

    def gamma(self) -> tuple[np.ndarray, ...]:
        """gamma^0 = beta, gamma^j = beta alpha_j."""
        return (self.beta,) + tuple(self.beta @ a for a in self.alpha)

    def clifford_defect(self) -> float:
        """Largest entry violating {a_j,a_k}=2d_jk, beta^2=1, {a_j,beta}=0."""
        eye = np.eye(self.size)
        worst = np.abs(self.beta @ self.beta - eye).max()
        for j, aj in enumerate(self.alpha):
            worst = max(worst, np.abs(aj @ self.beta + self.beta @ aj).max())
            for k, ak in enumerate(self.alpha):
                target = 2.0 * eye if j == k else 0.0 * eye
                worst = max(worst, np.abs(aj @ ak + ak @ aj - target).max())
        return float(worst)


def _weyl() -> MatrixRep:
    z = np.zeros((2, 2), dtype=complex)
    one = np.eye(2, dtype=complex)
    gamma0 = np.block([[z, one], [one, z]])
    # alpha_j = gamma^0 gamma^j with gamma^j = [[0, s_j], [-s_j, 0]]
    alpha = tuple(np.block([[-s, z], [z, s]]) for s in PAULI)
    return MatrixRep(alpha=alpha, beta=gamma0, spacetime="3+1")


REP_2D = MatrixRep(alpha=(SIGMA_1, SIGMA_2), beta=SIGMA_3, spacetime="2+1")
REP_WEYL = _weyl()


def density(psi) -> np.ndarray | float:
    """psi^dagger psi, summed over the last axis."""
    psi = np.asarray(psi, dtype=complex)
    out = np.sum(psi.real ** 2 + psi.imag ** 2, axis=-1)
    return float(out) if out.ndim == 0 else out


def current(psi, rep: MatrixRep | None = None) -> np.ndarray:
    """Spatial current (psi^dagger alpha_j psi)_j.

    ``rep`` defaults to the 2+1D representation for two-component spinors and
    the Weyl representation for four-component ones.
    """
    psi = np.asarray(psi, dtype=complex)
    if rep is None:
        rep = REP_2D if psi.shape[-1] == 2 else REP_WEYL
    if psi.shape[-1] != rep.size:
        raise ValueError(
            f"spinor has {psi.shape[-1]} components but representation is {rep.size}x{rep.size}"
        )
    comps = [np.einsum("...a,ab,...b->...", psi.conj(), a, psi).real for a in rep.alpha]
    return np.stack(comps, axis=-1)


def velocity_from_spinor(psi, rep: MatrixRep | None = None) -> np.ndarray:
    """Guidance velocity current / density for a batch of spinors."""
    rho = np.asarray(density(psi))
    return current(psi, rep) / rho[..., None]
