"""Entanglement witnesses from positive maps.

Tensor ordering: the first factor (A) carries the slow index, so
``W = sum_ij e_ij (x) phi(e_ij)`` has block ``(i, j)`` equal to ``phi(e_ij)``.
``P+_n`` is the projector onto ``sum_i |ii>/sqrt(n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .choi import family_map
from .hermitian import SpectralState, hermitian
from .maps import mu_max
from .verify import DEFAULT_TOL, Tolerances, block_positivity, choi_matrix


def maximally_entangled(n: int) -> np.ndarray:
    psi = np.eye(n).ravel() / np.sqrt(n)
    return np.outer(psi, psi).astype(complex)


@dataclass(frozen=True)
class Witness:
    dim_a: int
    dim_b: int
    matrix: np.ndarray
    min_eigenvalue: float
    block_positivity_lower_bound: float | None = None
    source: str = ""

    @property
    def is_witness(self) -> bool:
        """Not positive, and no product state found with a negative value."""
        return (self.min_eigenvalue < -DEFAULT_TOL.eigen
                and self.block_positivity_lower_bound is not None
                and self.block_positivity_lower_bound >= -DEFAULT_TOL.certificate)


def witness_from_matrix(matrix, dim_a: int, dim_b: int, *, restarts: int = 20,
                        seed: int = 0, source: str = "",
                        tol: Tolerances = DEFAULT_TOL) -> Witness:
    matrix = hermitian(matrix)
    if matrix.shape[0] != dim_a * dim_b:
        raise ValueError("matrix size does not match dim_a * dim_b")
    lo = float(np.linalg.eigvalsh(matrix)[0])
    bound = None
    if restarts > 0:
        bound = block_positivity(matrix, dim_a, dim_b, restarts, seed, tol).bound
    return Witness(dim_a, dim_b, matrix, lo, bound, source)


def from_map(phi, n: int, *, restarts: int = 20, seed: int = 0,
             tol: Tolerances = DEFAULT_TOL) -> Witness:
    """``W = n (id (x) phi) P+_n``.

    ``restarts = 0`` skips the block-positivity search.
    """
    dim = getattr(phi, "dim", n)
    if dim != n:
        raise ValueError(f"map acts on {dim}x{dim} matrices, not {n}x{n}")
    source = phi.describe() if hasattr(phi, "describe") else repr(phi)
    return witness_from_matrix(choi_matrix(phi, n), n, n, restarts=restarts, seed=seed,
                               source=source, tol=tol)


def detect(w: Witness, rho) -> float:
    """``Tr(W rho)``; negative values flag ``rho`` as entangled."""
    rho = hermitian(rho, tol=1e-10)
    if rho.shape != w.matrix.shape:
        raise ValueError(f"dimension mismatch: witness {w.matrix.shape}, state {rho.shape}")
    if abs(np.trace(rho).real - 1.0) > 1e-10 or np.linalg.eigvalsh(rho)[0] < -1e-10:
        raise ValueError("input is not a density matrix")
    return float(np.real(np.sum(w.matrix * rho.T)))


def family_witness(state: SpectralState, alpha: float) -> np.ndarray:
    """``3 (id (x) phi) P+_3`` for the qutrit family, in the eigenbasis of the state."""
    return choi_matrix(family_map(state, alpha).local, 3)


def _diag_positions() -> dict[str, list[int]]:
    # a_i at block i, slot i; b_i at slot i+1; c_i at slot i+2 (mod 3)
    return {name: [3 * i + (i + shift) % 3 for i in range(3)]
            for name, shift in (("a", 0), ("b", 1), ("c", 2))}


def coefficients(state: SpectralState, alpha: float) -> dict[str, np.ndarray]:
    """Diagonal coefficients ``a_i, b_i, c_i`` of the family witness.

    Read off the assembled 9x9 matrix in the eigenbasis of the state and
    divided by ``mu_max``.
    """
    diag = np.real(np.diag(family_witness(state, alpha)))
    mu = mu_max(state)
    return {name: diag[pos] / mu for name, pos in _diag_positions().items()}


def negativity_submatrix(state: SpectralState, alpha: float) -> tuple[np.ndarray, bool]:
    """``[[a1,-1,-1],[-1,a2,-1],[-1,-1,a3]]`` and whether it has a negative eigenvalue.

    The family witness is this block (times ``mu_max``) on span{|11>,|22>,|33>}
    plus a nonnegative diagonal, so the flag says whether ``W`` is not positive.
    """
    a = coefficients(state, alpha)["a"]
    m = np.diag(a + 1.0) - np.ones((3, 3))
    return m, bool(np.linalg.eigvalsh(m)[0] < -DEFAULT_TOL.eigen)
