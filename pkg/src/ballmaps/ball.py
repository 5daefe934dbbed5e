"""Balls around a faithful state inside its eigen-simplex."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hermitian import SpectralState, _rng, gellmann_basis, hermitian, hs_norm

SIMPLEX_TOL = 1e-12
PSD_TOL = 1e-10


def r_max(state: SpectralState) -> float:
    """Radius of the largest ball around the state that stays inside its simplex."""
    n = state.dim
    return float(state.shifted[-1] / np.sqrt(n * (n - 1)))


def _check_face_point(alpha: np.ndarray, n: int) -> None:
    if alpha.shape != (n - 1,):
        raise ValueError(f"face point must have length {n - 1}, got {alpha.shape}")
    if np.any(alpha < -SIMPLEX_TOL) or abs(alpha.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError("face point is not on the probability simplex")


def face_distance(state: SpectralState, alpha) -> float:
    """Squared distance from the state to ``sum_i alpha_i P_i`` on face F_n."""
    alpha = np.asarray(alpha, dtype=float)
    _check_face_point(alpha, state.dim)
    return float(face_distances(state, alpha[None, :])[0])


def face_distances(state: SpectralState, alphas) -> np.ndarray:
    """Vectorized :func:`face_distance` over rows of ``alphas`` (no validation)."""
    lam = state.shifted
    diff = np.asarray(alphas, dtype=float) - lam[:-1]
    return np.sum(diff * diff, axis=-1) - lam[-1] ** 2 / state.dim


def face_point(state: SpectralState, alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    _check_face_point(alpha, state.dim)
    return np.einsum("k,kij->ij", alpha, state.projectors[:-1])


def tangency_point(state: SpectralState) -> np.ndarray:
    """Minimizer of :func:`face_distance` on F_n."""
    lam = state.shifted
    return lam[:-1] + lam[-1] / (state.dim - 1)


def ball_contains(state: SpectralState, r: float, x) -> bool:
    x = hermitian(x)
    if x.shape[0] != state.dim:
        raise ValueError("dimension mismatch")
    return hs_norm(state.matrix - x) <= r + SIMPLEX_TOL


def in_simplex_psd(x) -> bool:
    """True for unit-trace positive semidefinite ``x`` (tolerance 1e-10)."""
    x = hermitian(x)
    if abs(np.trace(x).real - 1.0) > PSD_TOL:
        return False
    return bool(np.linalg.eigvalsh(x)[0] >= -PSD_TOL)


@dataclass(frozen=True)
class SimplexBall:
    state: SpectralState
    r_max: float
    tangency: np.ndarray

    @classmethod
    def of(cls, state: SpectralState) -> "SimplexBall":
        return cls(state, r_max(state), tangency_point(state))

    @property
    def tangency_matrix(self) -> np.ndarray:
        return face_point(self.state, self.tangency)


# --- samplers -------------------------------------------------------------

def sample_face(state: SpectralState, size: int, seed=None) -> np.ndarray:
    """Uniform (Dirichlet(1,...,1)) points on face F_n, shape ``(size, n-1)``."""
    return _rng(seed).dirichlet(np.ones(state.dim - 1), size=size)


def sample_ball(state: SpectralState, r: float, size: int, seed=None,
                diagonal: bool = False) -> np.ndarray:
    """Uniform points of the ball of radius ``r`` around the state.

    The ball lies in the trace-one hyperplane. With ``diagonal=True`` the
    points are restricted to the span of the eigenprojectors, i.e. the affine
    hull of the simplex.
    """
    rng = _rng(seed)
    basis = gellmann_basis(state)
    m = state.dim - 1 if diagonal else len(basis)
    g = rng.standard_normal((size, m))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radius = r * rng.random(size) ** (1.0 / m)
    coords = np.zeros((size, len(basis)))
    # d_l come first in the basis ordering and span the diagonal directions
    coords[:, :m] = g * radius[:, None]
    return state.matrix + basis.combine(coords)
