"""Hermitian matrices as a real Hilbert space.

Provides validation of Hermitian input, the Hilbert-Schmidt scalar product,
spectral data of faithful density matrices, a generalized Gell-Mann basis
adapted to an eigenbasis, Bloch coordinates and seeded random samplers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITIAN_TOL = 1e-12
FAITHFUL_TOL = 1e-14
TRACE_TOL = 1e-10


def hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(a + a^dagger)/2`` as a complex array.

    Raises ``ValueError`` if ``a`` is not square or deviates from its adjoint
    by more than ``tol`` (max-abs entrywise).
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("empty matrix")
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e} > {tol:.1e})")
    return (a + a.conj().T) / 2


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt scalar product ``tr(ab)`` of two Hermitian matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    _check_same_dim(a, b)
    # tr(ab) = sum_ij a_ij b_ji
    return float(np.real(np.sum(a * b.T)))


def hs_norm(a) -> float:
    a = np.asarray(a)
    return float(np.sqrt(np.real(np.vdot(a, a))))


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


@dataclass(frozen=True)
class SpectralState:
    """A faithful density matrix together with its ordered spectral data.

    ``eigenvalues`` are sorted descending; column ``k`` of ``vectors`` is the
    eigenvector belonging to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        vec = np.asarray(self.vectors, dtype=complex)
        n = lam.shape[0]
        if n < 2:
            raise ValueError("dimension must be at least 2")
        if vec.shape != (n, n):
            raise ValueError("eigenvector matrix has the wrong shape")
        if np.any(np.diff(lam) > 0):
            raise ValueError("eigenvalues must be sorted descending")
        if abs(lam.sum() - 1.0) > TRACE_TOL:
            raise ValueError(f"state must have unit trace, got {lam.sum():.12g}")
        if lam[-1] <= FAITHFUL_TOL:
            raise ValueError(
                f"state is not faithful: smallest eigenvalue {lam[-1]:.3e}")
        if np.max(np.abs(vec.conj().T @ vec - np.eye(n))) > 1e-10:
            raise ValueError("eigenvectors are not orthonormal")
        lam.setflags(write=False)
        vec.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "vectors", vec)

    @classmethod
    def from_matrix(cls, rho) -> "SpectralState":
        rho = hermitian(rho)
        w, v = np.linalg.eigh(rho)
        order = np.argsort(-w, kind="stable")
        return cls(w[order], v[:, order])

    @classmethod
    def from_eigenvalues(cls, eigenvalues, vectors=None) -> "SpectralState":
        """State diagonal in ``vectors`` (default: computational basis)."""
        lam = np.asarray(eigenvalues, dtype=float)
        order = np.argsort(-lam, kind="stable")
        n = lam.shape[0]
        vec = np.eye(n, dtype=complex) if vectors is None else np.asarray(vectors, dtype=complex)
        return cls(lam[order], vec[:, order])

    @classmethod
    def maximally_mixed(cls, n: int) -> "SpectralState":
        return cls(np.full(n, 1.0 / n), np.eye(n, dtype=complex))

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        v = self.vectors
        return hermitian((v * self.eigenvalues) @ v.conj().T)

    @property
    def projectors(self) -> np.ndarray:
        """Rank-one eigenprojectors, shape ``(n, n, n)``."""
        v = self.vectors
        return np.einsum("ik,jk->kij", v, v.conj())

    @property
    def shifted(self) -> np.ndarray:
        """Weights ``lambda_i = l_i - l_n`` (i < n) and ``lambda_n = n l_n``.

        With these, ``rho = sum_{i<n} lambda_i P_i + lambda_n I/n``.
        """
        lt = self.eigenvalues
        return np.concatenate([lt[:-1] - lt[-1], [self.dim * lt[-1]]])

    def to_eigenbasis(self, a) -> np.ndarray:
        v = self.vectors
        return v.conj().T @ np.asarray(a) @ v

    def from_eigenbasis(self, a) -> np.ndarray:
        v = self.vectors
        return v @ np.asarray(a) @ v.conj().T


@dataclass(frozen=True)
class GellMannBasis:
    """Orthonormal traceless Hermitian basis ``(d_l, u_ij, v_ij)``.

    Built from matrix units ``e_ij = |e_i><e_j|`` of the columns of ``frame``.
    The ordering is: ``d_1..d_{n-1}``, then every ``u_ij``, then every ``v_ij``
    with ``i < j`` in lexicographic order.
    """

    frame: np.ndarray
    elements: np.ndarray = field(init=False, repr=False)
    labels: tuple = field(init=False)

    def __post_init__(self):
        frame = np.asarray(self.frame, dtype=complex)
        n = frame.shape[0]
        labels = []
        local = []
        for ell in range(1, n):
            d = np.zeros((n, n), dtype=complex)
            d[np.arange(ell), np.arange(ell)] = 1.0
            d[ell, ell] = -ell
            local.append(d / np.sqrt(ell * (ell + 1)))
            labels.append(f"d{ell}")
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for i, j in pairs:
            local.append((matrix_unit(n, i, j) + matrix_unit(n, j, i)) / np.sqrt(2))
            labels.append(f"u{i + 1}{j + 1}")
        for i, j in pairs:
            local.append((matrix_unit(n, i, j) - matrix_unit(n, j, i)) / (np.sqrt(2) * 1j))
            labels.append(f"v{i + 1}{j + 1}")
        elems = np.einsum("ik,akl,jl->aij", frame, np.array(local), frame.conj())
        elems.setflags(write=False)
        frame.setflags(write=False)
        object.__setattr__(self, "frame", frame)
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "labels", tuple(labels))

    @property
    def dim(self) -> int:
        return self.frame.shape[0]

    def __len__(self) -> int:
        return self.elements.shape[0]

    def coords(self, a) -> np.ndarray:
        """``tr(f_alpha a)`` for every basis element; broadcasts over leading axes.

        Complex for non-Hermitian ``a`` (complex-linear extension).
        """
        a = np.asarray(a)
        if a.shape[-2:] != (self.dim, self.dim):
            raise ValueError(f"dimension mismatch: basis is {self.dim}, matrix is {a.shape[-2:]}")
        return np.einsum("aij,...ji->...a", self.elements, a)

    def combine(self, coords) -> np.ndarray:
        """``<f, coords>`` = sum of ``coords[alpha] f_alpha``."""
        return np.einsum("...a,aij->...ij", coords, self.elements)


def gellmann_basis(state) -> GellMannBasis:
    """Basis adapted to the eigenbasis of ``state``.

    ``state`` may be a :class:`SpectralState` or an integer dimension, in which
    case the computational basis is used.
    """
    if isinstance(state, SpectralState):
        return GellMannBasis(state.vectors)
    n = int(state)
    if n < 2:
        raise ValueError("dimension must be at least 2")
    return GellMannBasis(np.eye(n, dtype=complex))


@dataclass(frozen=True)
class BlochVector:
    trace_part: float
    coords: np.ndarray
    basis: GellMannBasis = field(repr=False)


def to_bloch(a, basis: GellMannBasis) -> BlochVector:
    a = hermitian(a)
    if a.shape[0] != basis.dim:
        raise ValueError(f"dimension mismatch: basis is {basis.dim}, matrix is {a.shape[0]}")
    return BlochVector(float(np.trace(a).real), basis.coords(a).real, basis)


def from_bloch(v: BlochVector) -> np.ndarray:
    coords = np.asarray(v.coords, dtype=float)
    if coords.shape != (len(v.basis),):
        raise ValueError("coordinate vector does not match basis size")
    n = v.basis.dim
    return np.eye(n) * v.trace_part / n + v.basis.combine(coords)


# --- samplers -------------------------------------------------------------

def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_unit_vectors(n: int, size: int, seed=None) -> np.ndarray:
    """``size`` Haar-random unit vectors in C^n, shape ``(size, n)``.

    Draws are prefix-stable: the first k rows do not depend on ``size``.
    """
    g = _rng(seed).standard_normal((size, n, 2))
    psi = g[..., 0] + 1j * g[..., 1]
    return psi / np.linalg.norm(psi, axis=1, keepdims=True)


def random_pure(n: int, seed=None) -> np.ndarray:
    if n < 2:
        raise ValueError("dimension must be at least 2")
    psi = random_unit_vectors(n, 1, seed)[0]
    return np.outer(psi, psi.conj())


def random_density(n: int, seed=None) -> np.ndarray:
    """Hilbert-Schmidt random state ``G G^dagger / tr(G G^dagger)``."""
    if n < 2:
        raise ValueError("dimension must be at least 2")
    g = _rng(seed).standard_normal((n, n, 2))
    g = g[..., 0] + 1j * g[..., 1]
    rho = g @ g.conj().T
    return hermitian(rho / np.trace(rho).real)


def random_densities(n: int, size: int, seed=None) -> np.ndarray:
    g = _rng(seed).standard_normal((size, n, n, 2))
    g = g[..., 0] + 1j * g[..., 1]
    rho = g @ np.conj(np.swapaxes(g, -1, -2))
    tr = np.trace(rho, axis1=-2, axis2=-1).real
    return rho / tr[:, None, None]


def random_separable(n_a: int, n_b: int, terms: int, seed=None) -> np.ndarray:
    """Uniform mixture of ``terms`` products of independent Haar pure states."""
    if min(n_a, n_b) < 2 or terms < 1:
        raise ValueError("need n_a, n_b >= 2 and terms >= 1")
    rng = _rng(seed)
    out = np.zeros((n_a * n_b, n_a * n_b), dtype=complex)
    for _ in range(terms):
        x = random_unit_vectors(n_a, 1, rng)[0]
        y = random_unit_vectors(n_b, 1, rng)[0]
        xy = np.kron(x, y)
        out += np.outer(xy, xy.conj())
    return hermitian(out / terms)


def random_faithful_state(n: int, seed=None) -> SpectralState:
    """Random faithful state in a random eigenbasis."""
    return SpectralState.from_matrix(random_density(n, seed))


def partial_transpose(rho, dims: tuple[int, int]) -> np.ndarray:
    """Transpose the second tensor factor."""
    n_a, n_b = dims
    r = np.asarray(rho).reshape(n_a, n_b, n_a, n_b)
    return r.transpose(0, 3, 2, 1).reshape(n_a * n_b, n_a * n_b)
