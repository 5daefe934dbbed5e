"""Positive trace-preserving maps built from balls around a faithful state.

``phi_mu`` contracts every state towards the invariant state ``rho``;
:func:`compose` follows it by an affine self-map of the unit ball acting on
shifted Bloch coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ball import r_max
from .hermitian import GellMannBasis, SpectralState, _rng, gellmann_basis

ORTHO_TOL = 1e-10
AFFINE_TOL = 1e-10
AFFINE_SAMPLES = 10_000


def phi_mu(state: SpectralState, mu: float) -> Callable[[np.ndarray], np.ndarray]:
    """``a -> mu a + (1 - mu) rho tr(a)``; broadcasts over leading axes."""
    rho = state.matrix
    n = state.dim

    def apply(a):
        a = np.asarray(a)
        if a.shape[-2:] != (n, n):
            raise ValueError(f"dimension mismatch: map acts on {n}x{n}, got {a.shape[-2:]}")
        tr = np.trace(a, axis1=-2, axis2=-1)
        return mu * a + (1 - mu) * np.multiply.outer(tr, rho)

    return apply


def mu_max(state: SpectralState) -> float:
    """Largest ``|mu|`` for which ``phi_mu`` is guaranteed positive."""
    lam = state.shifted
    n = state.dim
    denom = 1.0 + np.sum(lam[:-1] ** 2) - lam[-1] ** 2 / n
    return float(r_max(state) / np.sqrt(denom))


def random_orthogonal(m: int, seed=None) -> np.ndarray:
    """Haar orthogonal matrix from QR of a Gaussian matrix with sign-fixed R."""
    q, r = np.linalg.qr(_rng(seed).standard_normal((m, m)))
    return q * np.sign(np.diag(r))


def _check_orthogonal(r: np.ndarray, m: int, name: str) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (m, m):
        raise ValueError(f"{name} must be {m}x{m}")
    if np.max(np.abs(r.T @ r - np.eye(m))) > ORTHO_TOL:
        raise ValueError(f"{name} is not orthogonal")
    return r


@dataclass(frozen=True)
class AffineMap:
    """``x -> T x + t`` mapping the closed unit ball of R^m into itself.

    Unless ``checked`` is passed as False, ball preservation is tested at
    construction on ``AFFINE_SAMPLES`` points of the unit sphere.
    """

    T: np.ndarray
    t: np.ndarray
    checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        T = np.asarray(self.T, dtype=float)
        t = np.asarray(self.t, dtype=float)
        m = t.shape[0]
        if T.shape != (m, m):
            raise ValueError("T and t have incompatible shapes")
        T.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "t", t)
        if self.checked:
            worst = self.max_image_norm()
            if worst > 1.0 + AFFINE_TOL:
                raise ValueError(f"affine map leaves the unit ball (norm {worst:.6g})")

    @property
    def dim(self) -> int:
        return self.t.shape[0]

    def __call__(self, x):
        return np.asarray(x) @ self.T.T + self.t

    def max_image_norm(self, samples: int = AFFINE_SAMPLES, seed=0) -> float:
        x = _rng(seed).standard_normal((samples, self.dim))
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        sampled = np.max(np.linalg.norm(self(x), axis=1))
        if not np.any(self.t):
            # linear case: the operator norm is exact
            return float(max(sampled, np.linalg.norm(self.T, 2)))
        return float(sampled)

    @property
    def is_identity(self) -> bool:
        return bool(np.array_equal(self.T, np.eye(self.dim)) and not np.any(self.t))


def identity_affine(m: int) -> AffineMap:
    return AffineMap(np.eye(m), np.zeros(m), checked=False)


def orthogonal_affine(R) -> AffineMap:
    """Linear isometry ``x -> R x`` (no translation)."""
    R = np.asarray(R, dtype=float)
    return AffineMap(_check_orthogonal(R, R.shape[0], "R"), np.zeros(R.shape[0]), checked=False)


def extremal_affine(m: int, R1, R2, kappa: float, delta: float) -> AffineMap:
    """Extreme point ``T = R1 diag(s,...,s,s*kappa) R2``, ``t = R1 c`` of the
    convex set of affine self-maps of the unit ball.

    ``s = sqrt(1 - delta^2 (1 - kappa^2))`` and ``c = (0,...,0, delta(1 - kappa^2))``.
    For ``kappa == 1`` the map is a pure isometry and ``delta`` is ignored.
    """
    R1 = _check_orthogonal(R1, m, "R1")
    R2 = _check_orthogonal(R2, m, "R2")
    if not 0.0 <= kappa <= 1.0:
        raise ValueError(f"kappa must lie in [0, 1], got {kappa}")
    if kappa < 1.0 and not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    s = np.sqrt(max(0.0, 1.0 - delta ** 2 * (1.0 - kappa ** 2)))
    diag = np.full(m, s)
    diag[-1] = s * kappa
    c = np.zeros(m)
    c[-1] = delta * (1.0 - kappa ** 2)
    return AffineMap((R1 * diag) @ R2, R1 @ c, checked=False)


def random_extremal_affine(m: int, seed=None) -> AffineMap:
    rng = _rng(seed)
    kappa = rng.uniform(0.0, 1.0)
    delta = 1.0 - rng.uniform(0.0, 1.0)
    return extremal_affine(m, random_orthogonal(m, rng), random_orthogonal(m, rng), kappa, delta)


@dataclass(frozen=True)
class BallMap:
    """The composed map ``phi_mu[T, t]``.

    For Hermitian ``a`` with Bloch coordinates ``a'`` of ``phi_mu(a)``::

        a -> rho tr(a) + <f, T (a' - x tr a) + r_max t tr a>

    where ``x`` are the Bloch coordinates of ``rho``. The translation is scaled
    by ``tr a`` so the map is linear; on states it is the plain affine action.
    Non-Hermitian input is handled by complex linearity.
    """

    state: SpectralState
    mu: float
    affine: AffineMap
    basis: GellMannBasis
    mu_max: float = field(init=False)
    r_max: float = field(init=False)
    x_tilde: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.basis.dim != self.state.dim:
            raise ValueError("basis and state dimensions differ")
        if self.affine.dim != len(self.basis):
            raise ValueError(
                f"affine map has dimension {self.affine.dim}, expected {len(self.basis)}")
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "mu_max", mu_max(self.state))
        object.__setattr__(self, "r_max", r_max(self.state))
        object.__setattr__(self, "x_tilde", self.basis.coords(self.state.matrix).real)

    @property
    def dim(self) -> int:
        return self.state.dim

    @property
    def certified_positive(self) -> bool:
        """True when positivity follows from the ball construction."""
        return abs(self.mu) <= self.mu_max * (1 + 1e-12)

    def __call__(self, a):
        a = np.asarray(a)
        n = self.dim
        if a.shape[-2:] != (n, n):
            raise ValueError(f"dimension mismatch: map acts on {n}x{n}, got {a.shape[-2:]}")
        tr = np.trace(a, axis1=-2, axis2=-1)
        a_prime = self.basis.coords(phi_mu(self.state, self.mu)(a))
        moved = a_prime - np.multiply.outer(tr, self.x_tilde)
        out = moved @ self.affine.T.T + self.r_max * np.multiply.outer(tr, self.affine.t)
        return np.multiply.outer(tr, self.state.matrix) + self.basis.combine(out)

    def describe(self) -> str:
        kind = "identity" if self.affine.is_identity else "affine"
        return f"ball map n={self.dim} mu={self.mu:.6g} ({kind})"


def compose(state: SpectralState, mu: float, affine: AffineMap | None = None,
            basis: GellMannBasis | None = None) -> BallMap:
    basis = gellmann_basis(state) if basis is None else basis
    affine = identity_affine(len(basis)) if affine is None else affine
    return BallMap(state, mu, affine, basis)


def apply(ball_map: BallMap, a) -> np.ndarray:
    return ball_map(a)
