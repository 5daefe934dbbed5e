"""Closed-form qutrit family generalizing the Choi map.

``family_map(state, alpha)`` is the ball map at ``mu = mu_max`` composed with
the isometry of R^8 that rotates the two Cartan coordinates ``(x_1, x_2)`` by
``alpha`` and negates every off-diagonal coordinate. In the eigenbasis of the
state its action is::

    e_jj -> sum_i L[i, j] e_ii        (column j of L is the image of e_jj)
    e_ij -> -mu_max e_ij,  i != j

with ``L = mu_max L0 + L1`` from :func:`lambda_matrix`. Columns of ``L`` sum
to one, which is what makes the map trace preserving.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hermitian import SpectralState, matrix_unit
from .maps import AffineMap, BallMap, compose, mu_max

SQRT3 = np.sqrt(3.0)

LAMBDA_CHOI = 0.5 * np.array([[1.0, 1.0, 0.0],
                              [0.0, 1.0, 1.0],
                              [1.0, 0.0, 1.0]])


def _require_qutrit(state: SpectralState) -> None:
    if state.dim != 3:
        raise ValueError(f"the closed-form family is defined for n = 3, got n = {state.dim}")


def eta(alpha: float) -> np.ndarray:
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([2.0 * c / 3.0, -(c + SQRT3 * s) / 3.0, (-c + SQRT3 * s) / 3.0])


def xi(state: SpectralState, alpha: float) -> np.ndarray:
    _require_qutrit(state)
    l1, l2, l3 = state.shifted
    e1, e2, e3 = eta(alpha)
    m = mu_max(state)
    return np.array([
        l1 + l3 / 3.0 - m * (l1 * e1 + l2 * e2),
        l2 + l3 / 3.0 - m * (l1 * e3 + l2 * e1),
        l3 / 3.0 - m * (l1 * e2 + l2 * e3),
    ])


def lambda0(alpha: float) -> np.ndarray:
    """Circulant matrix with first row ``eta(alpha)``; independent of the state."""
    e1, e2, e3 = eta(alpha)
    return np.array([[e1, e2, e3],
                     [e3, e1, e2],
                     [e2, e3, e1]])


def lambda_matrix(state: SpectralState, alpha: float) -> np.ndarray:
    _require_qutrit(state)
    return mu_max(state) * lambda0(alpha) + np.repeat(xi(state, alpha)[:, None], 3, axis=1)


def family_rotation(alpha: float) -> AffineMap:
    """Rotation by ``alpha`` in the (d1, d2) plane, minus identity elsewhere."""
    T = -np.eye(8)
    c, s = np.cos(alpha), np.sin(alpha)
    T[:2, :2] = [[c, -s], [s, c]]
    return AffineMap(T, np.zeros(8), checked=False)


def choi_angle() -> float:
    """Angle ``s*pi/3`` whose coefficient matrix is exactly ``LAMBDA_CHOI``.

    The sign is fixed by evaluating both candidates at the maximally mixed
    state. It comes out as ``-pi/3``: with the column-image convention above,
    ``L(-pi/3) = LAMBDA_CHOI`` while ``L(+pi/3) = LAMBDA_CHOI.T``. The map at
    ``+pi/3`` is the textbook Choi map of :func:`classic_choi`.
    """
    center = SpectralState.maximally_mixed(3)
    for sign in (1.0, -1.0):
        angle = sign * np.pi / 3.0
        if np.allclose(lambda_matrix(center, angle), LAMBDA_CHOI, rtol=0, atol=1e-12):
            return angle
    raise AssertionError("no sign reproduces the Choi coefficient matrix")


@dataclass(frozen=True)
class ChoiFamilyMap:
    state: SpectralState
    alpha: float
    mu_max: float = field(init=False)
    eta: np.ndarray = field(init=False, repr=False)
    xi: np.ndarray = field(init=False, repr=False)
    lam: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        _require_qutrit(self.state)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "mu_max", mu_max(self.state))
        object.__setattr__(self, "eta", eta(self.alpha))
        object.__setattr__(self, "xi", xi(self.state, self.alpha))
        object.__setattr__(self, "lam", lambda_matrix(self.state, self.alpha))

    dim = 3

    def local(self, a):
        """Action on matrices written in the eigenbasis of the state."""
        a = np.asarray(a)
        if a.shape[-2:] != (3, 3):
            raise ValueError(f"dimension mismatch: map acts on 3x3, got {a.shape[-2:]}")
        diag = np.diagonal(a, axis1=-2, axis2=-1)
        out = -self.mu_max * a.astype(complex)
        idx = np.arange(3)
        out[..., idx, idx] = diag @ self.lam.T
        return out

    def __call__(self, a):
        a = np.asarray(a)
        if a.shape[-2:] != (3, 3):
            raise ValueError(f"dimension mismatch: map acts on 3x3, got {a.shape[-2:]}")
        return self.state.from_eigenbasis(self.local(self.state.to_eigenbasis(a)))

    def as_ball_map(self) -> BallMap:
        return compose(self.state, self.mu_max, family_rotation(self.alpha))

    def describe(self) -> str:
        return f"qutrit ball family alpha={self.alpha:.17g}"


def family_map(state: SpectralState, alpha: float) -> ChoiFamilyMap:
    return ChoiFamilyMap(state, alpha)


class ClassicChoiMap:
    """``e_ii -> sum_j LAMBDA_CHOI[i, j] e_jj``, ``e_ij -> -e_ij/2`` for i != j.

    Diagonal of the image is ``(x11 + x33, x22 + x11, x33 + x22)/2`` and every
    off-diagonal entry is ``-x_ij/2``: the standard Choi map, halved so that it
    preserves the trace.
    """

    dim = 3

    def __call__(self, a):
        a = np.asarray(a)
        if a.shape[-2:] != (3, 3):
            raise ValueError(f"dimension mismatch: map acts on 3x3, got {a.shape[-2:]}")
        diag = np.diagonal(a, axis1=-2, axis2=-1)
        out = -0.5 * a.astype(complex)
        idx = np.arange(3)
        out[..., idx, idx] = diag @ LAMBDA_CHOI
        return out

    def describe(self) -> str:
        return "classic Choi map"


def classic_choi() -> ClassicChoiMap:
    return ClassicChoiMap()


def basis_action(phi, n: int) -> dict[tuple[int, int], np.ndarray]:
    """Images of all matrix units ``e_ij``."""
    return {(i, j): np.asarray(phi(matrix_unit(n, i, j))) for i in range(n) for j in range(n)}
