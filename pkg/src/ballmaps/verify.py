"""Numerical certificates for (complete) positivity and block positivity.

A ``violated`` certificate is a proof: it carries a concrete state on which
the tested quantity is negative. ``positive-sampled`` and
``block-positive-sampled`` only report that a seeded search found nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .hermitian import matrix_unit, random_densities, random_unit_vectors


@dataclass(frozen=True)
class Tolerances:
    eigen: float = 1e-10
    certificate: float = 1e-8
    ball: float = 1e-12


DEFAULT_TOL = Tolerances()

REFINE_START = 1e-2
REFINE_STOP = 1e-8
REFINE_MAX_EVALS = 20_000
ALT_MAX_ITER = 200
ALT_STOP = 1e-12


@dataclass(frozen=True)
class Certificate:
    kind: str
    bound: float
    samples: int = 0
    restarts: int = 0
    seed: int | None = None
    tolerance: float = 0.0
    violator: np.ndarray | None = None

    @property
    def ok(self) -> bool:
        return self.kind in ("CP", "positive-sampled", "block-positive-sampled", "ball-contained")

    def to_dict(self) -> dict:
        from .io import matrix_to_json

        return {
            "kind": self.kind,
            "bound": float(self.bound),
            "samples": int(self.samples),
            "restarts": int(self.restarts),
            "seed": self.seed,
            "tolerance": float(self.tolerance),
            "violator": None if self.violator is None else matrix_to_json(self.violator),
        }


def superoperator(phi, n: int) -> np.ndarray:
    """Matrix ``S`` with ``phi(a).ravel() == S @ a.ravel()`` (row-major)."""
    cols = [np.asarray(phi(matrix_unit(n, i, j)), dtype=complex).ravel()
            for i in range(n) for j in range(n)]
    return np.array(cols).T


def choi_matrix(phi, n: int) -> np.ndarray:
    """``sum_ij e_ij (x) phi(e_ij)``, the first factor being the slow index."""
    blocks = [[np.asarray(phi(matrix_unit(n, i, j)), dtype=complex) for j in range(n)]
              for i in range(n)]
    return np.block(blocks)


def cp_check(phi, n: int, tol: Tolerances = DEFAULT_TOL) -> Certificate:
    c = choi_matrix(phi, n)
    c = (c + c.conj().T) / 2
    w, v = np.linalg.eigh(c)
    if w[0] >= -tol.eigen:
        return Certificate("CP", float(w[0]), tolerance=tol.eigen)
    psi = v[:, 0]
    return Certificate("not-CP", float(w[0]), tolerance=tol.eigen,
                       violator=np.outer(psi, psi.conj()))


def _min_eigs(S: np.ndarray, psi: np.ndarray, n: int) -> np.ndarray:
    proj = np.einsum("bi,bj->bij", psi, psi.conj()).reshape(len(psi), n * n)
    img = (proj @ S.T).reshape(-1, n, n)
    img = (img + np.conj(np.swapaxes(img, -1, -2))) / 2
    return np.linalg.eigvalsh(img)[:, 0]


def _sphere_descent(f, psi0: np.ndarray) -> tuple[float, np.ndarray]:
    """Minimize ``f`` over unit vectors by Givens rotations of real coordinates.

    Each sweep tries ``+-h`` in every coordinate plane of the real 2n-vector;
    ``h`` is halved after a sweep without improvement.
    """
    n = psi0.shape[0]
    v = np.concatenate([psi0.real, psi0.imag])
    to_c = lambda x: x[:n] + 1j * x[n:]  # noqa: E731
    best = f(to_c(v))
    planes = list(combinations(range(2 * n), 2))
    h = REFINE_START
    evals = 0
    while h >= REFINE_STOP and evals < REFINE_MAX_EVALS:
        improved = False
        for p, q in planes:
            for theta in (h, -h):
                c, s = np.cos(theta), np.sin(theta)
                w = v.copy()
                w[p], w[q] = c * v[p] - s * v[q], s * v[p] + c * v[q]
                val = f(to_c(w))
                evals += 1
                if val < best:
                    best, v, improved = val, w, True
                    break
        if not improved:
            h /= 2
    return best, to_c(v)


def positivity_scan(phi, n: int, samples: int = 10_000, restarts: int = 10,
                    seed: int = 0, tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Search for a pure state ``P`` with ``lambda_min(phi(P)) < 0``.

    Phase one evaluates ``samples`` Haar-random pure states; phase two refines
    the ``restarts`` best of them by derivative-free descent on the sphere.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    S = superoperator(phi, n)
    psi = random_unit_vectors(n, samples, seed)
    vals = _min_eigs(S, psi, n)
    order = np.argsort(vals, kind="stable")
    best_val = float(vals[order[0]])
    best_psi = psi[order[0]]

    def objective(x):
        return float(_min_eigs(S, x[None, :] / np.linalg.norm(x), n)[0])

    for k in order[:restarts]:
        val, cand = _sphere_descent(objective, psi[k])
        if val < best_val:
            best_val, best_psi = val, cand / np.linalg.norm(cand)
    if best_val >= -tol.eigen:
        return Certificate("positive-sampled", best_val, samples, restarts, seed, tol.eigen)
    return Certificate("violated", best_val, samples, restarts, seed, tol.eigen,
                       violator=np.outer(best_psi, best_psi.conj()))


def _min_eigvec(m: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return float(w[0]), v[:, 0]


def alternating_minimum(W: np.ndarray, dim_a: int, dim_b: int, x0: np.ndarray,
                        trace: list | None = None) -> tuple[float, np.ndarray, np.ndarray]:
    """Local minimum of ``<x (x) y|W|x (x) y>`` from the start vector ``x0``.

    If ``trace`` is a list, the objective after every half-step is appended.
    """
    W4 = np.asarray(W).reshape(dim_a, dim_b, dim_a, dim_b)
    x = x0 / np.linalg.norm(x0)
    prev = np.inf
    val = np.inf
    y = None
    for _ in range(ALT_MAX_ITER):
        val, y = _min_eigvec(np.einsum("i,ikjl,j->kl", x.conj(), W4, x))
        if trace is not None:
            trace.append(val)
        val, x = _min_eigvec(np.einsum("k,ikjl,l->ij", y.conj(), W4, y))
        if trace is not None:
            trace.append(val)
        if abs(prev - val) < ALT_STOP:
            break
        prev = val
    return val, x, y


def block_positivity(W, dim_a: int, dim_b: int, restarts: int = 100, seed: int = 0,
                     tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Multi-start alternating minimization over product vectors.

    Restart ``r`` draws its start vector from seed ``seed + r``, so results do
    not depend on scheduling and more restarts only add candidates.
    """
    W = np.asarray(W, dtype=complex)
    if W.shape != (dim_a * dim_b, dim_a * dim_b):
        raise ValueError("witness shape does not match dim_a * dim_b")
    if np.max(np.abs(W - W.conj().T)) > 1e-12:
        raise ValueError("witness is not Hermitian")
    best = (np.inf, None, None)
    for r in range(restarts):
        x0 = random_unit_vectors(dim_a, 1, seed + r)[0]
        val, x, y = alternating_minimum(W, dim_a, dim_b, x0)
        if val < best[0]:
            best = (val, x, y)
    val, x, y = best
    if val >= -tol.certificate:
        return Certificate("block-positive-sampled", val, 0, restarts, seed, tol.certificate)
    xy = np.kron(x, y)
    return Certificate("violated", val, 0, restarts, seed, tol.certificate,
                       violator=np.outer(xy, xy.conj()))


def ball_image_check(ball_map, samples: int = 10_000, seed: int = 0, pure: bool = False,
                     tol: Tolerances = DEFAULT_TOL) -> Certificate:
    """Largest distance from the invariant state to images of random states.

    ``bound`` is that distance; the check passes when it does not exceed
    ``r_max``.
    """
    n = ball_map.dim
    if pure:
        psi = random_unit_vectors(n, samples, seed)
        rho = np.einsum("bi,bj->bij", psi, psi.conj())
    else:
        rho = random_densities(n, samples, seed)
    diff = ball_map(rho) - ball_map.state.matrix
    dist = np.sqrt(np.einsum("bij,bij->b", diff.conj(), diff).real)
    k = int(np.argmax(dist))
    worst = float(dist[k])
    if worst <= ball_map.r_max + tol.ball:
        return Certificate("ball-contained", worst, samples, 0, seed, tol.ball)
    return Certificate("ball-exceeded", worst, samples, 0, seed, tol.ball, violator=rho[k])
