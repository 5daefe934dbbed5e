import numpy as np
import pytest

from ballmaps.ball import r_max, sample_ball
from ballmaps.hermitian import (SpectralState, gellmann_basis, hs_norm, random_densities,
                                random_faithful_state, random_unit_vectors)
from ballmaps.maps import (AffineMap, compose, extremal_affine, identity_affine, mu_max,
                           orthogonal_affine, phi_mu, random_extremal_affine, random_orthogonal)
from ballmaps.verify import choi_matrix

from conftest import random_hermitian, unit

# exact value for diag(1/2, 1/3, 1/6): r_max = 1/(2 sqrt6), norm term sqrt(38)/6
SKEWED_MU_MAX = 3 / (2 * np.sqrt(57))


def test_phi_mu_limits(skewed):
    a = random_hermitian(3, np.random.default_rng(0))
    assert np.allclose(phi_mu(skewed, 1.0)(a), a, atol=1e-15)
    assert np.allclose(phi_mu(skewed, 0.0)(a), skewed.matrix * np.trace(a), atol=1e-15)


def test_phi_mu_negative_at_center(center3):
    out = phi_mu(center3, -0.5)(center3.projectors[0])
    assert np.allclose(out, np.diag([0, 0.5, 0.5]), atol=1e-15)


@pytest.mark.parametrize("seed", range(20))
def test_phi_mu_trace_and_fixed_point(seed):
    rng = np.random.default_rng(seed)
    state = random_faithful_state(3, rng)
    phi = phi_mu(state, rng.uniform(-1, 1))
    assert np.max(np.abs(phi(state.matrix) - state.matrix)) < 1e-12
    a = np.array([random_hermitian(3, rng) for _ in range(50)])
    tr_in = np.trace(a, axis1=1, axis2=2)
    tr_out = np.trace(phi(a), axis1=1, axis2=2)
    assert np.max(np.abs(tr_in - tr_out)) < 1e-12


@pytest.mark.parametrize("n", range(2, 9))
def test_mu_max_center(n):
    assert mu_max(SpectralState.maximally_mixed(n)) == pytest.approx(1 / (n - 1), abs=1e-12)


def test_mu_max_skewed(skewed):
    assert mu_max(skewed) == pytest.approx(SKEWED_MU_MAX, abs=1e-15)
    assert mu_max(skewed) == pytest.approx(0.198680, abs=1e-6)


def test_mu_max_pure_state_oracle(skewed):
    m = mu_max(skewed)
    rmax = r_max(skewed)
    psi = random_unit_vectors(3, 100_000, 5)
    pure = np.einsum("bi,bj->bij", psi, psi.conj())
    diff = phi_mu(skewed, -m)(pure) - skewed.matrix
    dist = np.sqrt(np.einsum("bij,bij->b", diff.conj(), diff).real)
    assert dist.max() <= rmax + 1e-12
    # tight on the bottom eigenprojector
    bottom = skewed.projectors[-1]
    assert hs_norm(phi_mu(skewed, m)(bottom) - skewed.matrix) == pytest.approx(rmax, abs=1e-15)


@pytest.mark.parametrize("n", [3, 4])
def test_ball_property(n):
    rng = np.random.default_rng(40 + n)
    for _ in range(3):
        state = random_faithful_state(n, rng)
        rho = random_densities(n, 10_000, rng)
        for sign in (1, -1):
            diff = phi_mu(state, sign * mu_max(state))(rho) - state.matrix
            dist = np.sqrt(np.einsum("bij,bij->b", diff.conj(), diff).real)
            assert dist.max() <= r_max(state) + 1e-12


def test_random_orthogonal_is_deterministic():
    q = random_orthogonal(8, 3)
    assert np.allclose(q.T @ q, np.eye(8), atol=1e-12)
    assert np.array_equal(q, random_orthogonal(8, 3))


def test_extremal_pure_rotation():
    r1, r2 = random_orthogonal(5, 1), random_orthogonal(5, 2)
    for delta in (0.3, 1.0):
        aff = extremal_affine(5, r1, r2, 1.0, delta)
        assert np.allclose(aff.T, r1 @ r2, atol=1e-15)
        assert not np.any(aff.t)


def test_extremal_kappa_zero_delta_one_is_constant():
    # s = sqrt(1 - 1) = 0: every point goes to the pole R1 e_m
    r1 = random_orthogonal(4, 9)
    aff = extremal_affine(4, r1, np.eye(4), 0.0, 1.0)
    assert np.max(np.abs(aff.T)) == 0
    assert np.allclose(aff.t, r1[:, -1])
    assert aff.max_image_norm() == pytest.approx(1.0, abs=1e-12)


def test_extremal_kappa_zero_identity_frames():
    delta = 0.6
    aff = extremal_affine(3, np.eye(3), np.eye(3), 0.0, delta)
    s = np.sqrt(1 - delta ** 2)
    assert np.allclose(aff.T, np.diag([s, s, 0.0]))
    assert np.allclose(aff.t, [0, 0, delta])


@pytest.mark.parametrize("seed", range(10))
def test_extremal_preserves_ball(seed):
    aff = random_extremal_affine(8, seed)
    assert aff.max_image_norm(samples=10_000, seed=seed) <= 1 + 1e-10
    # sampled inside the ball, not only on the sphere
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((5000, 8))
    x *= (rng.random(5000) ** (1 / 8) / np.linalg.norm(x, axis=1))[:, None]
    assert np.linalg.norm(aff(x), axis=1).max() <= 1 + 1e-10


def test_extremal_validation():
    q = random_orthogonal(3, 0)
    with pytest.raises(ValueError, match="orthogonal"):
        extremal_affine(3, 2 * q, q, 0.5, 0.5)
    with pytest.raises(ValueError, match="kappa"):
        extremal_affine(3, q, q, 1.5, 0.5)
    with pytest.raises(ValueError, match="delta"):
        extremal_affine(3, q, q, 0.5, 0.0)
    with pytest.raises(ValueError, match="delta"):
        extremal_affine(3, q, q, 0.5, 1.5)


def test_affine_map_rejects_expanding():
    with pytest.raises(ValueError, match="unit ball"):
        AffineMap(1.01 * np.eye(3), np.zeros(3))
    with pytest.raises(ValueError, match="unit ball"):
        AffineMap(0.9 * np.eye(3), np.array([0.2, 0, 0]))
    AffineMap(0.8 * np.eye(3), np.array([0.2, 0, 0]))


@pytest.mark.parametrize("seed", range(5))
def test_compose_identity_is_phi_mu(seed):
    rng = np.random.default_rng(seed)
    state = random_faithful_state(4, rng)
    mu = rng.uniform(-1, 1)
    bmap = compose(state, mu)
    a = np.array([random_hermitian(4, rng) for _ in range(20)])
    assert np.max(np.abs(bmap(a) - phi_mu(state, mu)(a))) < 1e-12


def test_compose_fixed_point_for_isometry():
    state = random_faithful_state(3, 2)
    bmap = compose(state, mu_max(state), orthogonal_affine(random_orthogonal(8, 4)))
    assert np.max(np.abs(bmap(state.matrix) - state.matrix)) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_compose_trace_and_hermiticity(n):
    rng = np.random.default_rng(60 + n)
    state = random_faithful_state(n, rng)
    bmap = compose(state, -mu_max(state), random_extremal_affine(n * n - 1, rng))
    a = np.array([random_hermitian(n, rng) for _ in range(1000)])
    out = bmap(a)
    assert np.max(np.abs(np.trace(out, axis1=1, axis2=2) - np.trace(a, axis1=1, axis2=2))) < 1e-12
    assert np.max(np.abs(out - np.conj(np.swapaxes(out, 1, 2)))) < 1e-12


def test_compose_complex_linearity():
    rng = np.random.default_rng(8)
    state = random_faithful_state(3, rng)
    bmap = compose(state, 0.1, random_extremal_affine(8, rng))
    a1, a2 = random_hermitian(3, rng), random_hermitian(3, rng)
    assert np.allclose(bmap(a1 + 1j * a2), bmap(a1) + 1j * bmap(a2), atol=1e-14)
    # and it is linear, including the translation
    assert np.allclose(bmap(2.5 * a1), 2.5 * bmap(a1), atol=1e-13)


@pytest.mark.parametrize("n", [3, 4])
def test_certified_positivity_sampled(n):
    rng = np.random.default_rng(70 + n)
    for _ in range(5):
        state = random_faithful_state(n, rng)
        bmap = compose(state, rng.choice([-1, 1]) * mu_max(state),
                       random_extremal_affine(n * n - 1, rng))
        assert bmap.certified_positive
        psi = random_unit_vectors(n, 10_000, rng)
        out = bmap(np.einsum("bi,bj->bij", psi, psi.conj()))
        assert np.linalg.eigvalsh(out)[:, 0].min() >= -1e-10


def test_uncertified_flag(skewed):
    assert not compose(skewed, 1.5 * mu_max(skewed)).certified_positive
    assert compose(skewed, mu_max(skewed)).certified_positive


@pytest.mark.parametrize("mu", [0.0, 0.25, 0.5, 1.0])
def test_cp_for_unit_interval(mu):
    state = random_faithful_state(3, 11)
    w = np.linalg.eigvalsh(choi_matrix(compose(state, mu), 3))
    assert w[0] >= -1e-12


def test_composed_map_keeps_ball():
    rng = np.random.default_rng(12)
    state = random_faithful_state(3, rng)
    bmap = compose(state, -mu_max(state), random_extremal_affine(8, rng))
    pts = sample_ball(state, r_max(state), 5000, rng)
    diff = bmap(pts) - state.matrix
    dist = np.sqrt(np.einsum("bij,bij->b", diff.conj(), diff).real)
    assert dist.max() <= r_max(state) + 1e-12


def test_compose_dimension_checks(skewed):
    with pytest.raises(ValueError, match="affine map has dimension"):
        compose(skewed, 0.1, identity_affine(3))
    with pytest.raises(ValueError, match="dimension mismatch"):
        compose(skewed, 0.1)(np.eye(2))
    with pytest.raises(ValueError):
        compose(skewed, 0.1, basis=gellmann_basis(2))


def test_matrix_units_images(skewed):
    bmap = compose(skewed, 0.3)
    out = bmap(unit(3, 0, 1))
    assert np.allclose(out, 0.3 * unit(3, 0, 1), atol=1e-15)
