import numpy as np
import pytest

from ballmaps.choi import choi_angle, classic_choi, eta, family_map, xi
from ballmaps.hermitian import (SpectralState, random_faithful_state, random_separable,
                                random_unit_vectors)
from ballmaps.maps import compose, mu_max
from ballmaps.witness import (coefficients, detect, family_witness, from_map,
                              maximally_entangled, negativity_submatrix)

from conftest import random_hermitian

PI3 = np.pi / 3
CROSS = [(0, 4), (0, 8), (4, 8)]


def cyclic_sums(co):
    return [co["a"][i] + co["b"][(i + 1) % 3] + co["c"][(i + 2) % 3] for i in range(3)]


def test_identity_map_gives_scaled_projector():
    w = from_map(lambda a: a, 3)
    assert np.allclose(w.matrix, 3 * maximally_entangled(3), atol=1e-15)
    assert w.min_eigenvalue == pytest.approx(0.0, abs=1e-12)
    assert not w.is_witness


def test_transpose_map_gives_swap():
    w = from_map(lambda a: a.T, 2)
    swap = np.eye(4)[[0, 2, 1, 3]]
    assert np.array_equal(w.matrix, swap)
    assert np.allclose(np.linalg.eigvalsh(w.matrix), [-1, 1, 1, 1])
    assert w.is_witness


def test_choi_witness_entries():
    w = from_map(classic_choi(), 3, restarts=50)
    m = w.matrix
    assert np.allclose(np.diag(m), np.array([1, 1, 0, 0, 1, 1, 1, 0, 1]) / 2, atol=1e-15)
    for p, q in CROSS:
        assert m[p, q] == pytest.approx(-0.5) and m[q, p] == pytest.approx(-0.5)
    mask = np.eye(9, dtype=bool)
    for p, q in CROSS:
        mask[p, q] = mask[q, p] = True
    assert np.max(np.abs(m[~mask])) == 0
    assert w.min_eigenvalue == pytest.approx(-0.5, abs=1e-12)
    assert w.is_witness


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        from_map(classic_choi(), 2)
    w = from_map(classic_choi(), 3, restarts=0)
    with pytest.raises(ValueError, match="dimension mismatch"):
        detect(w, np.eye(4) / 4)
    with pytest.raises(ValueError, match="density matrix"):
        detect(w, np.eye(9))


def test_coefficients_at_classic_choi(center3):
    co = coefficients(center3, PI3)
    assert np.allclose(co["a"], 1, atol=1e-12)
    assert np.allclose(co["b"], 1, atol=1e-12)
    assert np.allclose(co["c"], 0, atol=1e-12)
    assert np.allclose(cyclic_sums(co), 2, atol=1e-12)
    assert np.allclose(family_witness(center3, PI3), from_map(classic_choi(), 3, restarts=0).matrix,
                       atol=1e-12)


def test_coefficients_at_choi_angle(center3):
    co = coefficients(center3, choi_angle())
    assert np.allclose(co["a"], 1, atol=1e-12)
    assert np.allclose(co["b"], 0, atol=1e-12)
    assert np.allclose(co["c"], 1, atol=1e-12)


def test_printed_coefficient_formula_disagrees(center3):
    # (eta_1 + xi_i)/mu_max would give 4/3 here; the assembled matrix has 1
    m = mu_max(center3)
    printed = (eta(PI3)[0] + xi(center3, PI3)[0]) / m
    assert printed == pytest.approx(4 / 3)
    assert coefficients(center3, PI3)["a"][0] == pytest.approx(1.0)


def test_coefficients_closed_form():
    # derived from e_jj -> sum_i L_ij e_ii:
    # a_i = eta_1 + xi_i/mu, b_i = eta_3 + xi_{i+1}/mu, c_i = eta_2 + xi_{i+2}/mu
    rng = np.random.default_rng(5)
    for _ in range(20):
        state = random_faithful_state(3, rng)
        alpha = rng.uniform(-np.pi, np.pi)
        e, x, m = eta(alpha), xi(state, alpha), mu_max(state)
        co = coefficients(state, alpha)
        assert np.allclose(co["a"], e[0] + x / m, atol=1e-11)
        assert np.allclose(co["b"], e[2] + np.roll(x, -1) / m, atol=1e-11)
        assert np.allclose(co["c"], e[1] + np.roll(x, -2) / m, atol=1e-11)


def test_coefficient_identity_random():
    rng = np.random.default_rng(6)
    for _ in range(100):
        state = random_faithful_state(3, rng)
        co = coefficients(state, rng.uniform(-np.pi, np.pi))
        assert np.allclose(cyclic_sums(co), 1 / mu_max(state), atol=1e-12)


def test_center_coefficients_nonnegative(center3):
    for alpha in np.linspace(-np.pi, np.pi, 37):
        co = coefficients(center3, alpha)
        assert min(v.min() for v in co.values()) >= -1e-12


def test_family_witness_sparsity():
    rng = np.random.default_rng(7)
    for _ in range(100):
        state = random_faithful_state(3, rng)
        w = family_witness(state, rng.uniform(-np.pi, np.pi))
        m = mu_max(state)
        mask = np.eye(9, dtype=bool)
        for p, q in CROSS:
            mask[p, q] = mask[q, p] = True
            assert w[p, q] == pytest.approx(-m, abs=1e-14)
        assert np.max(np.abs(w[~mask])) < 1e-14
        assert np.diag(w).real.min() >= -1e-14


def test_detect_examples():
    w = from_map(classic_choi(), 3, restarts=0)
    # (1/3)(3 * 1/2 + 6 * (-1/2))
    assert detect(w, maximally_entangled(3)) == pytest.approx(-0.5, abs=1e-12)
    assert detect(w, np.eye(9) / 9) == pytest.approx(np.trace(w.matrix).real / 9)
    assert detect(w, np.eye(9) / 9) >= 0


def _product_values(matrix, n, count, seed):
    rng = np.random.default_rng(seed)
    x = random_unit_vectors(n, count, rng)
    y = random_unit_vectors(n, count, rng)
    w4 = matrix.reshape(n, n, n, n)
    return np.einsum("bi,bk,ikjl,bj,bl->b", x.conj(), y.conj(), w4, x, y).real


@pytest.mark.parametrize("make", [
    lambda: classic_choi(),
    lambda: family_map(random_faithful_state(3, 1), 0.4),
    lambda: (lambda s: compose(s, -mu_max(s)))(random_faithful_state(3, 2)),
])
def test_separable_states_not_detected(make):
    w = from_map(make(), 3, restarts=0)
    assert _product_values(w.matrix, 3, 10_000, 8).min() >= -1e-10
    for seed in range(20):
        assert detect(w, random_separable(3, 3, 5, seed)) >= -1e-10


def test_negativity_submatrix_center(center3):
    m, negative = negativity_submatrix(center3, choi_angle())
    assert np.allclose(np.linalg.eigvalsh(m), [-1, 2, 2], atol=1e-12)
    assert negative
    for alpha in np.linspace(-np.pi, np.pi, 25):
        assert negativity_submatrix(center3, alpha)[1]


def test_circulant_boundary_case():
    a = np.full(3, 2.0)
    m = np.diag(a + 1) - np.ones((3, 3))
    assert np.allclose(np.linalg.eigvalsh(m), [0, 3, 3], atol=1e-12)


def test_skewed_state_can_lose_witness_status():
    found = []
    for eps in np.linspace(0.0, 0.9, 31):
        lt = np.array([1 + 2 * eps, 1 - eps, 1 - eps]) / 3
        state = SpectralState.from_eigenvalues(lt)
        for alpha in np.linspace(-np.pi, np.pi, 49):
            if not negativity_submatrix(state, alpha)[1]:
                found.append((state, alpha))
    assert found
    state, alpha = found[0]
    # the flag agrees with the spectrum of the whole witness
    assert np.linalg.eigvalsh(family_witness(state, alpha))[0] >= -1e-10


def test_flag_matches_full_spectrum():
    rng = np.random.default_rng(9)
    for _ in range(50):
        state = random_faithful_state(3, rng)
        alpha = rng.uniform(-np.pi, np.pi)
        neg = np.linalg.eigvalsh(family_witness(state, alpha))[0] < -1e-10
        assert neg == negativity_submatrix(state, alpha)[1]


def test_hermitian_input_to_detect():
    w = from_map(classic_choi(), 3, restarts=0)
    h = random_hermitian(9, np.random.default_rng(0))
    with pytest.raises(ValueError):
        detect(w, h)


def test_cyclic_sums_relative_precision_near_boundary():
    # Hilbert-Schmidt samples include nearly singular states where 1/mu_max ~ 1e4
    rng = np.random.default_rng(68)
    for k in range(200):
        state = random_faithful_state(3, 1000 + k)
        co = coefficients(state, rng.uniform(-np.pi, np.pi))
        target = 1 / mu_max(state)
        sums = np.array([co["a"][i] + co["b"][(i + 1) % 3] + co["c"][(i + 2) % 3] for i in range(3)])
        assert np.max(np.abs(sums - target)) <= 1e-14 * target
