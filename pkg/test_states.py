import numpy as np
import pytest

from app.algebra import (
    AlgebraElement,
    embed_left_factor,
    identity_embedding,
    make_algebra,
    matrix_unit,
    random_element,
)
from app.exceptions import InvalidStateError, ShapeMismatchError
from app.states import (
    BipartiteVector,
    density_matrix,
    is_separable,
    make_state,
    partial_trace,
    psi_lambda,
    restrict,
    restriction_matches_partial_trace,
    schmidt,
    schmidt_rank,
    tracial_state,
    vector_state,
)


def random_bipartite(rng, dims):
    v = rng.standard_normal(dims[0] * dims[1]) + 1j * rng.standard_normal(dims[0] * dims[1])
    return BipartiteVector(dims, v / np.linalg.norm(v))


def test_states_are_normalized(m2, diag_state):
    spec = make_algebra([2, 3])
    for state in (tracial_state(spec), diag_state):
        assert state.evaluate(AlgebraElement.identity(state.spec)) == pytest.approx(1.0)


def test_diagonal_state_values(m2, diag_state):
    assert diag_state.evaluate(matrix_unit(m2, 0, 0, 0)) == pytest.approx(0.25)
    assert diag_state.evaluate(matrix_unit(m2, 0, 1, 1)) == pytest.approx(0.75)
    assert diag_state.evaluate(matrix_unit(m2, 0, 0, 1)) == pytest.approx(0.0)
    assert diag_state.is_faithful()


def test_make_state_rejects_bad_weights(m2):
    with pytest.raises(InvalidStateError, match="state not normalized"):
        make_state(m2, [np.diag([0.4, 0.5])])
    with pytest.raises(InvalidStateError, match="state not positive"):
        make_state(m2, [np.diag([1.5, -0.5])])
    with pytest.raises(InvalidStateError):
        make_state(m2, [np.array([[0.5, 0.1], [0.0, 0.5]])])
    with pytest.raises(ShapeMismatchError):
        make_state(m2, [np.eye(3) / 3])


def test_make_state_clamps_tiny_negatives(m2):
    state = make_state(m2, [np.diag([1.0 + 5e-13, -5e-13])])
    assert np.linalg.eigvalsh(state.weights[0]).min() >= 0.0


def test_vector_state():
    spec = make_algebra([4])
    state = vector_state(np.array([1, 0, 0, 0], dtype=complex), spec)
    assert np.allclose(state.weights[0], np.diag([1, 0, 0, 0]))
    assert np.linalg.matrix_rank(state.weights[0]) == 1
    assert not state.is_faithful()

    state = vector_state(psi_lambda(0.3), spec)
    assert state.evaluate(matrix_unit(spec, 0, 1, 1)).real == pytest.approx(0.3)


def test_vector_state_rejects_unnormalized():
    with pytest.raises(InvalidStateError):
        vector_state(np.array([1.0, 1.0]), make_algebra([2]))


def test_vector_state_renormalizes_within_tolerance():
    state = vector_state(np.array([1.0 + 5e-11, 0.0]), make_algebra([2]))
    assert np.allclose(state.weights[0], np.diag([1.0, 0.0]), atol=1e-15)
    assert state.evaluate(AlgebraElement.identity(state.spec)) == pytest.approx(1.0, abs=1e-12)


def test_psi_lambda_amplitudes():
    assert np.allclose(psi_lambda(0.3).amplitudes, [0, 0.547723, 0.836660, 0], atol=1e-6)
    assert is_separable(psi_lambda(1.0))
    assert np.allclose(psi_lambda(0.5).amplitudes, np.array([0, 1, 1, 0]) / np.sqrt(2))
    with pytest.raises(InvalidStateError):
        psi_lambda(1.2)


def test_restrict_psi_lambda_to_left_factor(m2):
    state = vector_state(psi_lambda(0.3), make_algebra([4]))
    reduced = restrict(state, embed_left_factor(m2, m2))
    assert reduced.evaluate(matrix_unit(m2, 0, 0, 0)).real == pytest.approx(0.3, abs=1e-12)
    assert reduced.evaluate(matrix_unit(m2, 0, 1, 1)).real == pytest.approx(0.7, abs=1e-12)


def test_restrict_along_identity(diag_state):
    same = restrict(diag_state, identity_embedding(diag_state.spec))
    assert np.allclose(same.weights[0], diag_state.weights[0])


def test_restriction_commutes_with_evaluation(m2, rng):
    iota = embed_left_factor(m2, make_algebra([3]))
    state = vector_state(random_bipartite(rng, (2, 3)).amplitudes, iota.target)
    reduced = restrict(state, iota)
    for _ in range(100):
        x = random_element(m2, rng)
        assert abs(reduced.evaluate(x) - state.evaluate(iota(x))) <= 1e-12


@pytest.mark.parametrize("lam", np.linspace(0.0, 1.0, 11))
def test_restricted_psi_lambda_matches_reduced_matrix(m2, rng, lam):
    iota = embed_left_factor(m2, m2)
    reduced = restrict(vector_state(psi_lambda(lam), iota.target), iota)
    for _ in range(100):
        alpha = random_element(m2, rng).data[0]
        expected = lam * alpha[0, 0] + (1 - lam) * alpha[1, 1]
        value = reduced.evaluate(AlgebraElement(m2, (alpha,)))
        assert abs(value - expected) <= 1e-12


def test_partial_trace_of_psi_lambda():
    rho = density_matrix(psi_lambda(0.3))
    assert np.allclose(partial_trace(rho, (2, 2)), np.diag([0.3, 0.7]))
    assert np.allclose(partial_trace(rho, (2, 2), keep="B"), np.diag([0.7, 0.3]))


def test_partial_trace_spectra_agree(rng):
    vector = random_bipartite(rng, (2, 3))
    rho = density_matrix(vector)
    spectrum_a = np.linalg.eigvalsh(partial_trace(rho, (2, 3), keep="A"))
    spectrum_b = np.linalg.eigvalsh(partial_trace(rho, (2, 3), keep="B"))
    assert np.allclose(np.sort(spectrum_b)[-2:], np.sort(spectrum_a))
    assert np.sort(spectrum_b)[0] == pytest.approx(0.0, abs=1e-12)


def test_partial_trace_of_product_is_pure():
    product = BipartiteVector((2, 2), np.kron([0.6, 0.8], [1.0, 0.0]))
    reduced = partial_trace(density_matrix(product), (2, 2))
    assert np.linalg.matrix_rank(reduced, tol=1e-10) == 1


def test_partial_trace_validation():
    with pytest.raises(ShapeMismatchError):
        partial_trace(np.eye(3) / 3, (2, 2))
    with pytest.raises(ValueError):
        partial_trace(np.eye(4) / 4, (2, 2), keep="C")


def test_schmidt_coefficients():
    assert np.allclose(schmidt(psi_lambda(0.3)).coefficients, [np.sqrt(0.7), np.sqrt(0.3)])
    assert np.allclose(schmidt(BipartiteVector((2, 2), [1, 0, 0, 0])).coefficients, [1, 0])
    assert np.allclose(schmidt(psi_lambda(0.5)).coefficients, [1 / np.sqrt(2)] * 2)
    assert schmidt_rank(psi_lambda(0.3)) == 2


def test_schmidt_reconstructs_vector(rng):
    for _ in range(200):
        vector = random_bipartite(rng, (3, 2))
        decomposition = schmidt(vector)
        assert np.allclose(decomposition.reconstruct(), vector.amplitudes)
        squares = decomposition.coefficients ** 2
        reduced = partial_trace(density_matrix(vector), (3, 2), keep="B")
        assert np.allclose(np.sort(np.linalg.eigvalsh(reduced)), np.sort(squares))


@pytest.mark.parametrize("lam", [0.3, 1.0])
def test_restriction_matches_partial_trace(lam):
    assert restriction_matches_partial_trace(psi_lambda(lam)) <= 1e-12
    assert restriction_matches_partial_trace(psi_lambda(lam), keep="B") <= 1e-12


def test_restriction_matches_partial_trace_random(rng):
    for _ in range(50):
        assert restriction_matches_partial_trace(random_bipartite(rng, (2, 3))) <= 1e-12
