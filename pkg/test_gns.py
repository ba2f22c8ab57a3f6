import numpy as np
import pytest

from app.algebra import AlgebraElement, make_algebra, matrix_unit, random_element
from app.exceptions import NumericalDegeneracyError, ValidationError
from app.gns import (
    build_gns,
    check_cyclic,
    gram_matrix,
    left_ideal_deviation,
    null_ideal,
    represent,
)
from app.states import diagonal_state, make_state, tracial_state, vector_state


def faithful_state(spec, rng):
    """Random faithful state: positive definite weights scaled to unit total trace."""
    weights = []
    for n in spec.blocks:
        x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        weights.append(x @ x.conj().T + 0.1 * np.eye(n))
    total = sum(np.trace(w).real for w in weights)
    return make_state(spec, [w / total for w in weights])


def test_gram_of_diagonal_state(m2, diag_state):
    gram = gram_matrix(m2, diag_state)
    assert np.allclose(gram, np.diag([0.25, 0.75, 0.25, 0.75]))


def test_gram_of_tracial_state(m2, tracial_m2):
    assert np.allclose(gram_matrix(m2, tracial_m2), np.eye(4) / 2)


def test_gram_matches_state_on_products(rng):
    spec = make_algebra([2, 3])
    state = faithful_state(spec, rng)
    gram = gram_matrix(spec, state)
    assert np.allclose(gram, gram.conj().T)
    assert np.linalg.eigvalsh(gram).min() > 0
    for _ in range(10):
        a, b = random_element(spec, rng), random_element(spec, rng)
        value = a.coefficients().conj() @ gram @ b.coefficients()
        assert value == pytest.approx(state.evaluate(a.adjoint() @ b))


def test_pure_state_gram_rank(m2):
    state = diagonal_state(m2, [1.0, 0.0])
    assert np.linalg.matrix_rank(gram_matrix(m2, state)) == 2


def test_null_ideal(m2, diag_state, tracial_m2):
    assert null_ideal(gram_matrix(m2, diag_state)).shape == (4, 0)
    assert null_ideal(gram_matrix(m2, tracial_m2)).shape == (4, 0)
    pure = diagonal_state(m2, [1.0, 0.0])
    basis = null_ideal(gram_matrix(m2, pure), spec=m2)
    assert basis.shape == (4, 2)
    assert left_ideal_deviation(m2, basis) <= 1e-10


def test_hilbert_dimensions(m2, diag_state):
    assert build_gns(m2, diag_state).hilbert_dim == 4
    pure = diagonal_state(m2, [1.0, 0.0])
    g = build_gns(m2, pure)
    assert g.hilbert_dim == 2
    assert g.null_dim == 2
    spec = make_algebra([2, 3])
    assert build_gns(spec, tracial_state(spec)).hilbert_dim == 13


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dimension_law(n, rng):
    spec = make_algebra([n])
    assert build_gns(spec, faithful_state(spec, rng)).hilbert_dim == n * n
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    pure = vector_state(v / np.linalg.norm(v), spec)
    assert build_gns(spec, pure).hilbert_dim == n


@pytest.mark.parametrize("blocks", [[2], [3], [2, 3], [1, 2]])
def test_construction_invariants(blocks, rng):
    spec = make_algebra(blocks)
    state = faithful_state(spec, rng)
    g = build_gns(spec, state)
    d = g.hilbert_dim

    overlaps = g.quotient_basis.conj().T @ g.gram @ g.quotient_basis
    assert np.allclose(overlaps, np.eye(d), atol=1e-10)
    assert np.allclose(represent(g, AlgebraElement.identity(spec)), np.eye(d), atol=1e-10)

    for _ in range(100):
        a, b = random_element(spec, rng), random_element(spec, rng)
        assert np.allclose(g.rep(a @ b), g.rep(a) @ g.rep(b), atol=1e-10)
        assert np.allclose(g.rep(a.adjoint()), g.rep(a).conj().T, atol=1e-10)
        assert abs(g.cyclic.conj() @ g.rep(a) @ g.cyclic - state.evaluate(a)) <= 1e-10
    assert check_cyclic(g)


def test_unit_representatives(m2, diag_state):
    g = build_gns(m2, diag_state)
    e11, e12, e21 = matrix_unit(m2, 0, 0, 0), matrix_unit(m2, 0, 0, 1), matrix_unit(m2, 0, 1, 0)
    assert np.allclose(g.rep(e12) @ g.rep(e21), g.rep(e11))
    assert len(g.unit_reps) == 4


def test_pairing_on_pure_state(m2, rng):
    state = diagonal_state(m2, [1.0, 0.0])
    g = build_gns(m2, state)
    for _ in range(20):
        a = random_element(m2, rng)
        assert abs(g.cyclic.conj() @ g.rep(a) @ g.cyclic - state.evaluate(a)) <= 1e-10


def test_cyclicity_fails_for_vector_in_one_summand():
    spec = make_algebra([2, 2])
    state = make_state(spec, [np.diag([0.1, 0.2]), np.diag([0.3, 0.4])])
    g = build_gns(spec, state)
    assert check_cyclic(g)
    v = np.zeros(g.hilbert_dim, dtype=complex)
    v[0] = 1.0
    assert not check_cyclic(g, v)


def test_one_dimensional_algebra():
    spec = make_algebra([1])
    g = build_gns(spec, tracial_state(spec))
    assert g.hilbert_dim == 1
    assert check_cyclic(g)


def test_ill_conditioned_quotient(m2):
    state = diagonal_state(m2, [1.0 - 1e-13, 1e-13])
    with pytest.raises(NumericalDegeneracyError):
        build_gns(m2, state, tol=1e-15)
    assert build_gns(m2, state).hilbert_dim == 2


@pytest.mark.parametrize("tol", [0.0, -1.0, float("nan")])
def test_non_positive_cutoff_is_rejected(m2, diag_state, tol):
    with pytest.raises(ValidationError):
        build_gns(m2, diag_state, tol=tol)
