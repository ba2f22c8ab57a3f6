import numpy as np
import pytest

from app.algebra import (
    AlgebraElement,
    Embedding,
    check_embedding,
    embed_left_factor,
    embed_right_factor,
    identity_embedding,
    left_multiplication_matrix,
    make_algebra,
    matrix_unit,
    operator_norm,
    random_element,
    star_permutation,
    tensor,
)
from app.exceptions import IndexOutOfRangeError, InvalidSpecError, ShapeMismatchError, UnsupportedError


def test_matrix_unit_layout(m2):
    e11 = matrix_unit(m2, 0, 0, 0)
    assert np.array_equal(e11.data[0], [[1, 0], [0, 0]])


def test_unit_relations(m2):
    e11, e12, e21, e22 = (matrix_unit(m2, 0, i, j) for i in range(2) for j in range(2))
    one = AlgebraElement.identity(m2)
    assert (e12 @ e21).allclose(e11)
    assert e12.adjoint().allclose(e21)
    assert (e11 + e22).allclose(one)
    assert (e12 @ e12).allclose(AlgebraElement.zero(m2))


def test_unit_enumeration_is_row_major():
    spec = make_algebra([2, 3])
    assert spec.dim == 13
    assert spec.offsets == (0, 4)
    assert spec.unit_index(0, 1, 0) == 2
    assert spec.unit_index(1, 0, 2) == 6
    assert spec.units()[6] == (1, 0, 2)


@pytest.mark.parametrize("blocks", [[], [0], [2, -1], [2.5]])
def test_make_algebra_rejects_bad_blocks(blocks):
    with pytest.raises(InvalidSpecError):
        make_algebra(blocks)


def test_unit_index_out_of_range(m2):
    with pytest.raises(IndexOutOfRangeError):
        matrix_unit(m2, 0, 2, 0)
    with pytest.raises(IndexError):
        m2.unit_index(1, 0, 0)


def test_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        AlgebraElement(make_algebra([2]), (np.eye(3),))
    with pytest.raises(ShapeMismatchError):
        AlgebraElement.identity(make_algebra([2])) + AlgebraElement.identity(make_algebra([3]))


def test_identity_and_adjoint_axioms(rng):
    spec = make_algebra([2, 3])
    one = AlgebraElement.identity(spec)
    for _ in range(20):
        a = random_element(spec, rng)
        b = random_element(spec, rng)
        assert (a @ one).allclose(a)
        assert (a @ b).adjoint().allclose(b.adjoint() @ a.adjoint())


def test_coefficients_round_trip(rng):
    spec = make_algebra([1, 2])
    a = random_element(spec, rng)
    assert AlgebraElement.from_coefficients(spec, a.coefficients()).allclose(a)


def test_norms(m2, rng):
    assert operator_norm(AlgebraElement.identity(m2)) == pytest.approx(1.0)
    assert operator_norm(matrix_unit(m2, 0, 0, 1)) == pytest.approx(1.0)
    spec = make_algebra([2, 3])
    for _ in range(200):
        a = random_element(spec, rng)
        assert operator_norm(a @ a.adjoint()) == pytest.approx(operator_norm(a) ** 2, rel=1e-10)


def test_left_multiplication_matrix(rng):
    spec = make_algebra([2, 2])
    a, b = random_element(spec, rng), random_element(spec, rng)
    assert np.allclose(left_multiplication_matrix(a) @ b.coefficients(), (a @ b).coefficients())


def test_star_permutation(rng):
    spec = make_algebra([3, 1])
    a = random_element(spec, rng)
    assert np.allclose(star_permutation(spec) @ np.conj(a.coefficients()), a.adjoint().coefficients())


def test_tensor_products(m2, rng):
    tp = tensor(m2, m2)
    one2 = AlgebraElement.identity(m2)
    assert tp.product(one2, one2).allclose(AlgebraElement.identity(tp.spec))

    product = tp.product(matrix_unit(m2, 0, 0, 0), matrix_unit(m2, 0, 1, 1)).data[0]
    assert np.count_nonzero(product) == 1
    assert product[1, 1] == 1
    product = tp.product(matrix_unit(m2, 0, 0, 1), matrix_unit(m2, 0, 1, 1)).data[0]
    assert np.count_nonzero(product) == 1
    assert product[1, 3] == 1

    a, b = random_element(m2, rng), random_element(m2, rng)
    assert (tp.product(a, one2) @ tp.product(one2, b)).allclose(tp.product(a, b))


def test_tensor_rejects_multi_block(m2):
    with pytest.raises(UnsupportedError):
        tensor(make_algebra([1, 1]), m2)


def test_left_factor_embedding(m2, rng):
    iota = embed_left_factor(m2, m2)
    assert iota(AlgebraElement.identity(m2)).allclose(AlgebraElement.identity(make_algebra([4])))
    image = iota(matrix_unit(m2, 0, 0, 1)).data[0]
    assert np.array_equal(image, np.kron([[0, 1], [0, 0]], np.eye(2)))
    assert np.count_nonzero(image) == 2
    for _ in range(20):
        a, b = random_element(m2, rng), random_element(m2, rng)
        assert iota(a @ b).allclose(iota(a) @ iota(b), tol=1e-12)


def test_check_embedding_accepts_valid(m2):
    assert check_embedding(embed_left_factor(m2, m2)) == []
    assert check_embedding(embed_right_factor(m2, make_algebra([3]))) == []
    assert check_embedding(identity_embedding(make_algebra([2, 1]))) == []


def test_check_embedding_zero_images(m2):
    target = make_algebra([4])
    zero = Embedding(m2, target, tuple(AlgebraElement.zero(target) for _ in range(4)))
    kinds = {v.kind for v in check_embedding(zero)}
    assert "unital" in kinds
    assert "injective" in kinds


def test_check_embedding_star_violation(m2):
    valid = embed_left_factor(m2, m2)
    images = list(valid.images)
    images[1] = AlgebraElement(valid.target, (images[1].data[0].T,))
    broken = Embedding(m2, valid.target, tuple(images))
    kinds = {v.kind for v in check_embedding(broken)}
    assert "star" in kinds
    assert "multiplicative" in kinds


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2)])
def test_tensor_mixed_product(dims, rng):
    spec_a, spec_b = make_algebra([dims[0]]), make_algebra([dims[1]])
    tp = tensor(spec_a, spec_b)
    for _ in range(5):
        a, c = random_element(spec_a, rng), random_element(spec_a, rng)
        b, d = random_element(spec_b, rng), random_element(spec_b, rng)
        assert (tp.product(a, b) @ tp.product(c, d)).allclose(tp.product(a @ c, b @ d), tol=1e-10)
