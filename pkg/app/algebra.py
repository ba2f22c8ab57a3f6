"""Finite-dimensional C*-algebras as direct sums of full matrix algebras.

An algebra is fixed by its block sizes ``[n_1, ..., n_K]``. Elements are stored
blockwise; the matrix units ``e_ij`` of block ``k`` are enumerated in
(block, row, col) row-major order, and that enumeration defines the coefficient
vector of an element used throughout the package.
"""

from dataclasses import dataclass
from typing import Callable, List, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.linalg import block_diag

from .exceptions import (
    IndexOutOfRangeError,
    InvalidSpecError,
    ShapeMismatchError,
    UnsupportedError,
)


def _frozen(matrix) -> np.ndarray:
    out = np.array(matrix, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class BlockSpec:
    """Matrix sizes of the simple summands of the algebra."""

    blocks: Tuple[int, ...]

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def dim(self) -> int:
        """Linear dimension of the algebra, sum of n_k squared."""
        return sum(n * n for n in self.blocks)

    @property
    def offsets(self) -> Tuple[int, ...]:
        out, acc = [], 0
        for n in self.blocks:
            out.append(acc)
            acc += n * n
        return tuple(out)

    def unit_index(self, k: int, i: int, j: int) -> int:
        """Position of e_ij in block k within the unit enumeration."""
        if not 0 <= k < self.num_blocks:
            raise IndexOutOfRangeError(f"block index {k} out of range for {list(self.blocks)}")
        n = self.blocks[k]
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRangeError(f"unit ({i}, {j}) out of range for block {k} of size {n}")
        return self.offsets[k] + i * n + j

    def units(self) -> List[Tuple[int, int, int]]:
        """All (block, row, col) triples in enumeration order."""
        return [(k, i, j) for k, n in enumerate(self.blocks) for i in range(n) for j in range(n)]

    def is_simple(self) -> bool:
        return self.num_blocks == 1


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    spec: BlockSpec
    data: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.data) != self.spec.num_blocks:
            raise ShapeMismatchError(
                f"element has {len(self.data)} blocks, algebra {list(self.spec.blocks)} has {self.spec.num_blocks}"
            )
        frozen = []
        for k, (block, n) in enumerate(zip(self.data, self.spec.blocks)):
            block = _frozen(block)
            if block.shape != (n, n):
                raise ShapeMismatchError(f"block {k} has shape {block.shape}, expected ({n}, {n})")
            frozen.append(block)
        object.__setattr__(self, "data", tuple(frozen))

    @classmethod
    def identity(cls, spec: BlockSpec) -> "AlgebraElement":
        return cls(spec, tuple(np.eye(n) for n in spec.blocks))

    @classmethod
    def zero(cls, spec: BlockSpec) -> "AlgebraElement":
        return cls(spec, tuple(np.zeros((n, n)) for n in spec.blocks))

    @classmethod
    def from_coefficients(cls, spec: BlockSpec, coefficients: Sequence[complex]) -> "AlgebraElement":
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != (spec.dim,):
            raise ShapeMismatchError(f"expected {spec.dim} coefficients, got shape {coefficients.shape}")
        blocks = [
            coefficients[offset:offset + n * n].reshape(n, n)
            for offset, n in zip(spec.offsets, spec.blocks)
        ]
        return cls(spec, tuple(blocks))

    def coefficients(self) -> np.ndarray:
        """Coordinates over the matrix-unit basis."""
        return np.concatenate([block.reshape(-1) for block in self.data])

    def to_matrix(self) -> np.ndarray:
        """Block-diagonal matrix form."""
        return block_diag(*self.data)

    def _check(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if other.spec != self.spec:
            raise ShapeMismatchError(
                f"algebra mismatch: {list(self.spec.blocks)} vs {list(other.spec.blocks)}"
            )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.spec, tuple(a + b for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.spec, tuple(a - b for a, b in zip(self.data, other.data)))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, tuple(-a for a in self.data))

    def __mul__(self, scalar: complex) -> "AlgebraElement":
        return AlgebraElement(self.spec, tuple(scalar * a for a in self.data))

    __rmul__ = __mul__

    def __matmul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.spec, tuple(a @ b for a, b in zip(self.data, other.data)))

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.spec, tuple(a.conj().T for a in self.data))

    def distance(self, other: "AlgebraElement") -> float:
        """Largest absolute entry difference."""
        self._check(other)
        return max(float(np.max(np.abs(a - b))) for a, b in zip(self.data, other.data))

    def allclose(self, other: "AlgebraElement", tol: float = 1e-12) -> bool:
        return self.distance(other) <= tol

    def __repr__(self) -> str:
        return f"AlgebraElement(blocks={list(self.spec.blocks)})"


def make_algebra(blocks: Sequence[int]) -> BlockSpec:
    """Validate block sizes and return the algebra they describe."""
    blocks = list(blocks)
    if not blocks:
        raise InvalidSpecError("block list must not be empty")
    for n in blocks:
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
            raise InvalidSpecError(f"block sizes must be positive integers, got {n!r}")
    return BlockSpec(tuple(int(n) for n in blocks))


def matrix_unit(spec: BlockSpec, k: int, i: int, j: int) -> AlgebraElement:
    coefficients = np.zeros(spec.dim, dtype=complex)
    coefficients[spec.unit_index(k, i, j)] = 1.0
    return AlgebraElement.from_coefficients(spec, coefficients)


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a @ b


def adjoint(a: AlgebraElement) -> AlgebraElement:
    return a.adjoint()


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a + b


def scale(a: AlgebraElement, scalar: complex) -> AlgebraElement:
    return a * scalar


def operator_norm(a: AlgebraElement) -> float:
    """Largest singular value over all blocks."""
    return max(float(np.linalg.norm(block, 2)) for block in a.data)


def random_element(spec: BlockSpec, rng: np.random.Generator) -> AlgebraElement:
    """Element with independent standard complex normal entries."""
    blocks = [
        (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
        for n in spec.blocks
    ]
    return AlgebraElement(spec, tuple(blocks))


def left_multiplication_matrix(a: AlgebraElement) -> np.ndarray:
    """Matrix of b -> ab acting on unit coordinates."""
    return block_diag(*[np.kron(block, np.eye(n)) for block, n in zip(a.data, a.spec.blocks)])


def star_permutation(spec: BlockSpec) -> np.ndarray:
    """Permutation taking the coordinates of a to the conjugated coordinates of a*."""
    perm = np.zeros((spec.dim, spec.dim))
    for k, i, j in spec.units():
        perm[spec.unit_index(k, j, i), spec.unit_index(k, i, j)] = 1.0
    return perm


class TensorProduct(NamedTuple):
    spec: BlockSpec
    product: Callable[[AlgebraElement, AlgebraElement], AlgebraElement]


def tensor(spec_a: BlockSpec, spec_b: BlockSpec) -> TensorProduct:
    """Tensor product of two simple algebras, left factor outer (row-major Kronecker)."""
    if not (spec_a.is_simple() and spec_b.is_simple()):
        raise UnsupportedError("tensor products are only supported for single-block algebras")
    target = BlockSpec((spec_a.blocks[0] * spec_b.blocks[0],))

    def product(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        if a.spec != spec_a or b.spec != spec_b:
            raise ShapeMismatchError("tensor factors do not match the declared algebras")
        return AlgebraElement(target, (np.kron(a.data[0], b.data[0]),))

    return TensorProduct(target, product)


@dataclass(frozen=True, eq=False)
class Embedding:
    """Linear map between algebras given by the images of the source matrix units."""

    source: BlockSpec
    target: BlockSpec
    images: Tuple[AlgebraElement, ...]

    def __post_init__(self):
        if len(self.images) != self.source.dim:
            raise ShapeMismatchError(
                f"embedding needs {self.source.dim} images, got {len(self.images)}"
            )
        for image in self.images:
            if image.spec != self.target:
                raise ShapeMismatchError("embedding image does not live in the target algebra")
        object.__setattr__(self, "images", tuple(self.images))

    @property
    def matrix(self) -> np.ndarray:
        """Target coordinates (rows) of each source unit image (columns)."""
        return np.column_stack([image.coefficients() for image in self.images])

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        if x.spec != self.source:
            raise ShapeMismatchError("element does not belong to the embedding source")
        return AlgebraElement.from_coefficients(self.target, self.matrix @ x.coefficients())

    __call__ = apply


def identity_embedding(spec: BlockSpec) -> Embedding:
    return Embedding(spec, spec, tuple(matrix_unit(spec, *unit) for unit in spec.units()))


def _factor_embedding(spec_a: BlockSpec, spec_b: BlockSpec, left: bool) -> Embedding:
    tp = tensor(spec_a, spec_b)
    source = spec_a if left else spec_b
    other = spec_b if left else spec_a
    one = AlgebraElement.identity(other)
    images = []
    for unit in source.units():
        e = matrix_unit(source, *unit)
        images.append(tp.product(e, one) if left else tp.product(one, e))
    return Embedding(source, tp.spec, tuple(images))


def embed_left_factor(spec_a: BlockSpec, spec_b: BlockSpec) -> Embedding:
    """M_n into M_{nm} by alpha -> alpha (x) 1_m."""
    return _factor_embedding(spec_a, spec_b, left=True)


def embed_right_factor(spec_a: BlockSpec, spec_b: BlockSpec) -> Embedding:
    """M_m into M_{nm} by beta -> 1_n (x) beta."""
    return _factor_embedding(spec_a, spec_b, left=False)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str
    deviation: float


def check_embedding(e: Embedding, tol: float = 1e-10) -> List[Violation]:
    """Test that an embedding is an injective unital *-homomorphism.

    Multiplicativity and *-compatibility are tested on every pair of matrix
    units. Returns one Violation per failure; an empty list means valid.
    """
    violations: List[Violation] = []
    source, target = e.source, e.target
    units = source.units()
    images = e.images

    one = AlgebraElement.identity(target)
    image_of_one = AlgebraElement.zero(target)
    for k, n in enumerate(source.blocks):
        for i in range(n):
            image_of_one = image_of_one + images[source.unit_index(k, i, i)]
    deviation = image_of_one.distance(one)
    if deviation > tol:
        violations.append(Violation("unital", "image of the identity is not the identity", deviation))

    zero = AlgebraElement.zero(target)
    for a, (k, i, j) in enumerate(units):
        for b, (k2, i2, j2) in enumerate(units):
            if k == k2 and j == i2:
                expected = images[source.unit_index(k, i, j2)]
            else:
                expected = zero
            deviation = (images[a] @ images[b]).distance(expected)
            if deviation > tol:
                violations.append(Violation(
                    "multiplicative",
                    f"i(e{(k, i, j)}) i(e{(k2, i2, j2)}) != i(e{(k, i, j)} e{(k2, i2, j2)})",
                    deviation,
                ))
        deviation = images[a].adjoint().distance(images[source.unit_index(k, j, i)])
        if deviation > tol:
            violations.append(Violation("star", f"i(e{(k, i, j)})* != i(e{(k, j, i)})", deviation))

    singular_values = np.linalg.svd(e.matrix, compute_uv=False)
    rank = int(np.sum(singular_values > tol * max(1.0, singular_values.max(initial=0.0))))
    if rank < source.dim:
        violations.append(Violation(
            "injective",
            f"images span {rank} dimensions, source has {source.dim}",
            float(singular_values.min(initial=0.0)),
        ))
    return violations
