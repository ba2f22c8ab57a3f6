"""States on block algebras, restriction along embeddings, and the bipartite
cross-checks (partial trace, Schmidt decomposition).

A state is stored by its block weights sigma_k, so that
omega(a) = sum_k trace(sigma_k a_k). Single-qubit basis convention:
|+> = (1, 0), |-> = (0, 1); bipartite vectors are row-major over (A, B).
"""

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.linalg import block_diag

from .algebra import (
    AlgebraElement,
    _frozen,
    BlockSpec,
    Embedding,
    check_embedding,
    embed_left_factor,
    embed_right_factor,
    make_algebra,
    matrix_unit,
)
from .exceptions import InvalidEmbeddingError, InvalidStateError, ShapeMismatchError
from .log import logger

POSITIVITY_TOL = 1e-12
NORMALIZATION_TOL = 1e-12
HERMITICITY_TOL = 1e-10
VECTOR_NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class State:
    spec: BlockSpec
    weights: Tuple[np.ndarray, ...]

    def functional(self) -> np.ndarray:
        """Vector w with omega(a) = w . coefficients(a)."""
        return np.concatenate([sigma.T.reshape(-1) for sigma in self.weights])

    def evaluate(self, a: AlgebraElement) -> complex:
        return evaluate(self, a)

    def is_faithful(self, tol: float = 1e-10) -> bool:
        return all(np.linalg.eigvalsh(sigma).min() > tol for sigma in self.weights)

    def density(self) -> np.ndarray:
        """Block-diagonal weight matrix."""
        return block_diag(*self.weights)


def make_state(spec: BlockSpec, weights: Sequence) -> State:
    """Validate block weights and build a State.

    Eigenvalues in (-1e-12, 0) are clamped to zero; anything more negative,
    non-Hermitian input or a total trace away from one is rejected.
    """
    weights = list(weights)
    if len(weights) != spec.num_blocks:
        raise ShapeMismatchError(f"state needs {spec.num_blocks} weight blocks, got {len(weights)}")
    cleaned = []
    total = 0.0
    for k, (sigma, n) in enumerate(zip(weights, spec.blocks)):
        sigma = np.asarray(sigma, dtype=complex)
        if sigma.shape != (n, n):
            raise ShapeMismatchError(f"weight block {k} has shape {sigma.shape}, expected ({n}, {n})")
        if np.max(np.abs(sigma - sigma.conj().T)) > HERMITICITY_TOL:
            raise InvalidStateError(f"weight block {k} is not Hermitian")
        sigma = (sigma + sigma.conj().T) / 2
        eigenvalues, vectors = np.linalg.eigh(sigma)
        if eigenvalues.min() < -POSITIVITY_TOL:
            raise InvalidStateError(
                f"state not positive: block {k} has eigenvalue {eigenvalues.min():.3e}"
            )
        if eigenvalues.min() < 0:
            sigma = (vectors * np.clip(eigenvalues, 0.0, None)) @ vectors.conj().T
        total += float(np.trace(sigma).real)
        cleaned.append(_frozen(sigma))
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise InvalidStateError(f"state not normalized: total trace {total:.12g}")
    return State(spec, tuple(cleaned))


def diagonal_state(spec: BlockSpec, weights: Sequence[float]) -> State:
    """omega(a) = sum_i lambda_i a_ii on a single-block algebra."""
    if not spec.is_simple():
        raise ShapeMismatchError("diagonal states are defined on single-block algebras")
    return make_state(spec, [np.diag(np.asarray(weights, dtype=float))])


def tracial_state(spec: BlockSpec) -> State:
    """The normalized trace, weighted by block dimension."""
    total = sum(spec.blocks)
    return make_state(spec, [np.eye(n) / total for n in spec.blocks])


def evaluate(state: State, a: AlgebraElement) -> complex:
    if a.spec != state.spec:
        raise ShapeMismatchError(
            f"algebra mismatch: state on {list(state.spec.blocks)}, element on {list(a.spec.blocks)}"
        )
    return complex(sum(np.einsum("ij,ji->", sigma, block) for sigma, block in zip(state.weights, a.data)))


@dataclass(frozen=True, eq=False)
class BipartiteVector:
    dims: Tuple[int, int]
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = _frozen(np.reshape(self.amplitudes, -1))
        n_a, n_b = self.dims
        if amplitudes.shape != (n_a * n_b,):
            raise ShapeMismatchError(
                f"bipartite vector of dims {self.dims} needs {n_a * n_b} amplitudes, got {amplitudes.size}"
            )
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > NORMALIZATION_TOL:
            raise InvalidStateError(f"bipartite vector is not normalized: norm {norm:.12g}")
        object.__setattr__(self, "dims", (int(n_a), int(n_b)))
        object.__setattr__(self, "amplitudes", amplitudes)

    def as_matrix(self) -> np.ndarray:
        """n_A x n_B coefficient matrix."""
        return self.amplitudes.reshape(self.dims)


def density_matrix(vector: Union[BipartiteVector, np.ndarray]) -> np.ndarray:
    v = vector.amplitudes if isinstance(vector, BipartiteVector) else np.asarray(vector, dtype=complex)
    return np.outer(v, v.conj())


def vector_state(vector: Union[BipartiteVector, np.ndarray], spec: BlockSpec) -> State:
    """Pure state a -> <v|a|v> on a single-block algebra."""
    if not spec.is_simple():
        raise ShapeMismatchError("vector states are defined on single-block algebras")
    v = vector.amplitudes if isinstance(vector, BipartiteVector) else np.asarray(vector, dtype=complex)
    if v.shape != (spec.blocks[0],):
        raise ShapeMismatchError(f"vector of length {v.size} does not match block size {spec.blocks[0]}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > VECTOR_NORM_TOL:
        raise InvalidStateError(f"state vector is not normalized: norm {norm:.12g}")
    return make_state(spec, [density_matrix(v / norm)])


def psi_lambda(lam: float) -> BipartiteVector:
    """sqrt(lam)|+,-> + sqrt(1-lam)|-,+> on C^2 (x) C^2."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidStateError(f"lambda must lie in [0, 1], got {lam}")
    amplitudes = np.zeros(4, dtype=complex)
    amplitudes[1] = np.sqrt(lam)
    amplitudes[2] = np.sqrt(1.0 - lam)
    return BipartiteVector((2, 2), amplitudes)


def restrict(state: State, embedding: Embedding, validate: bool = True) -> State:
    """Compose the state with the embedding: omega_0(x) = omega(i(x)).

    The source functional is the transpose of the embedding matrix applied to
    the target functional, read back into block weights.
    """
    if embedding.target != state.spec:
        raise ShapeMismatchError(
            f"embedding targets {list(embedding.target.blocks)}, state lives on {list(state.spec.blocks)}"
        )
    if validate:
        violations = check_embedding(embedding)
        if violations:
            kinds = sorted({v.kind for v in violations})
            raise InvalidEmbeddingError(f"embedding is not a unital *-homomorphism: {', '.join(kinds)}")
    functional = embedding.matrix.T @ state.functional()
    source = embedding.source
    weights = [
        functional[offset:offset + n * n].reshape(n, n).T
        for offset, n in zip(source.offsets, source.blocks)
    ]
    logger.debug(f"Restricted state from {list(state.spec.blocks)} to {list(source.blocks)}")
    return make_state(source, weights)


def partial_trace(rho: np.ndarray, dims: Tuple[int, int], keep: str = "A") -> np.ndarray:
    """Reduced density matrix of one tensor factor; keep='A' traces out B."""
    rho = np.asarray(rho, dtype=complex)
    n_a, n_b = dims
    if rho.shape != (n_a * n_b, n_a * n_b):
        raise ShapeMismatchError(f"matrix of shape {rho.shape} does not factorize as {n_a} x {n_b}")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise InvalidStateError("density matrix must have unit trace")
    tensor = rho.reshape(n_a, n_b, n_a, n_b)
    if keep == "A":
        return np.einsum("ijkj->ik", tensor)
    if keep == "B":
        return np.einsum("ijil->jl", tensor)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return sum(
            c * np.kron(self.left[:, k], self.right[:, k])
            for k, c in enumerate(self.coefficients)
        )


def schmidt(vector: BipartiteVector) -> SchmidtDecomposition:
    """SVD of the coefficient matrix; coefficients descending, bases as columns."""
    u, s, vh = np.linalg.svd(vector.as_matrix())
    r = len(s)
    return SchmidtDecomposition(coefficients=s, left=u[:, :r], right=vh[:r, :].T)


def schmidt_rank(vector: BipartiteVector, tol: float = 1e-10) -> int:
    return int(np.sum(schmidt(vector).coefficients > tol))


def is_separable(vector: BipartiteVector, tol: float = 1e-10) -> bool:
    return schmidt_rank(vector, tol) == 1


def restriction_matches_partial_trace(vector: BipartiteVector, keep: str = "A") -> float:
    """Largest gap between restricting the vector state and tracing out a factor.

    Compared over all matrix units of the kept factor.
    """
    n_a, n_b = vector.dims
    spec_a, spec_b = make_algebra([n_a]), make_algebra([n_b])
    embedding = embed_left_factor(spec_a, spec_b) if keep == "A" else embed_right_factor(spec_a, spec_b)
    state = vector_state(vector, embedding.target)
    restricted = restrict(state, embedding, validate=False)
    reduced = partial_trace(density_matrix(vector), vector.dims, keep=keep)
    source = embedding.source
    deviation = 0.0
    for unit in source.units():
        alpha = matrix_unit(source, *unit)
        expected = np.trace(reduced @ alpha.data[0])
        deviation = max(deviation, abs(restricted.evaluate(alpha) - expected))
    return float(deviation)
