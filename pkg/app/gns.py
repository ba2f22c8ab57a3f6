"""GNS construction for states on block algebras.

The algebra itself, with coordinates over matrix units, is the pre-Hilbert
space; the state's Gram form <a, b> = omega(a* b) is diagonalized once, its
kernel is the null ideal, and the remaining eigenvectors scaled by
1/sqrt(eigenvalue) give an orthonormal basis of the quotient. In finite
dimensions the completion step is the identity.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional

import numpy as np
from scipy.linalg import block_diag

from .algebra import AlgebraElement, BlockSpec, left_multiplication_matrix, matrix_unit
from .exceptions import NumericalDegeneracyError, ShapeMismatchError, ValidationError
from .log import logger
from .states import State

DEFAULT_NULL_TOL = 1e-10
MAX_CONDITION = 1e12
LEFT_IDEAL_TOL = 1e-10


def gram_matrix(spec: BlockSpec, state: State) -> np.ndarray:
    """G[u, v] = omega(u* v) over the matrix-unit enumeration.

    Within block k, omega(e_ij* e_i'j') = delta_ii' sigma_k[j', j], so each
    block of G is 1 (x) sigma_k^T and units of different blocks are orthogonal.
    """
    if state.spec != spec:
        raise ShapeMismatchError(
            f"state lives on {list(state.spec.blocks)}, Gram requested for {list(spec.blocks)}"
        )
    return block_diag(*[np.kron(np.eye(n), sigma.T) for n, sigma in zip(spec.blocks, state.weights)])


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first non-negligible entry is real positive."""
    out = vectors.copy()
    for col in range(out.shape[1]):
        column = out[:, col]
        nonzero = np.flatnonzero(np.abs(column) > 1e-12)
        if nonzero.size:
            pivot = column[nonzero[0]]
            out[:, col] = column * (abs(pivot) / pivot)
    return out


def _split_spectrum(gram: np.ndarray, tol: float):
    """Eigendecomposition sorted by descending eigenvalue, with the kept mask."""
    eigenvalues, vectors = np.linalg.eigh((gram + gram.conj().T) / 2)
    order = np.argsort(-eigenvalues, kind="stable")
    eigenvalues, vectors = eigenvalues[order], _fix_phases(vectors[:, order])
    cutoff = tol * max(eigenvalues.max(initial=0.0), 0.0)
    return eigenvalues, vectors, eigenvalues > cutoff


def _check_left_ideal(spec: BlockSpec, basis: np.ndarray):
    deviation = left_ideal_deviation(spec, basis)
    if deviation > LEFT_IDEAL_TOL:
        raise NumericalDegeneracyError(
            f"null space is not a left ideal (deviation {deviation:.3e}); try another cutoff"
        )


def null_ideal(
    gram: np.ndarray,
    tol: float = DEFAULT_NULL_TOL,
    spec: Optional[BlockSpec] = None,
) -> np.ndarray:
    """Orthonormal basis (columns) of the null ideal of the Gram form.

    Eigenvectors with eigenvalue below tol * max eigenvalue. When the algebra
    is given, closure under left multiplication by every matrix unit is checked.
    """
    _, vectors, kept = _split_spectrum(gram, tol)
    basis = vectors[:, ~kept]
    if spec is not None:
        _check_left_ideal(spec, basis)
    return basis


def left_ideal_deviation(spec: BlockSpec, basis: np.ndarray) -> float:
    """Largest component of u.v outside span(basis), over units u and columns v."""
    if not basis.shape[1]:
        return 0.0
    complement = np.eye(spec.dim) - basis @ basis.conj().T
    deviation = 0.0
    for unit in spec.units():
        moved = left_multiplication_matrix(matrix_unit(spec, *unit)) @ basis
        deviation = max(deviation, float(np.max(np.abs(complement @ moved))))
    return deviation


@dataclass(frozen=True, eq=False)
class GNSData:
    """Output of the GNS construction.

    quotient_basis holds unit coordinates of d representatives, orthonormal
    under the Gram form; quotient_map sends unit coordinates of any element to
    the orthonormal coordinates of its class.
    """

    spec: BlockSpec
    state: State
    gram: np.ndarray
    gram_spectrum: np.ndarray
    null_basis: np.ndarray
    quotient_basis: np.ndarray
    quotient_map: np.ndarray
    cyclic: np.ndarray

    @property
    def hilbert_dim(self) -> int:
        return self.quotient_basis.shape[1]

    @property
    def null_dim(self) -> int:
        return self.null_basis.shape[1]

    def is_faithful(self) -> bool:
        return self.null_dim == 0

    def vector(self, a: AlgebraElement) -> np.ndarray:
        """Coordinates of the class [a]."""
        if a.spec != self.spec:
            raise ShapeMismatchError("element does not belong to the represented algebra")
        return self.quotient_map @ a.coefficients()

    def rep(self, a: AlgebraElement) -> np.ndarray:
        if a.spec != self.spec:
            raise ShapeMismatchError("element does not belong to the represented algebra")
        return self.quotient_map @ left_multiplication_matrix(a) @ self.quotient_basis

    @cached_property
    def unit_reps(self) -> List[np.ndarray]:
        """Representatives of all matrix units, in enumeration order."""
        return [self.rep(matrix_unit(self.spec, *unit)) for unit in self.spec.units()]


def build_gns(spec: BlockSpec, state: State, tol: float = DEFAULT_NULL_TOL) -> GNSData:
    if not tol > 0:
        raise ValidationError(f"null-space tolerance must be positive, got {tol}")
    gram = gram_matrix(spec, state)
    eigenvalues, vectors, kept = _split_spectrum(gram, tol)
    null_basis = vectors[:, ~kept]
    _check_left_ideal(spec, null_basis)

    retained = eigenvalues[kept]
    if retained.size == 0 or retained.min() <= 0:
        raise NumericalDegeneracyError("Gram form has no positive eigenvalues above the cutoff")
    condition = retained.max() / retained.min()
    if condition > MAX_CONDITION:
        raise NumericalDegeneracyError(
            f"quotient basis condition number {condition:.3e} exceeds {MAX_CONDITION:.0e}"
        )
    quotient_basis = vectors[:, kept] / np.sqrt(retained)
    quotient_map = quotient_basis.conj().T @ gram
    cyclic = quotient_map @ AlgebraElement.identity(spec).coefficients()

    for array in (gram, eigenvalues, null_basis, quotient_basis, quotient_map, cyclic):
        array.setflags(write=False)
    logger.debug(
        f"GNS for {list(spec.blocks)}: algebra dim {spec.dim}, null dim {null_basis.shape[1]}, "
        f"Hilbert dim {quotient_basis.shape[1]}"
    )
    return GNSData(
        spec=spec,
        state=state,
        gram=gram,
        gram_spectrum=eigenvalues,
        null_basis=null_basis,
        quotient_basis=quotient_basis,
        quotient_map=quotient_map,
        cyclic=cyclic,
    )


def represent(g: GNSData, a: AlgebraElement) -> np.ndarray:
    return g.rep(a)


def check_cyclic(g: GNSData, vector: Optional[np.ndarray] = None, tol: float = 1e-10) -> bool:
    """True when rep(u) v over all matrix units u spans the GNS space.

    v defaults to the cyclic vector of the construction.
    """
    v = g.cyclic if vector is None else np.asarray(vector, dtype=complex)
    orbit = np.column_stack([rep @ v for rep in g.unit_reps])
    return int(np.linalg.matrix_rank(orbit, tol=tol)) == g.hilbert_dim
