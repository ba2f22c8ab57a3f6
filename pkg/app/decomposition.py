"""Commutant, irreducible decomposition of the GNS space, and the density
operator rho = sum_k P_k |Omega><Omega| P_k.

Irreducible subspaces are found by diagonalizing a random Hermitian element of
the commutant: its eigenspaces refine the isotypic components into irreducible
invariant subspaces. The draw is seeded and certified.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from .algebra import AlgebraElement, matrix_unit, random_element
from .exceptions import InvalidDensityError, InvalidFamilyError, NumericalDegeneracyError
from .gns import GNSData
from .log import logger
from .states import State

COMMUTANT_RCOND = 1e-10
CLUSTER_TOL = 1e-10
GAP_TOL = 1e-8
MAX_RETRIES = 16
CHECK_TOL = 1e-10
SCALAR_TOL = 1e-12


def _commutator_map(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Stack of X -> AX - XA over all A, acting on row-major vec(X)."""
    d = matrices[0].shape[0]
    eye = np.eye(d)
    return np.vstack([np.kron(a, eye) - np.kron(eye, a.T) for a in matrices])


def _commutant_vectors(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Orthonormal columns spanning vec of the commutant of the given matrices."""
    return null_space(_commutator_map(matrices), rcond=COMMUTANT_RCOND)


def _as_matrices(columns: np.ndarray, d: int) -> List[np.ndarray]:
    return [columns[:, i].reshape(d, d) for i in range(columns.shape[1])]


def commutant_basis(g: GNSData) -> List[np.ndarray]:
    """Hilbert-Schmidt orthonormal basis of the commutant of rep(A)."""
    d = g.hilbert_dim
    basis = _as_matrices(_commutant_vectors(g.unit_reps), d)
    residual = max(
        (float(np.max(np.abs(x @ r - r @ x))) for x in basis for r in g.unit_reps),
        default=0.0,
    )
    if residual > CHECK_TOL:
        logger.warning(f"Commutant residual {residual:.3e} exceeds {CHECK_TOL:.0e}")
    logger.debug(f"Commutant of a {d}-dimensional representation has dimension {len(basis)}")
    return basis


def cyclic_density_on_commutant(g: GNSData, basis: Sequence[np.ndarray]) -> np.ndarray:
    """Hermitian C in the commutant with trace(C X) = <Omega|X|Omega> for X in the commutant."""
    omega = g.cyclic
    density = sum(np.conj(omega.conj() @ x @ omega) * x for x in basis)
    return (density + density.conj().T) / 2


@dataclass(frozen=True, eq=False)
class ProjectorFamily:
    dim: int
    projectors: Tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.projectors)

    def ranks(self) -> List[int]:
        return [int(round(np.trace(p).real)) for p in self.projectors]

    def issues(self, tol: float = CHECK_TOL) -> List[str]:
        """Failures of Hermiticity, idempotency, orthogonality or completeness."""
        found = []
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for k, p in enumerate(self.projectors):
            if np.max(np.abs(p - p.conj().T)) > tol:
                found.append(f"projector {k} is not Hermitian")
            if np.max(np.abs(p @ p - p)) > tol:
                found.append(f"projector {k} is not idempotent")
            for l in range(k + 1, len(self.projectors)):
                if np.max(np.abs(p @ self.projectors[l])) > tol:
                    found.append(f"projectors {k} and {l} are not orthogonal")
            total = total + p
        if np.max(np.abs(total - np.eye(self.dim))) > tol:
            found.append("projectors do not sum to the identity")
        return found

    def invariance_issues(self, g: GNSData, tol: float = CHECK_TOL) -> List[str]:
        """Projectors failing to commute with the represented algebra."""
        found = []
        for k, p in enumerate(self.projectors):
            deviation = max(float(np.max(np.abs(p @ r - r @ p))) for r in g.unit_reps)
            if deviation > tol:
                found.append(f"projector {k} does not commute with the representation ({deviation:.3e})")
        return found


def _cluster_eigenspaces(eigenvalues: np.ndarray) -> Optional[List[List[int]]]:
    """Group ascending eigenvalues into eigenspaces; None when a gap is ambiguous."""
    clusters = [[0]]
    for i in range(1, len(eigenvalues)):
        gap = eigenvalues[i] - eigenvalues[i - 1]
        if gap < CLUSTER_TOL:
            clusters[-1].append(i)
        elif gap < GAP_TOL:
            return None
        else:
            clusters.append([i])
    return clusters


def _is_irreducible(g: GNSData, vectors: np.ndarray) -> bool:
    """Invariant range whose restricted commutant is the scalars."""
    projector = vectors @ vectors.conj().T
    restricted = []
    for r in g.unit_reps:
        if np.max(np.abs(r @ projector - projector @ r)) > CHECK_TOL:
            return False
        restricted.append(vectors.conj().T @ r @ vectors)
    return _commutant_vectors(restricted).shape[1] == 1


def _draw_family(g: GNSData, basis: Sequence[np.ndarray], rng: np.random.Generator) -> Optional[ProjectorFamily]:
    coefficients = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    h = sum(c * x for c, x in zip(coefficients, basis))
    h = (h + h.conj().T) / 2
    norm = np.linalg.norm(h, 2)
    if norm == 0:
        return None
    eigenvalues, vectors = np.linalg.eigh(h / norm)
    clusters = _cluster_eigenspaces(eigenvalues)
    if clusters is None:
        return None
    projectors = []
    for cluster in clusters:
        block = vectors[:, cluster]
        if not _is_irreducible(g, block):
            return None
        projectors.append(block @ block.conj().T)
    return ProjectorFamily(g.hilbert_dim, tuple(projectors))


def _adapted_basis(g: GNSData, basis: Sequence[np.ndarray]) -> Sequence[np.ndarray]:
    """Part of the commutant that also commutes with the cyclic density.

    The density is made traceless and scaled to unit norm first, so the
    null-space cutoff is measured against its own spread and not rounding
    noise. A scalar density leaves the basis unchanged.
    """
    d = g.hilbert_dim
    density = cyclic_density_on_commutant(g, basis)
    density = density - np.trace(density) / d * np.eye(d)
    spread = np.linalg.norm(density, 2)
    if spread < SCALAR_TOL:
        return basis
    stacked = np.column_stack([x.reshape(-1) for x in basis])
    within = null_space(_commutator_map([density / spread]) @ stacked, rcond=COMMUTANT_RCOND)
    return _as_matrices(stacked @ within, d)


def irreducible_projectors(g: GNSData, seed: int = 0, adapted: bool = True) -> ProjectorFamily:
    """Decompose the GNS space into irreducible invariant subspaces.

    With adapted=True the random element is drawn from the part of the
    commutant that also commutes with the cyclic vector's density on the
    commutant; the resulting family makes rho carry the spectrum of the state's
    weights. adapted=False draws from the whole commutant.
    Draws whose eigenvalue gaps fall below 1e-8 are retried with the next seed.
    """
    basis = commutant_basis(g)
    if adapted and len(basis) > 1:
        basis = _adapted_basis(g, basis)
    for attempt in range(MAX_RETRIES):
        rng = np.random.default_rng(seed + attempt)
        family = _draw_family(g, basis, rng)
        if family is not None:
            logger.debug(
                f"Seed {seed + attempt}: {len(family)} irreducible subspaces of ranks {family.ranks()}"
            )
            return family
        logger.info(f"Degenerate commutant draw for seed {seed + attempt}, retrying")
    raise NumericalDegeneracyError(
        f"no non-degenerate commutant draw after {MAX_RETRIES} attempts starting at seed {seed}"
    )


@dataclass(frozen=True, eq=False)
class DensityOperator:
    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (self.dim, self.dim):
            raise InvalidDensityError(f"density matrix has shape {matrix.shape}, expected {self.dim}x{self.dim}")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def make_density(matrix: np.ndarray, tol: float = CHECK_TOL) -> DensityOperator:
    """Validate Hermiticity, positivity (clamping tiny negatives) and unit trace."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidDensityError(f"density matrix must be square, got shape {matrix.shape}")
    if np.max(np.abs(matrix - matrix.conj().T)) > tol:
        raise InvalidDensityError("density matrix is not Hermitian")
    matrix = (matrix + matrix.conj().T) / 2
    eigenvalues, vectors = np.linalg.eigh(matrix)
    if eigenvalues.min() < -1e-12:
        raise InvalidDensityError(f"density matrix has negative eigenvalue {eigenvalues.min():.3e}")
    if eigenvalues.min() < 0:
        matrix = (vectors * np.clip(eigenvalues, 0.0, None)) @ vectors.conj().T
    if abs(np.trace(matrix).real - 1.0) > tol:
        raise InvalidDensityError(f"density matrix trace {np.trace(matrix).real:.12g} is not 1")
    return DensityOperator(matrix.shape[0], matrix)


def density_from_projectors(g: GNSData, family: ProjectorFamily) -> DensityOperator:
    if family.dim != g.hilbert_dim:
        raise InvalidFamilyError(f"family acts on dimension {family.dim}, GNS space has {g.hilbert_dim}")
    problems = family.issues()
    if problems:
        raise InvalidFamilyError("invalid projector family: " + "; ".join(problems))
    omega = g.cyclic
    rho = sum(np.outer(p @ omega, (p @ omega).conj()) for p in family.projectors)
    return make_density(rho)


def verify_pairing(
    g: GNSData,
    rho: DensityOperator,
    state: State,
    samples: int = 100,
    seed: int = 0,
) -> float:
    """Largest |trace(rho rep(a)) - omega(a)| over all matrix units and random elements."""
    rng = np.random.default_rng(seed)
    deviation = 0.0
    for unit_rep, unit in zip(g.unit_reps, g.spec.units()):
        value = np.trace(rho.matrix @ unit_rep)
        deviation = max(deviation, abs(value - state.evaluate(matrix_unit(g.spec, *unit))))
    for _ in range(samples):
        a = random_element(g.spec, rng)
        deviation = max(deviation, abs(np.trace(rho.matrix @ g.rep(a)) - state.evaluate(a)))
    return float(deviation)


@dataclass(frozen=True)
class Multiplicities:
    entries: Tuple[Tuple[int, int], ...]

    @property
    def unique(self) -> bool:
        """True iff every irreducible class occurs at most once."""
        return all(multiplicity <= 1 for _, multiplicity in self.entries)


def multiplicities(g: GNSData, family: Optional[ProjectorFamily] = None, seed: int = 0) -> Multiplicities:
    """Census of (irrep dimension, multiplicity) per block of the algebra.

    Irreducible representations of a block algebra are labelled by the block
    whose central unit acts as the identity on them.
    """
    family = family or irreducible_projectors(g, seed)
    centrals = []
    for k in range(g.spec.num_blocks):
        blocks = [np.eye(m) if l == k else np.zeros((m, m)) for l, m in enumerate(g.spec.blocks)]
        centrals.append(g.rep(AlgebraElement(g.spec, tuple(blocks))))

    counts = {}
    for p, rank in zip(family.projectors, family.ranks()):
        for k, central in enumerate(centrals):
            if np.max(np.abs(central @ p - p)) <= CHECK_TOL:
                counts.setdefault(k, []).append(rank)
                break
    return Multiplicities(tuple((ranks[0], len(ranks)) for _, ranks in sorted(counts.items())))
