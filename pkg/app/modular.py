"""Tomita data for faithful states on M_n and the gauge ambiguity of entropy.

Antilinear operators are stored as a matrix M acting by v -> M @ conj(v).
Two antilinear maps compose to the linear map M1 @ conj(M2); an antilinear
map sandwiching a linear one, J A J, is the linear map MJ @ conj(A) @ conj(MJ).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Sequence, Union

import numpy as np
from pydantic import BaseModel
from scipy.linalg import expm, polar, schur

from .algebra import AlgebraElement, make_algebra, matrix_unit, star_permutation
from .decomposition import DensityOperator, ProjectorFamily, density_from_projectors
from .entropy import von_neumann_entropy
from .exceptions import (
    FaithfulnessRequiredError,
    InvalidUnitaryError,
    UnsupportedError,
    ValidationError,
)
from .gns import GNSData
from .log import logger

UNITARY_TOL = 1e-10
INEQUALITY_TOL = 1e-9


def apply_antilinear(matrix: np.ndarray, v: np.ndarray) -> np.ndarray:
    return matrix @ np.conj(v)


def sandwich(antilinear: np.ndarray, linear: np.ndarray) -> np.ndarray:
    """Linear matrix of J A J for antilinear J."""
    return antilinear @ np.conj(linear) @ np.conj(antilinear)


def _psd_power(matrix: np.ndarray, power: float) -> np.ndarray:
    eigenvalues, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    return (vectors * np.power(np.clip(eigenvalues, 0.0, None), power)) @ vectors.conj().T


@dataclass(frozen=True, eq=False)
class ModularData:
    dim: int
    S_matrix: np.ndarray
    J_matrix: np.ndarray
    Delta: np.ndarray

    def delta_spectrum(self) -> np.ndarray:
        """Eigenvalues of the modular operator, ascending."""
        return np.linalg.eigvalsh(self.Delta)

    def conjugate(self, linear: np.ndarray) -> np.ndarray:
        return sandwich(self.J_matrix, linear)


def tomita_modular(g: GNSData) -> ModularData:
    """Polar decomposition S = J Delta^{1/2} of the involution |a> -> |a*>.

    In orthonormal GNS coordinates S acts as R T conj(Q) after conjugation,
    where Q holds the representatives, R is the quotient map and T permutes
    unit coordinates to those of the adjoint. J is the unitary polar factor of
    that matrix and Delta = conj(S_matrix^H S_matrix).
    """
    if not g.spec.is_simple():
        raise UnsupportedError("modular data is only implemented for single-block algebras")
    if not g.is_faithful():
        raise FaithfulnessRequiredError(
            f"state has a {g.null_dim}-dimensional null ideal; modular conjugation needs a faithful state"
        )
    s_matrix = g.quotient_map @ star_permutation(g.spec) @ np.conj(g.quotient_basis)
    j_matrix, positive = polar(s_matrix, side="right")
    delta = np.conj(positive @ positive)
    for array in (s_matrix, j_matrix, delta):
        array.setflags(write=False)
    return ModularData(dim=g.hilbert_dim, S_matrix=s_matrix, J_matrix=j_matrix, Delta=delta)


def modular_residuals(g: GNSData, m: ModularData) -> Dict[str, float]:
    """Residuals of the defining relations of S, J and Delta."""
    d = m.dim
    eye = np.eye(d)
    involution = 0.0
    for unit in g.spec.units():
        k, i, j = unit
        image = apply_antilinear(m.S_matrix, g.vector(matrix_unit(g.spec, *unit)))
        involution = max(involution, float(np.max(np.abs(image - g.vector(matrix_unit(g.spec, k, j, i))))))
    commutant = 0.0
    for a in g.unit_reps:
        conjugated = m.conjugate(a)
        for b in g.unit_reps:
            commutant = max(commutant, float(np.max(np.abs(conjugated @ b - b @ conjugated))))
    return {
        "involution": involution,
        "j_squared": float(np.max(np.abs(m.J_matrix @ np.conj(m.J_matrix) - eye))),
        "antiunitary": float(np.max(np.abs(m.J_matrix.conj().T @ m.J_matrix - eye))),
        "polar": float(np.max(np.abs(m.S_matrix - m.J_matrix @ np.conj(_psd_power(m.Delta, 0.5))))),
        "cyclic_fixed": float(np.max(np.abs(apply_antilinear(m.J_matrix, g.cyclic) - g.cyclic))),
        "commutant": commutant,
    }


def _diagonal_weights(g: GNSData) -> np.ndarray:
    sigma = g.state.weights[0]
    if np.max(np.abs(sigma - np.diag(np.diag(sigma)))) > 1e-12:
        raise UnsupportedError("state weights are not diagonal")
    return np.diag(sigma).real


def matrix_unit_formula_deviation(g: GNSData, m: ModularData) -> float:
    """Largest gap between J|e_ij> and sqrt(lambda_j / lambda_i)|e_ji> for a diagonal state."""
    lam = _diagonal_weights(g)
    n = g.spec.blocks[0]
    deviation = 0.0
    for i in range(n):
        for j in range(n):
            image = apply_antilinear(m.J_matrix, g.vector(matrix_unit(g.spec, 0, i, j)))
            expected = np.sqrt(lam[j] / lam[i]) * g.vector(matrix_unit(g.spec, 0, j, i))
            deviation = max(deviation, float(np.max(np.abs(image - expected))))
    return deviation


def _check_unitary(g: GNSData, u: AlgebraElement):
    if u.spec != g.spec:
        raise InvalidUnitaryError("unitary does not belong to the represented algebra")
    deviation = (u.adjoint() @ u).distance(AlgebraElement.identity(g.spec))
    if deviation > UNITARY_TOL:
        raise InvalidUnitaryError(f"element is not unitary (|u*u - 1| = {deviation:.3e})")


def gauge_unitary(g: GNSData, m: ModularData, u: AlgebraElement) -> np.ndarray:
    """U(g) = J rep(g) J, a unitary in the commutant."""
    _check_unitary(g, u)
    return m.conjugate(g.rep(u))


def gauge_projectors(g: GNSData, m: ModularData, u: AlgebraElement) -> ProjectorFamily:
    """P_g^(k) = J rep(g e_kk g*) J for k = 1..n.

    The adjoint on the right keeps each P_g^(k) idempotent.
    """
    _check_unitary(g, u)
    n = g.spec.blocks[0]
    projectors = []
    for k in range(n):
        rotated = u @ matrix_unit(g.spec, 0, k, k) @ u.adjoint()
        projectors.append(m.conjugate(g.rep(rotated)))
    return ProjectorFamily(g.hilbert_dim, tuple(projectors))


def gauge_density(g: GNSData, m: ModularData, u: AlgebraElement) -> DensityOperator:
    return density_from_projectors(g, gauge_projectors(g, m, u))


def haar_unitary(n: int, seed: Union[int, Sequence[int], None] = None) -> AlgebraElement:
    """Haar-random unitary on M_n via QR of a complex Ginibre matrix.

    Columns of Q are rephased so that the diagonal of R is real positive.
    """
    if n < 1:
        raise ValidationError(f"unitary size must be positive, got {n}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diagonal = np.diag(r)
    q = q * (diagonal / np.abs(diagonal))
    return AlgebraElement(make_algebra([n]), (q,))


def hermitian_basis(n: int) -> List[np.ndarray]:
    """Hilbert-Schmidt orthonormal basis of n x n Hermitian matrices."""
    basis = []
    for k in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[k, k] = 1.0
        basis.append(e)
    for k in range(n):
        for l in range(k + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[k, l] = sym[l, k] = 1 / np.sqrt(2)
            asym = np.zeros((n, n), dtype=complex)
            asym[k, l], asym[l, k] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            basis.extend([sym, asym])
    return basis


def unitary_from_parameters(parameters: Sequence[float], n: int) -> AlgebraElement:
    """g = exp(iH) with H the Hermitian matrix of the given coordinates."""
    h = sum(theta * b for theta, b in zip(parameters, hermitian_basis(n)))
    return AlgebraElement(make_algebra([n]), (expm(1j * h),))


def parameters_of_unitary(u: AlgebraElement) -> List[float]:
    """Coordinates of a Hermitian H with exp(iH) = u, eigenphases in (-pi, pi]."""
    t, z = schur(u.data[0], output="complex")
    h = z @ np.diag(np.angle(np.diag(t))) @ z.conj().T
    n = u.spec.blocks[0]
    return [float(np.trace(b @ h).real) for b in hermitian_basis(n)]


class GaugeReport(BaseModel):
    baseline_entropy: float
    samples: int
    seed: int
    entropies: List[float]
    min_entropy: float
    max_entropy: float
    argmax_index: int
    argmax_parameters: List[float]
    refined: bool = False
    refine_evaluations: int = 0

    @property
    def inequality_holds(self) -> bool:
        return self.min_entropy >= self.baseline_entropy - INEQUALITY_TOL


def _local_ascent(objective, start: List[float], start_value: float, max_evaluations: int = 20000):
    """Coordinate search with step halving from 0.5 down to 1e-4."""
    best, best_value = list(start), start_value
    step, evaluations = 0.5, 0
    while step >= 1e-4 and evaluations < max_evaluations:
        improved = False
        for p in range(len(best)):
            for sign in (1.0, -1.0):
                trial = list(best)
                trial[p] += sign * step
                value = objective(trial)
                evaluations += 1
                if value > best_value + 1e-15:
                    best, best_value, improved = trial, value, True
                    break
        if not improved:
            step /= 2
    return best, best_value, evaluations


def entropy_scan(
    g: GNSData,
    m: ModularData,
    samples: int = 1000,
    seed: int = 0,
    refine: bool = False,
    workers: int = 1,
) -> GaugeReport:
    """Entropies of rho(g) over Haar-random gauge unitaries.

    Sample i uses the unitary seeded by (seed, i); results are reduced in index
    order whatever the number of workers.
    """
    if samples < 1:
        raise ValidationError(f"samples must be positive, got {samples}")
    _diagonal_weights(g)
    n = g.spec.blocks[0]
    identity = AlgebraElement.identity(g.spec)
    baseline = von_neumann_entropy(gauge_density(g, m, identity))

    def sample_entropy(index: int) -> float:
        u = haar_unitary(n, (seed, index))
        return von_neumann_entropy(gauge_density(g, m, u))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            entropies = list(executor.map(sample_entropy, range(samples)))
    else:
        entropies = [sample_entropy(index) for index in range(samples)]

    argmax = int(np.argmax(entropies))
    parameters = parameters_of_unitary(haar_unitary(n, (seed, argmax)))
    max_entropy = entropies[argmax]
    evaluations = 0
    if refine:
        def objective(theta):
            return von_neumann_entropy(gauge_density(g, m, unitary_from_parameters(theta, n)))

        parameters, max_entropy, evaluations = _local_ascent(objective, parameters, objective(parameters))
        max_entropy = max(max_entropy, entropies[argmax])
        logger.info(f"Local ascent finished after {evaluations} evaluations at entropy {max_entropy:.12g}")

    report = GaugeReport(
        baseline_entropy=baseline,
        samples=samples,
        seed=seed,
        entropies=entropies,
        min_entropy=min(entropies),
        max_entropy=max_entropy,
        argmax_index=argmax,
        argmax_parameters=parameters,
        refined=refine,
        refine_evaluations=evaluations,
    )
    if not report.inequality_holds:
        logger.warning(
            f"Gauge entropy {report.min_entropy:.12g} fell below baseline {baseline:.12g}"
        )
    return report
