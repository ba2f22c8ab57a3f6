"""Von Neumann entropy in nats."""

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.special import entr

from .decomposition import DensityOperator
from .exceptions import InvalidDensityError, ValidationError

HERMITICITY_TOL = 1e-8
CLAMP_TOL = 1e-12
TRACE_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: Tuple[float, ...]

    def __iter__(self):
        return iter(self.eigenvalues)

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def rank(self) -> int:
        return sum(1 for p in self.eigenvalues if p > 1e-10)


def spectrum(rho: Union[DensityOperator, np.ndarray]) -> Spectrum:
    """Eigenvalues clamped at zero, descending.

    Raw arrays must have unit trace; DensityOperator inputs were checked when built.
    """
    if isinstance(rho, DensityOperator):
        matrix = rho.matrix
    else:
        matrix = np.asarray(rho, dtype=complex)
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidDensityError(f"density matrix has trace {trace:.12g}, expected 1")
    if np.max(np.abs(matrix - matrix.conj().T)) > HERMITICITY_TOL:
        raise InvalidDensityError("density operator is not Hermitian")
    eigenvalues = np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)
    if eigenvalues.min() < -CLAMP_TOL:
        raise InvalidDensityError(f"density operator has negative eigenvalue {eigenvalues.min():.3e}")
    eigenvalues = np.clip(eigenvalues, 0.0, None)[::-1]
    return Spectrum(tuple(float(p) for p in eigenvalues))


def von_neumann_entropy(rho: Union[DensityOperator, np.ndarray]) -> float:
    """-sum p ln p over the spectrum, with 0 ln 0 = 0."""
    return entropy_of(spectrum(rho))


def entropy_of(probabilities) -> float:
    return max(float(np.sum(entr(np.asarray(tuple(probabilities), dtype=float)))), 0.0)


def binary_entropy(lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise ValidationError(f"lambda must lie in [0, 1], got {lam}")
    return entropy_of((lam, 1.0 - lam))


def to_bits(nats: float) -> float:
    return nats / np.log(2)
