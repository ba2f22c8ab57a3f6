from functools import cached_property
from typing import Any, Dict, Optional

from config.settings import CONFIG
from .algebra import Embedding
from .decomposition import (
    density_from_projectors,
    irreducible_projectors,
    multiplicities,
    verify_pairing,
)
from .entropy import spectrum, von_neumann_entropy
from .exceptions import ValidationError
from .gns import GNSData, build_gns, check_cyclic
from .log import logger
from .modular import entropy_scan, modular_residuals, tomita_modular
from .scenario import Scenario
from .states import State, restrict, restriction_matches_partial_trace


def reduced_entropy(
    state: State,
    embedding: Optional[Embedding] = None,
    seed: int = 0,
    tol: float = 1e-10,
) -> float:
    """Entropy of a (restricted) state through its GNS density operator."""
    if embedding is not None:
        state = restrict(state, embedding)
    g = build_gns(state.spec, state, tol)
    rho = density_from_projectors(g, irreducible_projectors(g, seed))
    return von_neumann_entropy(rho)


class ScenarioProcessor:
    def __init__(self, scenario: Scenario):
        """Initialize the processor for one scenario."""
        self.scenario = scenario

    @cached_property
    def state(self) -> State:
        return self.scenario.subject_state()

    @cached_property
    def gns(self) -> GNSData:
        logger.info(f"Building GNS representation for {self.scenario.name}")
        return build_gns(self.state.spec, self.state, self.scenario.tolerance)

    def gns_summary(self) -> Dict[str, Any]:
        """
        Dimensions and Gram data of the GNS construction.

        Returns:
            Dictionary with hilbert_dim, null_dim, gram_spectrum, cyclic flag and the Gram matrix
        """
        g = self.gns
        return {
            "scenario": self.scenario.name,
            "algebra": list(g.spec.blocks),
            "algebra_dim": g.spec.dim,
            "hilbert_dim": g.hilbert_dim,
            "null_dim": g.null_dim,
            "gram_spectrum": [float(x) for x in g.gram_spectrum],
            "cyclic": check_cyclic(g),
            "gram": g.gram,
        }

    def reduce(self, seed: Optional[int] = None) -> Dict[str, Any]:
        """
        Decompose the GNS space and extract the density operator.

        Args:
            seed: Seed of the commutant draw, defaults to the scenario seed

        Returns:
            Dictionary with multiplicities, uniqueness flag, projector ranks,
            the density spectrum and the pairing deviation
        """
        seed = self.scenario.seed if seed is None else seed
        g = self.gns
        family = irreducible_projectors(g, seed)
        rho = density_from_projectors(g, family)
        census = multiplicities(g, family)
        deviation = verify_pairing(g, rho, self.state, samples=100, seed=seed)
        if deviation > self.scenario.check_tolerance:
            logger.warning(f"Pairing deviation {deviation:.3e} exceeds {self.scenario.check_tolerance:.0e}")
        return {
            "scenario": self.scenario.name,
            "seed": seed,
            "multiplicities": [list(entry) for entry in census.entries],
            "unique": census.unique,
            "projector_ranks": family.ranks(),
            "spectrum": list(spectrum(rho)),
            "pairing_deviation": deviation,
            "density": rho,
        }

    def entropy(self, seed: Optional[int] = None) -> Dict[str, Any]:
        result = self.reduce(seed)
        result["entropy"] = von_neumann_entropy(result["density"])
        return result

    def compare(self) -> Dict[str, Any]:
        """Restriction versus partial trace on both tensor factors."""
        vector = self.scenario.vector
        if vector is None or self.scenario.factor_dims is None:
            raise ValidationError(
                "compare needs a vector state on a tensor product with a left_factor embedding"
            )
        return {
            "scenario": self.scenario.name,
            "dims": list(vector.dims),
            "left_deviation": restriction_matches_partial_trace(vector, keep="A"),
            "right_deviation": restriction_matches_partial_trace(vector, keep="B"),
        }

    def scan_gauge(
        self,
        samples: Optional[int] = None,
        seed: Optional[int] = None,
        refine: bool = False,
        workers: Optional[int] = None,
    ) -> Dict[str, Any]:
        g = self.gns
        m = tomita_modular(g)
        residuals = modular_residuals(g, m)
        worst = max(residuals.values())
        if worst > self.scenario.check_tolerance:
            logger.warning(f"Modular residuals above tolerance: {residuals}")
        report = entropy_scan(
            g,
            m,
            samples=self.scenario.samples if samples is None else samples,
            seed=self.scenario.seed if seed is None else seed,
            refine=refine,
            workers=workers or CONFIG["max_workers"],
        )
        return {"scenario": self.scenario.name, "report": report, "residuals": residuals}
