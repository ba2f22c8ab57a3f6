import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from config.settings import CONFIG
from ..algebra import (
    AlgebraElement,
    BlockSpec,
    Embedding,
    check_embedding,
    embed_left_factor,
    make_algebra,
)
from ..exceptions import GNSError, ScenarioError
from ..log import logger
from ..states import BipartiteVector, State, make_state, psi_lambda, restrict, vector_state
from .models import EmbeddingModel, FactorEmbeddingModel, ScenarioModel, StateModel


@dataclass(frozen=True, eq=False)
class Scenario:
    """A validated scenario: the algebra, a state on it and an optional subalgebra."""

    name: str
    algebra: BlockSpec
    state: State
    embedding: Optional[Embedding] = None
    factor_dims: Optional[Tuple[int, int]] = None
    vector: Optional[BipartiteVector] = None
    seed: int = 0
    tolerance: float = 1e-10
    check_tolerance: float = 1e-10
    samples: int = 1000

    def subject_state(self) -> State:
        """The state under study: restricted to the subalgebra when one is given."""
        if self.embedding is None:
            return self.state
        return restrict(self.state, self.embedding)


def parse_matrix(rows: List[List[Tuple[float, float]]]) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def parse_element(spec: BlockSpec, blocks: List[Any]) -> AlgebraElement:
    return AlgebraElement(spec, tuple(parse_matrix(block) for block in blocks))


def state_vector_amplitudes(model: StateModel) -> np.ndarray:
    return np.array([complex(re, im) for re, im in model.vector], dtype=complex)


def _resolve_state(spec: BlockSpec, model: StateModel) -> Tuple[State, Optional[BipartiteVector]]:
    if model.weights is not None:
        return make_state(spec, [parse_matrix(w) for w in model.weights]), None
    if model.psi_lambda is not None:
        vector = psi_lambda(model.psi_lambda)
        return vector_state(vector, spec), vector
    amplitudes = state_vector_amplitudes(model)
    if model.dims is not None:
        vector = BipartiteVector(model.dims, amplitudes)
        return vector_state(vector, spec), vector
    return vector_state(amplitudes, spec), None


def _infer_factor_dims(spec: BlockSpec, model: StateModel) -> Tuple[int, int]:
    if model.dims is not None:
        return tuple(model.dims)
    if model.psi_lambda is not None:
        return (2, 2)
    n = spec.blocks[0]
    root = math.isqrt(n)
    if root * root != n:
        raise ScenarioError(
            f"cannot infer tensor factors of a {n}-dimensional block; give 'left_factor': [n_A, n_B]",
            field="embedding",
        )
    return (root, root)


def _resolve_embedding(spec: BlockSpec, scenario: ScenarioModel):
    model = scenario.embedding
    if model is None:
        return None, None
    if isinstance(model, EmbeddingModel):
        source = make_algebra(model.source.blocks)
        target = make_algebra(model.target.blocks)
        if target != spec:
            raise ScenarioError("embedding target does not match the scenario algebra", field="embedding.target")
        images = tuple(parse_element(target, image) for image in model.images)
        embedding = Embedding(source, target, images)
        violations = check_embedding(embedding)
        if violations:
            kinds = ", ".join(sorted({v.kind for v in violations}))
            raise ScenarioError(f"embedding is not a unital *-homomorphism ({kinds})", field="embedding")
        return embedding, None
    if not spec.is_simple():
        raise ScenarioError("tensor-factor embeddings need a single-block algebra", field="embedding")
    if isinstance(model, FactorEmbeddingModel):
        dims = tuple(model.left_factor)
    else:
        dims = _infer_factor_dims(spec, scenario.state)
    if dims[0] * dims[1] != spec.blocks[0]:
        raise ScenarioError(
            f"factors {dims[0]} x {dims[1]} do not match block size {spec.blocks[0]}", field="embedding"
        )
    return embed_left_factor(make_algebra([dims[0]]), make_algebra([dims[1]])), dims


def _field_of(error: Dict[str, Any]) -> str:
    return ".".join(str(part) for part in error["loc"]) or "scenario"


def load_scenario(path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> Scenario:
    """Parse and validate a scenario file.

    Unset options fall back to the configured defaults; non-None entries of
    overrides (seed, tolerance, check_tolerance, samples) take precedence.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"{path}: cannot read scenario file: {e}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(
            f"{path}: parse error at line {e.lineno}, column {e.colno}: {e.msg}",
            line=e.lineno,
            column=e.colno,
        )
    try:
        model = ScenarioModel.model_validate(raw)
    except PydanticValidationError as e:
        first = e.errors()[0]
        field = _field_of(first)
        raise ScenarioError(f"{path}: invalid field '{field}': {first['msg']}", field=field)

    current = "algebra"
    try:
        spec = make_algebra(model.algebra.blocks)
        current = "state"
        state, vector = _resolve_state(spec, model.state)
        current = "embedding"
        embedding, dims = _resolve_embedding(spec, model)
        if vector is None and dims is not None and model.state.vector is not None:
            vector = BipartiteVector(dims, state_vector_amplitudes(model.state))
    except ScenarioError as e:
        raise ScenarioError(f"{path}: invalid field '{e.field or current}': {e}", field=e.field or current)
    except GNSError as e:
        raise ScenarioError(f"{path}: invalid field '{current}': {e}", field=current)

    options = model.options
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    scenario = Scenario(
        name=model.name or path.stem,
        algebra=spec,
        state=state,
        embedding=embedding,
        factor_dims=dims,
        vector=vector,
        seed=overrides.get("seed", options.seed if options.seed is not None else CONFIG["seed"]),
        tolerance=overrides.get(
            "tolerance", options.tolerance if options.tolerance is not None else CONFIG["null_tolerance"]
        ),
        check_tolerance=overrides.get(
            "check_tolerance",
            options.check_tolerance if options.check_tolerance is not None else CONFIG["check_tolerance"],
        ),
        samples=overrides.get("samples", options.samples if options.samples is not None else CONFIG["samples"]),
    )
    logger.info(f"Loaded scenario {scenario.name} on algebra {list(spec.blocks)}")
    return scenario
