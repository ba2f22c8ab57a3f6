from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import List, Literal, Optional, Tuple, Union

# A complex number is a [re, im] pair; matrices are lists of rows.
ComplexPair = Tuple[float, float]
ComplexMatrix = List[List[ComplexPair]]
ElementBlocks = List[ComplexMatrix]


class AlgebraModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    blocks: List[int]


class StateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    weights: Optional[List[ComplexMatrix]] = None
    vector: Optional[List[ComplexPair]] = None
    dims: Optional[Tuple[int, int]] = None
    psi_lambda: Optional[float] = Field(default=None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def exactly_one_description(self):
        given = [name for name in ("weights", "vector", "psi_lambda") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError("state needs exactly one of 'weights', 'vector' or 'psi_lambda'")
        return self


class EmbeddingModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: AlgebraModel
    target: AlgebraModel
    images: List[ElementBlocks]


class FactorEmbeddingModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    left_factor: Tuple[int, int]


class OptionsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: Optional[int] = Field(default=None, ge=0)
    tolerance: Optional[float] = Field(default=None, gt=0.0)
    check_tolerance: Optional[float] = Field(default=None, gt=0.0)
    samples: Optional[int] = Field(default=None, ge=1)


class ScenarioModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    description: Optional[str] = None
    algebra: AlgebraModel
    state: StateModel
    embedding: Optional[Union[Literal["left_factor"], FactorEmbeddingModel, EmbeddingModel]] = None
    options: OptionsModel = OptionsModel()
