"""
Declarative model configuration

Configs are pydantic models so they can be read from and written to the
JSON config files used by the CLI.
"""

import json
import logging
from pathlib import Path
from typing import Annotated, Any, List, Literal, Optional, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from ..errors import ConfigurationError
from ..topology import DiagMode

logger = logging.getLogger(__name__)

BaseKind = Literal["relu", "relu6", "elu", "selu", "none"]
SIMPLEX_TOLERANCE = 1e-9
NEGATIVE_TOLERANCE = 1e-12


class BaseActivation(BaseModel):
    """A single named activation"""

    model_config = ConfigDict(frozen=True)

    type: Literal["base"] = "base"
    kind: BaseKind = "relu"

    @property
    def members(self) -> List[str]:
        return [self.kind]

    @property
    def learnable(self) -> bool:
        return False


class ConvexActivation(BaseModel):
    """sum_i c_i f_i with c on the probability simplex"""

    model_config = ConfigDict(frozen=True)

    type: Literal["convex"] = "convex"
    members: List[BaseKind]
    coefficients: List[float]
    learnable: bool = False

    @model_validator(mode="after")
    def _check_simplex(self):
        if len(self.members) < 2:
            raise ValueError("a convex combination needs at least two members")
        if len(self.members) != len(self.coefficients):
            raise ValueError(
                f"{len(self.members)} members but {len(self.coefficients)} coefficients"
            )
        if min(self.coefficients) < -NEGATIVE_TOLERANCE:
            raise ValueError(f"negative coefficient in {self.coefficients}")
        if abs(sum(self.coefficients) - 1.0) > SIMPLEX_TOLERANCE:
            raise ValueError(f"coefficients {self.coefficients} do not sum to 1")
        return self


ActivationSpec = Annotated[Union[BaseActivation, ConvexActivation], Field(discriminator="type")]


def _coerce_activation(value: Any) -> Any:
    if isinstance(value, str):
        return {"type": "base", "kind": value}
    if isinstance(value, dict) and "type" not in value:
        return {**value, "type": "convex" if "members" in value else "base"}
    return value


class LayerSpec(BaseModel):
    """One graph or dense layer"""

    model_config = ConfigDict(frozen=True)

    kind: Literal["graph", "dense"] = "graph"
    in_dim: Optional[int] = Field(default=None, ge=1)
    out_dim: Optional[int] = Field(default=None, ge=1)
    activation: ActivationSpec = BaseActivation(kind="relu")
    dropout: float = Field(default=0.5, ge=0.0, lt=1.0)

    @field_validator("activation", mode="before")
    @classmethod
    def _activation_shorthand(cls, value):
        return _coerce_activation(value)


class ConfidenceConfig(BaseModel):
    """Confidence-based aggregation and loss settings"""

    model_config = ConfigDict(frozen=True)

    lambda_smooth: float = Field(default=1.0, ge=0.0)
    lambda_reg: float = Field(default=0.01, ge=0.0)
    epsilon: float = Field(default=1.0, gt=0.0)
    normalize: bool = True
    raw_influence: bool = False
    propagation: Literal["symmetric", "augmented"] = "symmetric"
    # row-normalize R after masking by the support instead of before
    normalize_after_support: bool = False


class ModelConfig(BaseModel):
    """Layer stack plus graph-level options"""

    model_config = ConfigDict(frozen=True)

    layers: List[LayerSpec] = Field(min_length=1)
    diag_mode: DiagMode = DiagMode.IDENTITY
    confidence: bool = False
    input_dropout: float = Field(default=0.0, ge=0.0, lt=1.0)
    confidence_params: ConfidenceConfig = ConfidenceConfig()

    @model_validator(mode="after")
    def _check_structure(self):
        for i, (layer, following) in enumerate(zip(self.layers, self.layers[1:])):
            if layer.out_dim is None or following.in_dim is None:
                raise ValueError(f"only the outer dimensions may be left unset (layer {i})")
            if layer.out_dim != following.in_dim:
                raise ValueError(
                    f"layer {i} outputs {layer.out_dim} but layer {i + 1} expects "
                    f"{following.in_dim}"
                )
        last = self.layers[-1].activation
        if not (isinstance(last, BaseActivation) and last.kind == "none"):
            raise ValueError("the output layer must not have an activation")
        if self.confidence and not any(layer.kind == "graph" for layer in self.layers):
            raise ValueError("confidence aggregation needs at least one graph layer")
        return self

    @property
    def num_graph_layers(self) -> int:
        return sum(layer.kind == "graph" for layer in self.layers)

    def resolve(self, num_features: int, num_classes: int) -> "ModelConfig":
        """Fill unset outer dimensions from a dataset and check explicit ones"""
        first, last = self.layers[0], self.layers[-1]
        if first.in_dim not in (None, num_features):
            raise ConfigurationError(
                f"first layer expects {first.in_dim} inputs, dataset has {num_features} features"
            )
        if last.out_dim not in (None, num_classes):
            raise ConfigurationError(
                f"last layer produces {last.out_dim} outputs, dataset has {num_classes} classes"
            )
        layers = list(self.layers)
        layers[0] = layers[0].model_copy(update={"in_dim": num_features})
        layers[-1] = layers[-1].model_copy(update={"out_dim": num_classes})
        return self.model_copy(update={"layers": layers})

    @property
    def is_resolved(self) -> bool:
        return self.layers[0].in_dim is not None and self.layers[-1].out_dim is not None


def parse_model_config(data: Union[str, dict]) -> ModelConfig:
    """Validate a model config from JSON text or a dict"""
    try:
        if isinstance(data, str):
            return ModelConfig.model_validate_json(data)
        return ModelConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid model config: {e}") from None


def load_model_config(path: Union[str, Path]) -> ModelConfig:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}")
    return parse_model_config(path.read_text(encoding="utf-8"))


def dump_model_config(config: ModelConfig) -> str:
    return json.dumps(config.model_dump(mode="json"), indent=2, sort_keys=True)
