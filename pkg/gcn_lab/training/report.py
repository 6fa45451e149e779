"""
Training configuration and per-run reports
"""

import hashlib
import json
from pathlib import Path
from typing import List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..errors import ConfigurationError
from ..layers import ModelConfig, parse_model_config

LossVariant = Literal["softmax_ce", "softmax_ce_v2"]


class TrainConfig(BaseModel):
    """Optimizer and loop settings"""

    model_config = ConfigDict(frozen=True)

    learning_rate: float = Field(default=0.01, gt=0.0)
    weight_decay: float = Field(default=5e-4, ge=0.0)
    max_epochs: int = Field(default=200, ge=1)
    early_stop_patience: int = Field(default=10, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)
    loss_variant: LossVariant = "softmax_ce"


class RunConfig(BaseModel):
    """Contents of a `train --config` file"""

    model: ModelConfig
    train: TrainConfig = TrainConfig()


def load_run_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}")
    return parse_run_config(path.read_text(encoding="utf-8"))


def config_fingerprint(model: ModelConfig, train: TrainConfig) -> str:
    """Stable hash of everything but the seed"""
    payload = {
        "model": model.model_dump(mode="json"),
        "train": train.model_dump(mode="json", exclude={"seed"}),
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


class EpochRecord(BaseModel):
    epoch: int = Field(ge=1)
    train_loss: float
    val_loss: float
    val_accuracy: float = Field(ge=0.0, le=1.0)
    seconds: Optional[float] = Field(default=None, ge=0.0)


class RunReport(BaseModel):
    """Outcome of one training run"""

    preset: Optional[str] = None
    dataset: str
    seed: int
    config_fingerprint: str
    epochs_run: int = Field(ge=0)
    best_epoch: int = Field(ge=0)
    stopped_early: bool = False
    test_accuracy: float = Field(ge=0.0, le=1.0)
    best_val_accuracy: float = Field(ge=0.0, le=1.0)
    best_val_loss: float
    history: List[EpochRecord] = Field(default_factory=list)

    @property
    def mean_epoch_seconds(self) -> Optional[float]:
        seconds = [r.seconds for r in self.history if r.seconds is not None]
        return float(np.mean(seconds)) if seconds else None

    def to_text(self, include_timing: bool = False) -> str:
        """JSON with sorted keys; epoch wall-times only when include_timing"""
        data = self.model_dump(mode="json")
        if not include_timing:
            for record in data["history"]:
                record.pop("seconds", None)
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunReport":
        return cls.model_validate_json(text)

    def write(self, path: Union[str, Path], include_timing: bool = False) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_text(include_timing), encoding="utf-8")
        return path

    @classmethod
    def read(cls, path: Union[str, Path]) -> "RunReport":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))


def parse_run_config(data: Union[str, dict]) -> RunConfig:
    """Validate a run config, routing model errors through parse_model_config"""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Run config is not valid JSON: {e}") from None
    if not isinstance(data, dict) or "model" not in data:
        raise ConfigurationError("Run config needs a 'model' section")
    model = parse_model_config(data["model"])
    try:
        train = TrainConfig.model_validate(data.get("train", {}))
    except ValidationError as e:
        raise ConfigurationError(f"Invalid train config: {e}") from None
    return RunConfig(model=model, train=train)
