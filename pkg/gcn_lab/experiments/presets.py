"""
Preset catalog

Each preset is a model template with unset outer dimensions, resolved
against a dataset's feature and class counts at training time, plus the
train settings it pins.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ..errors import ConfigurationError
from ..layers import ConvexActivation, LayerSpec, ModelConfig, dump_model_config
from ..topology import DiagMode
from ..training import TrainConfig

logger = logging.getLogger(__name__)

HIDDEN = 16
DROPOUT = 0.5
CONVEX_RELU6 = ConvexActivation(
    members=["relu6", "relu6"], coefficients=[0.8, 0.2], learnable=True
)


@dataclass(frozen=True)
class Preset:
    """Named model template and pinned train settings"""

    name: str
    description: str
    model: ModelConfig
    train_overrides: Dict[str, Any] = field(default_factory=dict)

    def train_config(self, seed: int = 0, base: Optional[TrainConfig] = None) -> TrainConfig:
        base = base or TrainConfig()
        return base.model_copy(update={**self.train_overrides, "seed": seed})

    def to_json(self) -> str:
        return dump_model_config(self.model)


def _two_layer(activation, hidden: int = HIDDEN, **options) -> ModelConfig:
    return ModelConfig(
        layers=[
            LayerSpec(kind="graph", out_dim=hidden, activation=activation, dropout=DROPOUT),
            LayerSpec(kind="graph", in_dim=hidden, activation="none", dropout=DROPOUT),
        ],
        **options,
    )


def _deep(**options) -> ModelConfig:
    """graph 32 -> dense 16 -> dense 32 -> graph 48 -> graph output, relu6 throughout"""
    kinds = ["graph", "dense", "dense", "graph", "graph"]
    widths = [None, 32, 16, 32, 48, None]
    layers = []
    for i, kind in enumerate(kinds):
        last = i == len(kinds) - 1
        layers.append(
            LayerSpec(
                kind=kind,
                in_dim=widths[i],
                out_dim=widths[i + 1],
                activation="none" if last else "relu6",
                dropout=DROPOUT,
            )
        )
    return ModelConfig(layers=layers, **options)


# Fixed Op* cell; grids/op_sweep.json re-ranks it with `gcn-lab sweep`
OPTIMIZED_ACTIVATION = "relu6"
OPTIMIZED_HIDDEN = 64
OPTIMIZED_LOSS = "softmax_ce_v2"


def _build_presets() -> List[Preset]:
    presets = []
    for conf in (False, True):
        prefix, options = ("Conf", {"confidence": True}) if conf else ("", {})
        presets += [
            Preset(f"{prefix}GCN", "two graph layers, relu, 16 hidden units",
                   _two_layer("relu", **options)),
            Preset(
                f"Op{prefix}GCN",
                "two graph layers with relu6, 64 hidden units and softmax_ce_v2",
                _two_layer(OPTIMIZED_ACTIVATION, OPTIMIZED_HIDDEN, **options),
                {"loss_variant": OPTIMIZED_LOSS},
            ),
            Preset(f"Conv{prefix}GCN", "learnable convex combination of relu6 and relu6",
                   _two_layer(CONVEX_RELU6, **options)),
            Preset(f"CC{prefix}GCN", "clustering coefficients on the propagator diagonal",
                   _two_layer("relu", diag_mode=DiagMode.CLUSTERING_COEFFICIENTS, **options)),
            Preset(f"D{prefix}GCN", "interleaved graph and dense layers", _deep(**options)),
        ]
    return presets


class PresetCatalog:
    """Case-insensitive lookup of the shipped presets"""

    def __init__(self, presets: Optional[List[Preset]] = None):
        self._presets: Dict[str, Preset] = {}
        for preset in presets if presets is not None else _build_presets():
            self.register(preset)

    def register(self, preset: Preset):
        key = preset.name.lower()
        if key in self._presets:
            raise ConfigurationError(f"Duplicate preset {preset.name}")
        self._presets[key] = preset
        logger.debug(f"Registered preset {preset.name}")

    def names(self) -> List[str]:
        return [preset.name for preset in self._presets.values()]

    def get(self, name: str) -> Preset:
        try:
            return self._presets[name.lower()]
        except KeyError:
            raise ConfigurationError(
                f"Unknown preset {name!r}; available: {', '.join(self.names())}"
            ) from None

    def __contains__(self, name: str) -> bool:
        return name.lower() in self._presets

    def __iter__(self):
        return iter(self._presets.values())

    def __len__(self) -> int:
        return len(self._presets)


CATALOG = PresetCatalog()


def get_preset(name: str) -> Preset:
    return CATALOG.get(name)


def preset_names() -> List[str]:
    return CATALOG.names()


def is_confidence_preset(name: str) -> bool:
    return get_preset(name).model.confidence
