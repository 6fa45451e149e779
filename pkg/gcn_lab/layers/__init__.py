from .activations import activation_node, apply_activation, check_simplex, simplex_project
from .config import (
    ActivationSpec,
    BaseActivation,
    ConfidenceConfig,
    ConvexActivation,
    LayerSpec,
    ModelConfig,
    dump_model_config,
    load_model_config,
    parse_model_config,
)
from .model import (
    GraphModel,
    dense_layer,
    dense_layer_forward,
    gcn_layer_forward,
    graph_layer,
    model_forward,
    project_coefficients,
)

__all__ = [
    "ActivationSpec",
    "BaseActivation",
    "ConfidenceConfig",
    "ConvexActivation",
    "GraphModel",
    "LayerSpec",
    "ModelConfig",
    "activation_node",
    "apply_activation",
    "check_simplex",
    "dense_layer",
    "dense_layer_forward",
    "dump_model_config",
    "gcn_layer_forward",
    "graph_layer",
    "load_model_config",
    "model_forward",
    "parse_model_config",
    "project_coefficients",
    "simplex_project",
]
