"""
Graph and dense layers on the tape, and model assembly from a ModelConfig
"""

import logging
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..errors import ConfigurationError
from ..tensorcore import DenseMatrix, SparseMatrix, Tape, as_dense
from ..topology import PropagatorMatrix
from .activations import activation_node, simplex_project
from .config import ActivationSpec, BaseActivation, LayerSpec, ModelConfig

logger = logging.getLogger(__name__)

Inputs = Union[DenseMatrix, SparseMatrix]
Params = Dict[str, DenseMatrix]


def _aggregator(P) -> SparseMatrix:
    if isinstance(P, PropagatorMatrix):
        return P.matrix
    if isinstance(P, SparseMatrix):
        return P
    return SparseMatrix.from_dense(P)


def _shape(features: Inputs) -> Tuple[int, int]:
    if isinstance(features, SparseMatrix):
        return features.shape
    return as_dense(features).shape


def _input_node(
    tape: Tape, H, rate: float, training: bool, rng: Optional[np.random.Generator]
) -> Union[int, SparseMatrix]:
    """Apply input dropout; sparse inputs stay sparse and off the tape"""
    if isinstance(H, SparseMatrix):
        if training and rate > 0.0:
            if rng is None:
                raise ConfigurationError("Training-mode dropout needs a random generator")
            return H.dropout(rate, rng)
        return H
    if not isinstance(H, (int, np.integer)):
        H = tape.constant(H)
    return tape.dropout(int(H), rate, training, rng)


def _transform(tape: Tape, H: Union[int, SparseMatrix], weight: int) -> int:
    if isinstance(H, SparseMatrix):
        return tape.spmm(H, weight)
    return tape.matmul(H, weight)


def graph_layer(
    tape: Tape,
    aggregator: SparseMatrix,
    H,
    weight: int,
    bias: int,
    spec: ActivationSpec,
    dropout: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
    coefficients: Optional[int] = None,
    bias_inside: bool = False,
) -> int:
    """
    f(A (dropout(H) W) + b), or f(A (dropout(H) W + b)) when bias_inside

    The second form is the influence-weighted aggregation, where every
    neighbor message carries the bias.
    """
    H = _input_node(tape, H, dropout, training, rng)
    messages = _transform(tape, H, weight)
    if bias_inside:
        pre = tape.spmm(aggregator, tape.add_bias(messages, bias))
    else:
        pre = tape.add_bias(tape.spmm(aggregator, messages), bias)
    return activation_node(tape, pre, spec, coefficients)


def dense_layer(
    tape: Tape,
    H,
    weight: int,
    bias: int,
    spec: ActivationSpec,
    dropout: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
    coefficients: Optional[int] = None,
) -> int:
    """f(dropout(H) W + b)"""
    H = _input_node(tape, H, dropout, training, rng)
    return activation_node(tape, tape.add_bias(_transform(tape, H, weight), bias), spec,
                           coefficients)


class GraphModel:
    """
    Parameter layout and forward pass of a resolved ModelConfig

    Parameters are named layer{i}.weight, layer{i}.bias and, for learnable
    convex activations, layer{i}.coefficients.
    """

    def __init__(self, config: ModelConfig):
        if not config.is_resolved:
            raise ConfigurationError(
                "Model config has unset outer dimensions; resolve it against a dataset first"
            )
        self.config = config

    @property
    def layers(self) -> List[LayerSpec]:
        return list(self.config.layers)

    def parameter_shapes(self) -> Dict[str, Tuple[int, int]]:
        shapes = {}
        for i, layer in enumerate(self.config.layers):
            shapes[f"layer{i}.weight"] = (layer.in_dim, layer.out_dim)
            shapes[f"layer{i}.bias"] = (1, layer.out_dim)
            if layer.activation.learnable:
                shapes[f"layer{i}.coefficients"] = (1, len(layer.activation.members))
        return shapes

    def init_params(self, rng: np.random.Generator) -> Params:
        """Glorot-uniform weights, zero biases, coefficients from each activation"""
        params = {}
        for i, layer in enumerate(self.config.layers):
            limit = np.sqrt(6.0 / (layer.in_dim + layer.out_dim))
            params[f"layer{i}.weight"] = rng.uniform(-limit, limit, (layer.in_dim, layer.out_dim))
            params[f"layer{i}.bias"] = np.zeros((1, layer.out_dim))
            if layer.activation.learnable:
                params[f"layer{i}.coefficients"] = np.array([layer.activation.coefficients],
                                                            dtype=np.float64)
        return params

    def check_params(self, params: Params):
        expected = self.parameter_shapes()
        missing = sorted(set(expected) - set(params))
        if missing:
            raise ConfigurationError(f"Missing model parameters: {missing}")
        for name, shape in expected.items():
            actual = np.shape(params[name])
            if tuple(actual) != shape:
                raise ConfigurationError(
                    f"Parameter {name} has shape {tuple(actual)}, config expects {shape}"
                )

    def bind(self, tape: Tape, params: Params) -> Dict[str, int]:
        """Place the model parameters on a tape"""
        self.check_params(params)
        return {name: tape.parameter(params[name], name) for name in self.parameter_shapes()}

    def forward(
        self,
        tape: Tape,
        nodes: Dict[str, int],
        aggregator,
        features: Inputs,
        training: bool = False,
        rng: Optional[np.random.Generator] = None,
        bias_inside: bool = False,
    ) -> int:
        """Logits node for the whole layer stack"""
        aggregator = _aggregator(aggregator)
        n, feature_count = _shape(features)
        if aggregator.shape != (n, n):
            raise ConfigurationError(
                f"Propagator of shape {aggregator.shape} does not fit {n} nodes"
            )
        if feature_count != self.config.layers[0].in_dim:
            raise ConfigurationError(
                f"Model expects {self.config.layers[0].in_dim} input features, got {feature_count}"
            )

        H: Union[int, SparseMatrix, DenseMatrix] = features
        if self.config.input_dropout > 0.0:
            H = _input_node(tape, H, self.config.input_dropout, training, rng)

        for i, layer in enumerate(self.config.layers):
            coefficients = nodes.get(f"layer{i}.coefficients")
            common = dict(
                weight=nodes[f"layer{i}.weight"],
                bias=nodes[f"layer{i}.bias"],
                spec=layer.activation,
                dropout=layer.dropout,
                training=training,
                rng=rng,
                coefficients=coefficients,
            )
            if layer.kind == "graph":
                H = graph_layer(tape, aggregator, H, bias_inside=bias_inside, **common)
            else:
                H = dense_layer(tape, H, **common)
        return int(H)

    def project_coefficients(self, params: Params) -> Params:
        """Put every learnable coefficient vector back on the simplex"""
        return project_coefficients(params)


def project_coefficients(params: Params) -> Params:
    projected = dict(params)
    for name, value in params.items():
        if name.endswith(".coefficients"):
            projected[name] = simplex_project(value).reshape(1, -1)
    return projected


def _single_layer(kind: str, P, H, W, b, spec, dropout, training, rng) -> DenseMatrix:
    if isinstance(spec, str):
        spec = BaseActivation(kind=spec)
    tape = Tape()
    weight = tape.constant(W)
    bias = tape.constant(as_dense(b, "bias"))
    H = H if isinstance(H, SparseMatrix) else as_dense(H, "H")
    if kind == "graph":
        out = graph_layer(tape, _aggregator(P), H, weight, bias, spec, dropout, training, rng)
    else:
        out = dense_layer(tape, H, weight, bias, spec, dropout, training, rng)
    return tape.value(out)


def gcn_layer_forward(
    P,
    H: Inputs,
    W,
    b,
    spec: Union[ActivationSpec, str] = "none",
    dropout: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> DenseMatrix:
    """activation(P (dropout(H) W) + b) without gradient bookkeeping"""
    return _single_layer("graph", P, H, W, b, spec, dropout, training, rng)


def dense_layer_forward(
    H: Inputs,
    W,
    b,
    spec: Union[ActivationSpec, str] = "none",
    dropout: float = 0.0,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> DenseMatrix:
    return _single_layer("dense", None, H, W, b, spec, dropout, training, rng)


def model_forward(
    cfg: ModelConfig,
    params: Params,
    P,
    X: Inputs,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
    adjacency: Optional[SparseMatrix] = None,
) -> DenseMatrix:
    """
    Logits of a full model

    Confidence models additionally need the raw adjacency and the
    confidence.* entries of params.
    """
    model = GraphModel(cfg)
    tape = Tape()
    nodes = model.bind(tape, params)
    aggregator = P
    bias_inside = False
    if cfg.confidence:
        from ..confidence import ConfidenceState, aggregation_matrix

        if adjacency is None:
            raise ConfigurationError("Confidence models need the raw adjacency")
        state = ConfidenceState.from_params(params)
        aggregator = aggregation_matrix(adjacency, state, cfg.confidence_params, _aggregator(P))
        bias_inside = True
    logits = model.forward(tape, nodes, aggregator, X, training, rng, bias_inside)
    return tape.value(logits)
