"""
Reverse-mode autodiff tape

Operations append nodes in execution order, so a node's parents always have
smaller ids. The backward pass walks ids in decreasing order and sums the
contributions of every use-site into each parent's gradient slot.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ContractViolation, DimensionError
from . import functional as F
from .matrices import DenseMatrix, SparseMatrix, as_dense, spmm

logger = logging.getLogger(__name__)

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


@dataclass
class TapeNode:
    """One recorded operation"""

    id: int
    kind: str
    parents: Tuple[int, ...]
    value: DenseMatrix
    requires_grad: bool
    name: Optional[str] = None
    backward_fn: Optional[BackwardFn] = None
    grad: Optional[DenseMatrix] = None


class Tape:
    """Append-only record of matrix operations; never shared between threads"""

    def __init__(self):
        self.nodes: List[TapeNode] = []
        self._parameters: Dict[str, int] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def _record(
        self,
        kind: str,
        parents: Tuple[int, ...],
        value: DenseMatrix,
        backward_fn: Optional[BackwardFn] = None,
        name: Optional[str] = None,
        requires_grad: Optional[bool] = None,
    ) -> int:
        if requires_grad is None:
            requires_grad = any(self.nodes[p].requires_grad for p in parents)
        node = TapeNode(
            id=len(self.nodes),
            kind=kind,
            parents=parents,
            value=value,
            requires_grad=requires_grad,
            name=name,
            backward_fn=backward_fn if requires_grad else None,
        )
        self.nodes.append(node)
        return node.id

    def value(self, node_id: int) -> DenseMatrix:
        return self.nodes[node_id].value

    def grad(self, node_id: int) -> Optional[DenseMatrix]:
        return self.nodes[node_id].grad

    def shape(self, node_id: int) -> Tuple[int, int]:
        return self.nodes[node_id].value.shape

    @property
    def parameters(self) -> Dict[str, int]:
        return dict(self._parameters)

    # Leaves

    def parameter(self, value, name: str) -> int:
        if name in self._parameters:
            raise ContractViolation(f"Parameter {name!r} already on tape")
        node_id = self._record("parameter", (), as_dense(value, name).copy(),
                               name=name, requires_grad=True)
        self._parameters[name] = node_id
        return node_id

    def constant(self, value) -> int:
        return self._record("constant", (), as_dense(value), requires_grad=False)

    # Linear algebra

    def spmm(self, sparse: SparseMatrix, x: int) -> int:
        """Constant sparse matrix times a tape node"""
        value = spmm(sparse, self.value(x))

        def backward(g):
            return (spmm(sparse.transposed, g),)

        return self._record("spmm", (x,), value, backward)

    def matmul(self, a: int, b: int) -> int:
        left, right = self.value(a), self.value(b)
        if left.shape[1] != right.shape[0]:
            raise DimensionError("matmul", left.shape, right.shape)

        def backward(g):
            return (g @ right.T, left.T @ g)

        return self._record("matmul", (a, b), left @ right, backward)

    def add_bias(self, x: int, bias: int) -> int:
        inputs, b = self.value(x), self.value(bias)
        if b.shape != (1, inputs.shape[1]):
            raise DimensionError("add_bias", inputs.shape, b.shape)

        def backward(g):
            return (g, g.sum(axis=0, keepdims=True))

        return self._record("add_bias", (x, bias), inputs + b, backward)

    def dense_affine(self, x: int, weight: int, bias: int) -> int:
        return self.add_bias(self.matmul(x, weight), bias)

    def sparse_affine(self, sparse: SparseMatrix, weight: int, bias: int) -> int:
        return self.add_bias(self.spmm(sparse, weight), bias)

    def add(self, a: int, b: int) -> int:
        left, right = self.value(a), self.value(b)
        if left.shape != right.shape:
            raise DimensionError("add", left.shape, right.shape)

        def backward(g):
            return (g, g)

        return self._record("add", (a, b), left + right, backward)

    def scale(self, x: int, factor: float) -> int:
        factor = float(factor)

        def backward(g):
            return (g * factor,)

        return self._record("scale", (x,), self.value(x) * factor, backward)

    def sum(self, x: int) -> int:
        inputs = self.value(x)

        def backward(g):
            return (np.full(inputs.shape, g[0, 0]),)

        return self._record("sum", (x,), np.array([[inputs.sum()]]), backward)

    def square(self, x: int) -> int:
        inputs = self.value(x)

        def backward(g):
            return (2.0 * inputs * g,)

        return self._record("square", (x,), inputs * inputs, backward)

    # Elementwise nonlinearities

    def activation(self, x: int, kind: str) -> int:
        if kind not in F.ELEMENTWISE:
            raise ContractViolation(f"Unknown activation {kind!r}")
        fn, grad_fn = F.ELEMENTWISE[kind]
        inputs = self.value(x)

        def backward(g):
            return (g * grad_fn(inputs),)

        return self._record(f"activation:{kind}", (x,), fn(inputs), backward)

    def convex_activation(
        self,
        x: int,
        members: Sequence[str],
        coefficients: Union[int, np.ndarray],
    ) -> int:
        """
        Sum_i c_i f_i(x)

        Args:
            x: input node
            members: base activation kinds f_i
            coefficients: a 1 x len(members) tape node (learnable) or a fixed array

        When every member is the same function the combination is that function
        itself (the coefficients sum to one) and the coefficients get no gradient.
        """
        unknown = [m for m in members if m not in F.ELEMENTWISE]
        if unknown:
            raise ContractViolation(f"Unknown activation(s) {unknown}")
        inputs = self.value(x)
        if isinstance(coefficients, (int, np.integer)):
            coeff_id: Optional[int] = int(coefficients)
            coeffs = self.value(coeff_id).ravel()
        else:
            coeff_id = None
            coeffs = np.asarray(coefficients, dtype=np.float64).ravel()
        if len(coeffs) != len(members):
            raise DimensionError("convex_activation", (len(members),), coeffs.shape)

        collapsed = len(set(members)) == 1
        if collapsed:
            fn, grad_fn = F.ELEMENTWISE[members[0]]
            outputs = [fn(inputs)]
            value = outputs[0]
        else:
            outputs = [F.ELEMENTWISE[m][0](inputs) for m in members]
            value = np.zeros_like(inputs)
            for c, out in zip(coeffs, outputs):
                value = value + c * out

        def backward(g):
            if collapsed:
                dx = g * F.ELEMENTWISE[members[0]][1](inputs)
                dc = np.zeros((1, len(members)))
            else:
                dx = np.zeros_like(inputs)
                for c, m in zip(coeffs, members):
                    dx = dx + c * F.ELEMENTWISE[m][1](inputs)
                dx = g * dx
                dc = np.array([[float((out * g).sum()) for out in outputs]])
            return (dx, dc) if coeff_id is not None else (dx,)

        parents = (x, coeff_id) if coeff_id is not None else (x,)
        return self._record("convex_activation", parents, value, backward)

    def softplus(self, x: int, offset: float = 0.0) -> int:
        inputs = self.value(x)

        def backward(g):
            return (g * F.sigmoid(inputs),)

        return self._record("softplus", (x,), F.softplus(inputs) + offset, backward)

    def dropout(
        self, x: int, rate: float, training: bool, rng: Optional[np.random.Generator]
    ) -> int:
        """Inverted dropout in training mode, identity otherwise"""
        inputs = self.value(x)
        if not training or rate <= 0.0:
            return self._record("dropout", (x,), inputs, lambda g: (g,))
        if rng is None:
            raise ContractViolation("Training-mode dropout needs a random generator")
        mask = (rng.random(inputs.shape) >= rate) / (1.0 - rate)

        def backward(g):
            return (g * mask,)

        return self._record("dropout", (x,), inputs * mask, backward)

    # Losses

    def softmax_cross_entropy(self, logits: int, labels: np.ndarray, index: np.ndarray) -> int:
        """Mean of -log softmax(logits)[label] over the indexed rows"""
        index = np.asarray(index, dtype=np.int64)
        if index.size == 0:
            raise ContractViolation("softmax_cross_entropy over an empty mask")
        targets = np.asarray(labels)[index]
        if np.any(targets < 0):
            raise ContractViolation("softmax_cross_entropy mask contains unlabeled nodes")
        scores = self.value(logits)
        log_probs = F.log_softmax(scores[index])
        picked = log_probs[np.arange(len(index)), targets]
        loss = -picked.sum() / len(index)

        def backward(g):
            local = np.exp(log_probs)
            local[np.arange(len(index)), targets] -= 1.0
            full = np.zeros_like(scores)
            np.add.at(full, index, local * (g[0, 0] / len(index)))
            return (full,)

        return self._record("softmax_cross_entropy", (logits,), np.array([[loss]]), backward)

    def edge_mahalanobis(self, mu: int, precision: int, rows: np.ndarray, cols: np.ndarray) -> int:
        """Sum over edges (u, v) of sum_i (mu_u,i - mu_v,i)^2 (p_u,i + p_v,i)"""
        means, prec = self.value(mu), self.value(precision)
        if means.shape != prec.shape:
            raise DimensionError("edge_mahalanobis", means.shape, prec.shape)
        diff = means[rows] - means[cols]
        weight = prec[rows] + prec[cols]
        total = float((diff * diff * weight).sum())

        def backward(g):
            scale = g[0, 0]
            d_mu = np.zeros_like(means)
            d_prec = np.zeros_like(prec)
            step = 2.0 * diff * weight * scale
            np.add.at(d_mu, rows, step)
            np.add.at(d_mu, cols, -step)
            sq = diff * diff * scale
            np.add.at(d_prec, rows, sq)
            np.add.at(d_prec, cols, sq)
            return (d_mu, d_prec)

        return self._record("edge_mahalanobis", (mu, precision), np.array([[total]]), backward)

    # Backward pass

    def backward(self, loss_node: int) -> Dict[str, DenseMatrix]:
        """
        Accumulate gradients of a scalar loss into every reachable node

        Returns:
            Gradient per parameter name (zeros for parameters the loss ignores)
        """
        loss = self.nodes[loss_node]
        if loss.value.shape != (1, 1):
            raise ContractViolation(
                f"backward needs a 1x1 loss, node {loss_node} has shape {loss.value.shape}"
            )
        for node in self.nodes:
            node.grad = None
        loss.grad = np.ones((1, 1))

        for node_id in range(loss_node, -1, -1):
            node = self.nodes[node_id]
            if node.grad is None or node.backward_fn is None:
                continue
            parent_grads = node.backward_fn(node.grad)
            for parent_id, parent_grad in zip(node.parents, parent_grads):
                parent = self.nodes[parent_id]
                if parent_grad is None or not parent.requires_grad:
                    continue
                if parent_grad.shape != parent.value.shape:
                    raise DimensionError(f"backward({node.kind})", parent.value.shape,
                                         parent_grad.shape)
                parent.grad = parent_grad if parent.grad is None else parent.grad + parent_grad

        grads = {}
        for name, node_id in self._parameters.items():
            node = self.nodes[node_id]
            grads[name] = node.grad if node.grad is not None else np.zeros_like(node.value)
        return grads


def backward(tape: Tape, loss_node: int) -> Dict[str, DenseMatrix]:
    """Gradients of a scalar loss node with respect to every parameter on the tape"""
    return tape.backward(loss_node)
