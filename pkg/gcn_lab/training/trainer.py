"""
Full-batch training loop with early stopping on validation loss
"""

import logging
import time
from typing import Dict, Optional, Tuple

import numpy as np

from ..confidence import (
    MU_PARAM,
    PRECISION_PARAM,
    ConfidenceState,
    aggregation_matrix,
    confidence_loss_nodes,
    undirected_edges,
)
from ..errors import ConfigurationError, TrainingDivergedError
from ..graphio import SPLITS, Dataset
from ..layers import GraphModel, ModelConfig, model_forward, project_coefficients
from ..tensorcore import DenseMatrix, Tape
from ..topology import build_propagator
from .events import TrainingEventManager
from .metrics import accuracy
from .optimizer import AdamState, adam_step
from .report import EpochRecord, RunReport, TrainConfig, config_fingerprint

logger = logging.getLogger(__name__)

Params = Dict[str, DenseMatrix]

DECAYED_PARAM = "layer0.weight"


def make_rng(seed: int) -> np.random.Generator:
    """The one generator used for init and dropout"""
    return np.random.Generator(np.random.PCG64(seed))


class TrainingSession:
    """
    One training run: parameters, optimizer state and events

    A session is owned by one thread; separate sessions share nothing.
    """

    def __init__(
        self,
        model_config: ModelConfig,
        train_config: TrainConfig,
        dataset: Dataset,
        events: Optional[TrainingEventManager] = None,
        preset: Optional[str] = None,
    ):
        for split in SPLITS:
            if dataset.split_index(split).size == 0:
                raise ConfigurationError(f"Dataset {dataset.name} has an empty {split} split")
        self.config = model_config.resolve(dataset.num_features, dataset.num_classes)
        self.train_config = train_config
        self.dataset = dataset
        self.preset = preset
        self.events = events or TrainingEventManager()

        self.model = GraphModel(self.config)
        self.rng = make_rng(train_config.seed)
        self.params: Params = self.model.init_params(self.rng)
        if self.config.confidence:
            state = ConfidenceState.initial(dataset.num_nodes, dataset.num_classes)
            self.params.update(state.to_params())
        self.adam = AdamState()
        self.propagator = build_propagator(dataset.adjacency, self.config.diag_mode)
        self.edges = undirected_edges(dataset.adjacency)
        self.fingerprint = config_fingerprint(self.config, train_config)

    # Forward passes

    def _aggregator(self, params: Params):
        if not self.config.confidence:
            return self.propagator.matrix, False
        state = ConfidenceState.from_params(params)
        matrix = aggregation_matrix(
            self.dataset.adjacency, state, self.config.confidence_params, self.propagator.matrix
        )
        return matrix, True

    def _logits(self, tape: Tape, nodes: Dict[str, int], params: Params, training: bool) -> int:
        aggregator, bias_inside = self._aggregator(params)
        return self.model.forward(
            tape,
            nodes,
            aggregator,
            self.dataset.features,
            training=training,
            rng=self.rng if training else None,
            bias_inside=bias_inside,
        )

    def _bind(self, tape: Tape, params: Params) -> Dict[str, int]:
        nodes = self.model.bind(tape, params)
        if self.config.confidence:
            for name in (MU_PARAM, PRECISION_PARAM):
                nodes[name] = tape.parameter(params[name], name)
        return nodes

    def _decay_penalty(self, params: Params) -> float:
        weight = params[DECAYED_PARAM]
        return 0.5 * self.train_config.weight_decay * float((weight * weight).sum())

    def logits(self, params: Optional[Params] = None) -> DenseMatrix:
        """Evaluation-mode logits (no dropout)"""
        params = self.params if params is None else params
        tape = Tape()
        return tape.value(self._logits(tape, self._bind(tape, params), params, training=False))

    def train_step(self) -> Tuple[float, Dict[str, DenseMatrix]]:
        """One forward/backward pass in training mode; returns the loss and gradients"""
        tape = Tape()
        nodes = self._bind(tape, self.params)
        logits = self._logits(tape, nodes, self.params, training=True)
        loss = tape.softmax_cross_entropy(logits, self.dataset.labels, self.dataset.train_index)
        if self.config.confidence:
            conf = self.config.confidence_params
            terms = confidence_loss_nodes(
                tape,
                nodes[MU_PARAM],
                nodes[PRECISION_PARAM],
                self.dataset.labels,
                self.dataset.train_index,
                self.edges,
                conf.lambda_smooth,
                conf.lambda_reg,
            )
            loss = tape.add(loss, terms.total)
        grads = tape.backward(loss)
        return float(tape.value(loss)[0, 0]) + self._decay_penalty(self.params), grads

    def evaluate_split(self, split: str, params: Optional[Params] = None) -> Tuple[float, float]:
        """Cross-entropy and accuracy of evaluation-mode logits on a split"""
        index = self.dataset.split_index(split)
        logits = self.logits(params)
        tape = Tape()
        loss = tape.softmax_cross_entropy(tape.constant(logits), self.dataset.labels, index)
        return float(tape.value(loss)[0, 0]), accuracy(logits, self.dataset.labels, index)

    # Loop

    def _diverged(self, epoch: int, loss: float):
        logger.error(f"Loss {loss} at epoch {epoch}; aborting run")
        self.events.emit("run_diverged", {"epoch": epoch, "loss": loss})
        raise TrainingDivergedError(epoch, loss)

    def run(self) -> RunReport:
        tcfg = self.train_config
        self.events.emit(
            "run_started",
            {"dataset": self.dataset.name, "seed": tcfg.seed, "preset": self.preset},
        )
        history = []
        best_loss, best_accuracy, best_epoch = np.inf, 0.0, 0
        best_params = dict(self.params)
        waited = 0
        stopped_early = False

        for epoch in range(1, tcfg.max_epochs + 1):
            started = time.perf_counter()
            train_loss, grads = self.train_step()
            if not np.isfinite(train_loss):
                self._diverged(epoch, train_loss)
            self.params, self.adam = adam_step(
                self.params, grads, self.adam, tcfg.learning_rate, tcfg.weight_decay,
                decay=(DECAYED_PARAM,),
            )
            self.params = project_coefficients(self.params)
            val_loss, val_accuracy = self.evaluate_split("val")
            if not np.isfinite(val_loss):
                self._diverged(epoch, val_loss)
            seconds = time.perf_counter() - started

            history.append(EpochRecord(epoch=epoch, train_loss=train_loss, val_loss=val_loss,
                                       val_accuracy=val_accuracy, seconds=seconds))
            self.events.emit(
                "epoch_completed",
                {"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss,
                 "val_accuracy": val_accuracy, "seconds": seconds},
            )
            logger.debug(f"epoch {epoch}: train {train_loss:.6f} val {val_loss:.6f}")

            if val_loss < best_loss:
                best_loss, best_accuracy, best_epoch = val_loss, val_accuracy, epoch
                best_params = dict(self.params)
                waited = 0
            else:
                waited += 1
                if waited >= tcfg.early_stop_patience:
                    stopped_early = True
                    self.events.emit("early_stopped", {"epoch": epoch, "best_epoch": best_epoch})
                    break

        self.params = best_params
        _, test_accuracy = self.evaluate_split("test")
        report = RunReport(
            preset=self.preset,
            dataset=self.dataset.name,
            seed=tcfg.seed,
            config_fingerprint=self.fingerprint,
            epochs_run=len(history),
            best_epoch=best_epoch,
            stopped_early=stopped_early,
            test_accuracy=test_accuracy,
            best_val_accuracy=best_accuracy,
            best_val_loss=float(best_loss),
            history=history,
        )
        self.events.emit(
            "run_completed",
            {"test_accuracy": test_accuracy, "epochs": len(history), "best_epoch": best_epoch},
        )
        return report


def train(
    cfg: ModelConfig,
    tcfg: TrainConfig,
    dataset: Dataset,
    events: Optional[TrainingEventManager] = None,
    preset: Optional[str] = None,
) -> RunReport:
    """Seeded init, full-batch Adam, best-validation restore, test accuracy"""
    return TrainingSession(cfg, tcfg, dataset, events, preset).run()


def train_with_params(
    cfg: ModelConfig,
    tcfg: TrainConfig,
    dataset: Dataset,
    events: Optional[TrainingEventManager] = None,
    preset: Optional[str] = None,
) -> Tuple[RunReport, Params]:
    """Like train, also returning the restored best parameters"""
    session = TrainingSession(cfg, tcfg, dataset, events, preset)
    report = session.run()
    return report, session.params


def evaluate(cfg: ModelConfig, params: Params, dataset: Dataset, split: str) -> float:
    """Accuracy on a split with dropout disabled"""
    index = dataset.split_index(split)
    config = cfg.resolve(dataset.num_features, dataset.num_classes)
    propagator = build_propagator(dataset.adjacency, config.diag_mode)
    logits = model_forward(
        config, params, propagator, dataset.features, training=False,
        adjacency=dataset.adjacency,
    )
    return accuracy(logits, dataset.labels, index)
