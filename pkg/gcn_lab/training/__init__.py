from .events import EVENT_TYPES, TrainingEventManager, progress_logger
from .metrics import LOSS_VARIANTS, accuracy, as_index, softmax_cross_entropy
from .optimizer import AdamState, adam_step
from .report import (
    EpochRecord,
    RunConfig,
    RunReport,
    TrainConfig,
    config_fingerprint,
    load_run_config,
    parse_run_config,
)
from .trainer import TrainingSession, evaluate, make_rng, train, train_with_params

__all__ = [
    "AdamState",
    "EVENT_TYPES",
    "EpochRecord",
    "LOSS_VARIANTS",
    "RunConfig",
    "RunReport",
    "TrainConfig",
    "TrainingEventManager",
    "TrainingSession",
    "accuracy",
    "adam_step",
    "as_index",
    "config_fingerprint",
    "evaluate",
    "load_run_config",
    "make_rng",
    "parse_run_config",
    "progress_logger",
    "softmax_cross_entropy",
    "train",
    "train_with_params",
]
