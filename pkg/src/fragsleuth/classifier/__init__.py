from .encoding import encode_fragment, encode_bytes
from .model import FragmentClassifier, ARCHITECTURE
from .checkpoint import (
    CheckpointData,
    save_checkpoint,
    load_checkpoint,
    checkpoint_from_model,
    model_from_checkpoint,
)
from .training import TrainConfig, EpochStats, TrainResult, train, write_epoch_log, read_epoch_log

__all__ = [
    "encode_fragment",
    "encode_bytes",
    "FragmentClassifier",
    "ARCHITECTURE",
    "CheckpointData",
    "save_checkpoint",
    "load_checkpoint",
    "checkpoint_from_model",
    "model_from_checkpoint",
    "TrainConfig",
    "EpochStats",
    "TrainResult",
    "train",
    "write_epoch_log",
    "read_epoch_log",
]
