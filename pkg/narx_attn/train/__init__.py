"""Optimization, training loop, and evaluation."""

from .optim import AdamState, adam_step, lr_at
from .loop import TrainConfig, DatasetSplits, TrainReport, Predictions, train, predictions, evaluate
