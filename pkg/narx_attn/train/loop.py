"""Minibatch training with best-validation model selection, and evaluation in original units."""

import collections
import logging
import time
import numpy as np
from .. import ndcore as nd
from ..data import make_windows, stack_windows, take, split, standardize, StandardizeStats
from ..errors import NumericError, TrainingDiverged
from ..metrics import PairedSeries, metrics_record, rmse
from ..network import batch_loss, predict_batch
from .optim import AdamState, adam_step, lr_at, is_finite

logger = logging.getLogger(__name__)

#: windows are evaluated in chunks of this many when no gradient is needed
EVAL_CHUNK = 1024


class TrainConfig (collections.namedtuple('TrainConfig',
                                          'batch_size lr0 decay_factor decay_every max_epochs seed shuffle')):
    """Optimization settings of one training run."""

    def __new__(cls, batch_size=128, lr0=0.001, decay_factor=0.9, decay_every=10000, max_epochs=10, seed=0,
                shuffle=True):
        return super(TrainConfig, cls).__new__(cls, int(batch_size), float(lr0), float(decay_factor),
                                               int(decay_every), int(max_epochs), int(seed), bool(shuffle))

    def validate(self):
        if self.batch_size < 1:
            raise ValueError('batch_size must be at least 1, got %d' % self.batch_size)
        if not 0.0 < self.decay_factor <= 1.0:
            raise ValueError('decay_factor must lie in (0, 1], got %r' % self.decay_factor)
        if self.decay_every < 1:
            raise ValueError('decay_every must be at least 1, got %d' % self.decay_every)
        if self.lr0 < 0.0:
            raise ValueError('lr0 must be non-negative, got %r' % self.lr0)
        if self.max_epochs < 0:
            raise ValueError('max_epochs must be non-negative, got %d' % self.max_epochs)
        return self


class DatasetSplits (collections.namedtuple('DatasetSplits', 'train valid test stats')):
    """Window lists of the three splits, and the statistics that map the target back to original units."""

    @classmethod
    def from_series(cls, series, spec, T, normalization='standardize'):
        """Splits, standardizes on the training range, and cuts windows of length T.

        :param series: RawSeries
        :param spec: SplitSpec
        :param T: window length
        :param normalization: 'standardize' or 'none'
        :return: DatasetSplits
        """
        if len(series.target) <= T:
            raise ValueError('series of length %d is too short for windows of length %d' % (len(series.target), T))
        ranges = split(series, spec)
        scaled, stats = standardize(series, ranges.train, normalization)
        return cls(*[make_windows(scaled, T, r) for r in ranges], stats=stats)


class TrainReport (collections.namedtuple('TrainReport',
                                          'epoch_losses valid_rmse best_epoch wall_time final_lr seed')):
    """Per-epoch history of a run; entry 0 describes the initialized model."""

    def to_json(self):
        return collections.OrderedDict([
            ('epoch_losses', [float(x) for x in self.epoch_losses]),
            ('valid_rmse', [float(x) for x in self.valid_rmse]),
            ('best_epoch', int(self.best_epoch)),
            ('final_lr', float(self.final_lr)),
            ('seed', int(self.seed)),
            ('wall_time', float(self.wall_time))
        ])


def _predict(model, batch):
    return np.concatenate([
        predict_batch(model, take(batch, slice(start, start + EVAL_CHUNK)))
        for start in range(0, len(batch.y), EVAL_CHUNK)
    ])


def _mse(model, batch):
    errors = _predict(model, batch) - batch.y
    return float(np.mean(errors * errors))


def _valid_rmse(model, batch, stats):
    return rmse(PairedSeries(stats.inverse_target(batch.y), stats.inverse_target(_predict(model, batch))))


def train(model, splits, cfg):
    """Trains a copy of ``model`` and returns the snapshot with the lowest validation RMSE.

    Each epoch visits the training windows in a seeded random order (unless ``cfg.shuffle`` is off) in minibatches
    of ``cfg.batch_size``; the last batch of an epoch may be smaller. Every minibatch takes one Adam step with the
    learning rate of the global iteration count.

    :param model: initialized Model (left unchanged)
    :param splits: DatasetSplits with non-empty train and valid window lists
    :param cfg: TrainConfig
    :return: (best Model, TrainReport)
    :raises TrainingDiverged: when a minibatch loss becomes non-finite
    """
    cfg.validate()
    if not splits.train or not splits.valid:
        raise ValueError('training requires non-empty train and validation window lists')
    stats = splits.stats if splits.stats is not None else StandardizeStats.identity(model.hyperparams.n)
    train_batch, valid_batch = stack_windows(splits.train), stack_windows(splits.valid)
    start_time = time.time()

    working = model.snapshot()
    adam = AdamState(working.store)
    rng = np.random.default_rng(cfg.seed)
    best, best_epoch = working.snapshot(), 0
    epoch_losses, valid_rmse = [_mse(working, train_batch)], [_valid_rmse(working, valid_batch, stats)]
    iteration, lr = 0, lr_at(0, cfg)
    count = len(train_batch.y)

    for epoch in range(1, cfg.max_epochs + 1):
        order = rng.permutation(count) if cfg.shuffle else np.arange(count)
        for start in range(0, count, cfg.batch_size):
            lr = lr_at(iteration, cfg)
            tape = nd.Tape()
            try:
                loss = batch_loss(working, take(train_batch, order[start:start + cfg.batch_size]), tape)
            except NumericError as e:
                raise TrainingDiverged(iteration, lr, float('nan')) from e
            if not is_finite(loss.value):
                raise TrainingDiverged(iteration, lr, float(loss.value))
            tape.backward(loss)
            adam_step(working.store, adam, lr)
            iteration += 1
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug('iteration %d: loss %.6g (lr=%g)', iteration, float(loss.value), lr)

        epoch_losses.append(_mse(working, train_batch))
        valid_rmse.append(_valid_rmse(working, valid_batch, stats))
        if valid_rmse[-1] < valid_rmse[best_epoch]:
            best, best_epoch = working.snapshot(), epoch
        logger.info('epoch %d/%d: train mse %.6g, valid rmse %.6g (lr=%g)',
                    epoch, cfg.max_epochs, epoch_losses[-1], valid_rmse[-1], lr)

    report = TrainReport(epoch_losses, valid_rmse, best_epoch, time.time() - start_time, lr, cfg.seed)
    logger.info('training done: best epoch %d, valid rmse %.6g', best_epoch, valid_rmse[best_epoch])
    return best, report


#: per-window predictions in original units
Predictions = collections.namedtuple('Predictions', 'index y_true y_pred')


def predictions(model, windows, stats=None):
    """Predicts every window and maps targets and predictions back to original units.

    :return: Predictions of numpy vectors
    """
    if not windows:
        raise ValueError('no windows to predict')
    stats = stats if stats is not None else StandardizeStats.identity(model.hyperparams.n)
    batch = stack_windows(windows)
    return Predictions(batch.index, stats.inverse_target(batch.y), stats.inverse_target(_predict(model, batch)))


def evaluate(model, windows, stats=None):
    """Returns the metrics record (rmse, mae, mape_percent) of ``model`` on ``windows``, in original units."""
    result = predictions(model, windows, stats)
    return metrics_record(PairedSeries(result.y_true, result.y_pred))
