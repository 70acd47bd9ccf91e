"""Prediction error metrics over paired target/prediction sequences."""

import collections
import numpy as np
from .errors import DomainError

#: targets and predictions, equal non-zero length
PairedSeries = collections.namedtuple('PairedSeries', 'targets predictions')


def paired(targets, predictions):
    """Validates and returns a PairedSeries of float64 vectors."""
    targets = np.asarray(targets, dtype=np.float64).reshape(-1)
    predictions = np.asarray(predictions, dtype=np.float64).reshape(-1)
    if len(targets) != len(predictions):
        raise ValueError('%d targets paired with %d predictions' % (len(targets), len(predictions)))
    if len(targets) == 0:
        raise ValueError('metrics require at least one target/prediction pair')
    if not (np.all(np.isfinite(targets)) and np.all(np.isfinite(predictions))):
        raise ValueError('metrics require finite targets and predictions')
    return PairedSeries(targets, predictions)


def _errors(p):
    p = paired(*p)
    return p, p.targets - p.predictions


def rmse(p):
    _, errors = _errors(p)
    return float(np.sqrt(np.mean(errors * errors)))


def mae(p):
    _, errors = _errors(p)
    return float(np.mean(np.abs(errors)))


def mape(p):
    """Mean absolute percentage error, in percent.

    :raises DomainError: if any target is zero (its index is carried on the exception)
    """
    p, errors = _errors(p)
    zeros = np.flatnonzero(p.targets == 0.0)
    if len(zeros):
        raise DomainError('MAPE is undefined for a zero target (index %d)' % zeros[0], index=int(zeros[0]))
    return float(np.mean(np.abs(errors / p.targets)) * 100.0)


def metrics_record(p):
    """Returns ``{'rmse', 'mae', 'mape_percent'}`` for a paired series."""
    return collections.OrderedDict([
        ('rmse', rmse(p)),
        ('mae', mae(p)),
        ('mape_percent', mape(p))
    ])
