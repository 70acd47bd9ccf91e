"""Sliding-window construction over a (standardized) series."""

import collections
import logging
import numpy as np

logger = logging.getLogger(__name__)

#: one training example: X (n x T), y_hist (T - 1), the target y at X's last column, and its absolute position
DrivingWindow = collections.namedtuple('DrivingWindow', 'X y_hist y_target target_index')

#: windows stacked along a leading batch axis: X (B x n x T), y_hist (B x (T - 1)), y (B), index (B)
WindowBatch = collections.namedtuple('WindowBatch', 'X y_hist y index')


def make_windows(series, T, index_range):
    """Builds one window per target index t in ``index_range`` with t >= T - 1.

    A window covers driving columns t-T+1..t and target history y[t-T+1..t-1]; the history may reach back before
    the range's start (into the preceding split), while targets never leave the range.

    :param series: RawSeries
    :param T: window length (>= 2)
    :param index_range: (start, stop) half-open range of target indices
    :return: list of DrivingWindow (possibly empty)
    """
    if T < 2:
        raise ValueError('window length T must be at least 2, got %d' % T)
    start, stop = index_range
    driving, target = series.driving, series.target
    windows = [
        DrivingWindow(driving[:, t - T + 1:t + 1], target[t - T + 1:t], float(target[t]), t)
        for t in range(max(start, T - 1), min(stop, len(target)))
    ]
    if not windows:
        logger.warning('No windows of length %d fit in range [%d, %d)', T, start, stop)
    return windows


def stack_windows(windows):
    """Stacks a non-empty list of windows into a WindowBatch."""
    if not windows:
        raise ValueError('cannot stack an empty list of windows')
    return WindowBatch(
        np.stack([w.X for w in windows]),
        np.stack([w.y_hist for w in windows]),
        np.array([w.y_target for w in windows], dtype=np.float64),
        np.array([w.target_index for w in windows], dtype=np.int64)
    )


def take(batch, indices):
    """Selects a sub-batch by position."""
    return WindowBatch(batch.X[indices], batch.y_hist[indices], batch.y[indices], batch.index[indices])
