"""Synthetic NARX data and noisy driving-series injection."""

import logging
import numpy as np
from .series import RawSeries

logger = logging.getLogger(__name__)


def synth_narx(n, length, relevant, noise_std, seed):
    """Generates a NARX dataset with a known set of relevant driving series.

    Driving series are independent AR(1) processes ``x_t = 0.9 x_{t-1} + e_t`` with standard normal e_t (and
    x_0 = e_0). The target is ``y_t = tanh(sum_{k in relevant} x^k_t) + 0.5 y_{t-1} + eta_t`` with
    eta_t ~ N(0, noise_std^2) and y_{-1} = 0.

    :param n: number of driving series
    :param length: number of time steps (>= 100)
    :param relevant: 1-based indices of the series that drive the target
    :param noise_std: standard deviation of the target noise
    :param seed: integer seed
    :return: RawSeries with columns x1..xn and target y
    """
    relevant = sorted(set(int(k) for k in relevant))
    if not relevant:
        raise ValueError('at least one relevant driving series is required')
    if relevant[0] < 1 or relevant[-1] > n:
        raise ValueError('relevant indices %s are outside 1..%d' % (relevant, n))
    if length < 100:
        raise ValueError('synthetic series need at least 100 steps, got %d' % length)
    if noise_std < 0:
        raise ValueError('noise_std must be non-negative, got %r' % noise_std)

    rng = np.random.default_rng(seed)
    shocks = rng.standard_normal((n, length))
    noise = rng.standard_normal(length) * noise_std
    driving = np.empty((n, length))
    driving[:, 0] = shocks[:, 0]
    for t in range(1, length):
        driving[:, t] = 0.9 * driving[:, t - 1] + shocks[:, t]

    drive = np.tanh(driving[[k - 1 for k in relevant]].sum(axis=0))
    target = np.empty(length)
    previous = 0.0
    for t in range(length):
        previous = target[t] = drive[t] + 0.5 * previous + noise[t]
    logger.debug('Generated synthetic NARX data: n=%d, L=%d, relevant=%s', n, length, relevant)
    return RawSeries(driving, target, ['x%d' % (k + 1) for k in range(n)], 'y')


def inject_noise_series(series, seed):
    """Appends, for every driving series, a copy whose time order is an independent random permutation.

    :param series: RawSeries with n driving series
    :param seed: integer seed
    :return: RawSeries with 2n driving series (originals first); the target is unchanged
    """
    if len(series.names) < 1:
        raise ValueError('at least one driving series is required')
    rng = np.random.default_rng(seed)
    noisy = np.array([rng.permutation(row) for row in series.driving])
    return series._replace(driving=np.concatenate([series.driving, noisy]),
                           names=list(series.names) + ['%s_perm' % name for name in series.names])
