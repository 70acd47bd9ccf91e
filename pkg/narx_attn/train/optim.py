"""Adam updates and the stepwise learning-rate schedule."""

import logging
import math
import numpy as np
from ..errors import NumericError

logger = logging.getLogger(__name__)


def lr_at(iteration, cfg):
    """Learning rate ``lr0 * decay_factor ** floor(iteration / decay_every)`` of a global iteration.

    :param iteration: zero-based global iteration count
    :param cfg: TrainConfig (or anything with lr0, decay_factor and decay_every)
    """
    if iteration < 0:
        raise ValueError('iteration must be non-negative, got %d' % iteration)
    return cfg.lr0 * cfg.decay_factor ** (iteration // cfg.decay_every)


class AdamState (object):
    """First and second moment accumulators, per parameter, and the step counter."""

    def __init__(self, store, beta1=0.9, beta2=0.999, eps=1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {name: np.zeros(store.shape(name)) for name in store}
        self.v = {name: np.zeros(store.shape(name)) for name in store}

    def __repr__(self):
        return 'AdamState(t=%d, parameters=%d)' % (self.t, len(self.m))


def adam_step(store, adam, lr):
    """Applies one bias-corrected Adam update to every parameter of ``store``, then clears the gradients.

    :param store: ParameterStore with populated gradients
    :param adam: AdamState created for the same store
    :param lr: learning rate of this step
    """
    for name in store:
        if not np.all(np.isfinite(store.grad(name))):
            raise NumericError('non-finite gradient for parameter "%s"' % name)
        assert adam.m[name].shape == store.shape(name), 'optimizer state does not match parameter "%s"' % name

    adam.t += 1
    correction1 = 1.0 - adam.beta1 ** adam.t
    correction2 = 1.0 - adam.beta2 ** adam.t
    for name in store:
        g = store.grad(name)
        m, v = adam.m[name], adam.v[name]
        m *= adam.beta1
        m += (1.0 - adam.beta1) * g
        v *= adam.beta2
        v += (1.0 - adam.beta2) * g * g
        value = store.value(name)
        value -= lr * (m / correction1) / (np.sqrt(v / correction2) + adam.eps)
    store.zero_grad()
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug('adam step %d (lr=%g)', adam.t, lr)


def is_finite(value):
    return math.isfinite(float(value))
