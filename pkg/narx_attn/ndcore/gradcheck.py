"""Finite-difference gradient checking."""

import collections
import logging
import math
import numpy as np
from ..errors import NumericError

logger = logging.getLogger(__name__)


class GradCheckReport (collections.namedtuple('GradCheckReport', 'errors tol')):
    """Per-parameter maximum relative error between analytic and central-difference gradients."""

    @property
    def passed(self):
        return all(error <= self.tol for error in self.errors.values())

    @property
    def offenders(self):
        return [name for name, error in self.errors.items() if error > self.tol]

    @property
    def worst(self):
        return max(self.errors.values()) if self.errors else 0.0


def relative_error(analytic, numeric):
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)


def finite_diff_check(loss_fn, store, step=1e-5, tol=1e-4, names=None):
    """Compares the gradients held in ``store`` against central finite differences of ``loss_fn``.

    The caller must have populated the store's gradient slots (e.g., by a tape backward pass) for the same loss.
    Parameter values are perturbed in place one scalar at a time and always restored.

    :param loss_fn: deterministic function of the store returning the scalar loss
    :param store: a ParameterStore with analytic gradients
    :param step: finite-difference step
    :param tol: maximum tolerated relative error
    :param names: parameter names to check (default all)
    :return: a GradCheckReport
    """
    errors = collections.OrderedDict()
    for name in names or store.names():
        value = store.value(name)
        analytic = store.grad(name).copy()
        worst = 0.0
        for index in np.ndindex(*value.shape):
            original = value[index]
            try:
                value[index] = original + step
                loss_plus = float(loss_fn(store))
                value[index] = original - step
                loss_minus = float(loss_fn(store))
            finally:
                value[index] = original
            if not (math.isfinite(loss_plus) and math.isfinite(loss_minus)):
                raise NumericError('non-finite loss while probing parameter "%s" at %s' % (name, index))
            numeric = (loss_plus - loss_minus) / (2.0 * step)
            worst = max(worst, relative_error(analytic[index], numeric))
        errors[name] = worst
        logger.debug('grad-check %s: max relative error %.3e', name, worst)
    return GradCheckReport(errors, tol)
