"""Dense arithmetic, reverse-mode differentiation, and parameter storage."""

from .tape import Tape, Var, Node, as_array, value_of, matvec, add, sub, mul, tanh, sigmoid, softmax, dot, concat, \
    stack, expand, reduce_sum, reduce_mean, square, elementwise
from .store import ParameterStore
from .gradcheck import finite_diff_check, relative_error, GradCheckReport


def backward(tape, loss):
    """Writes d(loss)/d(parameter) into the gradient slots of the parameter stores bound on ``tape``."""
    tape.backward(loss)
