"""The LSTM unit shared by the encoder and the decoder."""

import collections
import numpy as np
from .. import ndcore as nd
from ..errors import ShapeError

#: LSTM weights: four hidden x (hidden + input_dim) matrices and four hidden-length biases
LstmParams = collections.namedtuple('LstmParams', 'Wf Wi Wo Ws bf bi bo bs')

#: LSTM state: hidden state h and memory cell state s
LstmState = collections.namedtuple('LstmState', 'h s')

_matrices = ('Wf', 'Wi', 'Wo', 'Ws')
_biases = ('bf', 'bi', 'bo', 'bs')


def lstm_shapes(prefix, input_dim, hidden):
    """Returns the ``{name: shape}`` layout of an LSTM's parameters under ``prefix`` (e.g., 'enc.lstm')."""
    shapes = collections.OrderedDict()
    for name in _matrices:
        shapes['%s.%s' % (prefix, name)] = (hidden, hidden + input_dim)
    for name in _biases:
        shapes['%s.%s' % (prefix, name)] = (hidden,)
    return shapes


def bind_lstm(tape, store, prefix):
    """Binds the LSTM parameters stored under ``prefix`` onto a tape."""
    return LstmParams(*[tape.parameter(store, '%s.%s' % (prefix, name)) for name in LstmParams._fields])


def lstm_params(store, prefix):
    """Returns the raw LSTM parameter arrays stored under ``prefix`` (for tape-free evaluation)."""
    return LstmParams(*[store.value('%s.%s' % (prefix, name)) for name in LstmParams._fields])


def zero_state(batch_shape, hidden):
    """Initial state h0 = s0 = 0."""
    return LstmState(np.zeros(tuple(batch_shape) + (hidden,)), np.zeros(tuple(batch_shape) + (hidden,)))


def lstm_step(params, state, x):
    """Advances an LSTM by one step.

    The gates read the concatenation ``[h_prev; x]``, in that order::

        f = sigmoid(Wf [h;x] + bf),  i = sigmoid(Wi [h;x] + bi),  o = sigmoid(Wo [h;x] + bo)
        s' = f * s + i * tanh(Ws [h;x] + bs)
        h' = o * tanh(s')

    :param params: LstmParams (arrays or tape variables)
    :param state: LstmState of the previous step
    :param x: input vector(s) with input_dim entries on the last axis
    :return: the next LstmState
    """
    hidden, width = nd.value_of(params.Wf).shape
    input_dim = width - hidden
    h_shape, s_shape, x_shape = (nd.value_of(v).shape for v in (state.h, state.s, x))
    if h_shape[-1:] != (hidden,) or s_shape[-1:] != (hidden,):
        raise ShapeError('lstm_step: state shapes %s/%s do not match hidden size %d' % (h_shape, s_shape, hidden))
    if x_shape[-1:] != (input_dim,):
        raise ShapeError('lstm_step: input shape %s does not match input size %d' % (x_shape, input_dim))

    hx = nd.concat(state.h, x)
    f = nd.sigmoid(nd.add(nd.matvec(params.Wf, hx), params.bf))
    i = nd.sigmoid(nd.add(nd.matvec(params.Wi, hx), params.bi))
    o = nd.sigmoid(nd.add(nd.matvec(params.Wo, hx), params.bo))
    candidate = nd.tanh(nd.add(nd.matvec(params.Ws, hx), params.bs))
    s = nd.add(nd.mul(f, state.s), nd.mul(i, candidate))
    h = nd.mul(o, nd.tanh(s))
    return LstmState(h, s)
