"""Input-attention encoder.

At each step the encoder scores every driving series against its previous state, normalizes the scores into
attention weights, reweighs the current input vector, and advances its LSTM.

Note that a series' score reads the series over the entire window (``Ue x^k``), so the weights at step t depend on
window values after t.
"""

import collections
import functools
import logging
import numpy as np
from .. import ndcore as nd
from ..errors import ShapeError
from .cells import lstm_step, zero_state

logger = logging.getLogger(__name__)

#: input attention weights: ve (T), We (T x 2m), Ue (T x T); shared across all series and steps
InputAttentionParams = collections.namedtuple('InputAttentionParams', 've We Ue')

#: hidden states h_1..h_T, per-step attention weight vectors (None without input attention), and the final state
EncoderTrace = collections.namedtuple('EncoderTrace', 'H alphas state')


def input_attention_shapes(prefix, T, m):
    return collections.OrderedDict([
        ('%s.ve' % prefix, (T,)),
        ('%s.We' % prefix, (T, 2 * m)),
        ('%s.Ue' % prefix, (T, T))
    ])


def bind_input_attention(tape, store, prefix):
    return InputAttentionParams(*[tape.parameter(store, '%s.%s' % (prefix, name))
                                  for name in InputAttentionParams._fields])


@functools.lru_cache(maxsize=None)
def note_lookahead():
    """Warns, once per process, that input-attention weights read the whole window."""
    logger.warning('input attention scores read each driving series over the whole window, so the weights at '
                   'step t depend on values after t')


def _check_window(X, T=None):
    shape = nd.value_of(X).shape
    if len(shape) < 2 or shape[-2] < 1 or shape[-1] < 2:
        raise ShapeError('driving window must be n x T with n >= 1 and T >= 2, got shape %s' % (shape,))
    if T is not None and shape[-1] != T:
        raise ShapeError('driving window has %d steps but the attention expects T = %d' % (shape[-1], T))
    return shape


def _scores(p, h_prev, s_prev, projected):
    query = nd.matvec(p.We, nd.concat(h_prev, s_prev))
    return nd.dot(p.ve, nd.tanh(nd.add(nd.expand(query, axis=-2), projected)))


def input_scores(p, h_prev, s_prev, X):
    """Scores ``e^k = ve . tanh(We [h_prev; s_prev] + Ue x^k)`` for every driving series k (no bias terms).

    :param p: InputAttentionParams
    :param h_prev: previous encoder hidden state (m)
    :param s_prev: previous encoder cell state (m)
    :param X: driving window, n x T (row k is series k over the window)
    :return: n scores
    """
    T = nd.value_of(p.ve).shape[0]
    _check_window(X, T)
    return _scores(p, h_prev, s_prev, nd.matvec(p.Ue, X))


def input_weights(scores):
    """Softmax over the driving-series scores."""
    return nd.softmax(scores)


def reweigh(alpha, x_t):
    """Elementwise ``alpha[k] * x_t[k]``."""
    a, x = nd.value_of(alpha).shape, nd.value_of(x_t).shape
    if a != x:
        raise ShapeError('reweigh: attention shape %s differs from input shape %s' % (a, x))
    return nd.mul(alpha, x_t)


def encode(attn, lstm, X):
    """Runs the encoder over a driving window.

    :param attn: InputAttentionParams, or None to feed the raw inputs (no input attention)
    :param lstm: LstmParams with input_dim = n and hidden = m
    :param X: driving window(s), (batch...) x n x T
    :return: EncoderTrace
    """
    shape = _check_window(X, nd.value_of(attn.ve).shape[0] if attn is not None else None)
    n, T = shape[-2:]
    m, width = nd.value_of(lstm.Wf).shape
    if width - m != n:
        raise ShapeError('encoder LSTM expects %d driving series, window has %d' % (width - m, n))

    X = nd.value_of(X)
    state = zero_state(shape[:-2], m)
    projected = nd.matvec(attn.Ue, X) if attn is not None else None  # Ue x^k does not depend on t
    if attn is not None:
        note_lookahead()
    H, alphas = [], []
    for t in range(T):
        x_t = X[..., t]
        if attn is not None:
            alpha = input_weights(_scores(attn, state.h, state.s, projected))
            x_t = reweigh(alpha, x_t)
            alphas.append(alpha)
        state = lstm_step(lstm, state, x_t)
        H.append(state.h)
    return EncoderTrace(H, alphas if attn is not None else None, state)


def alpha_matrix(trace):
    """Returns the attention weights of a trace as an array of shape (batch...) x n x T."""
    if trace.alphas is None:
        return None
    return np.stack([nd.value_of(alpha) for alpha in trace.alphas], axis=-1)
