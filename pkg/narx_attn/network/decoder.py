"""Temporal-attention decoder and output head.

Decoder schedule for a window of T steps, with d_0 = s'_0 = 0:

  - for t = 1..T, the context c_t attends over the encoder states using (d_{t-1}, s'_{t-1});
  - for t = 2..T, the decoder LSTM consumes y~_{t-1} = combine(y_{t-1}, c_{t-1}), giving (d_t, s'_t);
    at t = 1 there is no update, so d_1 = d_0.

The head then predicts y_T from (d_T, c_T). Only the T - 1 observed target values are consumed.
"""

import collections
import numpy as np
from .. import ndcore as nd
from ..errors import ShapeError
from .cells import lstm_step, zero_state

#: temporal attention weights: vd (m), Wd (m x 2p), Ud (m x m)
TemporalAttentionParams = collections.namedtuple('TemporalAttentionParams', 'vd Wd Ud')

#: combination of the previous target and context: w_tilde (m + 1), b_tilde (1)
ContextCombineParams = collections.namedtuple('ContextCombineParams', 'w_tilde b_tilde')

#: output head: Wy (p x (p + m)), bw (p), vy (p), bv (1)
OutputParams = collections.namedtuple('OutputParams', 'Wy bw vy bv')

#: decoder hidden states d_1..d_T, attention vectors (None without temporal attention), contexts c_1..c_T
DecoderTrace = collections.namedtuple('DecoderTrace', 'd betas contexts final')

#: final decoder state and context consumed by the output head
DecoderFinal = collections.namedtuple('DecoderFinal', 'd c')


def temporal_attention_shapes(prefix, m, p):
    return collections.OrderedDict([
        ('%s.vd' % prefix, (m,)),
        ('%s.Wd' % prefix, (m, 2 * p)),
        ('%s.Ud' % prefix, (m, m))
    ])


def combine_shapes(prefix, m):
    return collections.OrderedDict([
        ('%s.w_tilde' % prefix, (m + 1,)),
        ('%s.b_tilde' % prefix, (1,))
    ])


def output_shapes(prefix, m, p):
    return collections.OrderedDict([
        ('%s.Wy' % prefix, (p, p + m)),
        ('%s.bw' % prefix, (p,)),
        ('%s.vy' % prefix, (p,)),
        ('%s.bv' % prefix, (1,))
    ])


def _bind(cls, tape, store, prefix):
    return cls(*[tape.parameter(store, '%s.%s' % (prefix, name)) for name in cls._fields])


def bind_temporal_attention(tape, store, prefix):
    return _bind(TemporalAttentionParams, tape, store, prefix)


def bind_combine(tape, store, prefix):
    return _bind(ContextCombineParams, tape, store, prefix)


def bind_output(tape, store, prefix):
    return _bind(OutputParams, tape, store, prefix)


def _stack_states(H):
    if not H:
        raise ShapeError('no encoder hidden states to attend over')
    return nd.stack(*H, axis=-2)


def _scores(p, d_prev, sp_prev, projected):
    query = nd.matvec(p.Wd, nd.concat(d_prev, sp_prev))
    return nd.dot(p.vd, nd.tanh(nd.add(nd.expand(query, axis=-2), projected)))


def temporal_scores(p, d_prev, sp_prev, H):
    """Scores ``l^i = vd . tanh(Wd [d_prev; s'_prev] + Ud h_i)`` for every encoder state h_i (no bias terms).

    :param p: TemporalAttentionParams
    :param d_prev: previous decoder hidden state (p)
    :param sp_prev: previous decoder cell state (p)
    :param H: list of T encoder hidden states (m each)
    :return: T scores
    """
    return _scores(p, d_prev, sp_prev, nd.matvec(p.Ud, _stack_states(H)))


def temporal_weights(scores):
    """Softmax over the T encoder steps."""
    return nd.softmax(scores)


def _context(beta, stacked):
    return nd.reduce_sum(nd.mul(nd.expand(beta, axis=-1), stacked), axis=-2)


def context_vector(beta, H):
    """Weighted sum ``c = sum_i beta[i] h_i``."""
    stacked = _stack_states(H)
    T = nd.value_of(stacked).shape[-2]
    if nd.value_of(beta).shape[-1:] != (T,):
        raise ShapeError('context_vector: %d attention weights for %d encoder states' % (
            nd.value_of(beta).shape[-1], T))
    return _context(beta, stacked)


def combine(y_prev, c_prev, p):
    """Decoder input ``y~ = w_tilde . [y_prev; c_prev] + b_tilde``.

    :param y_prev: previous target value(s), shaped (batch...) x 1
    :param c_prev: previous context vector (m)
    :param p: ContextCombineParams
    :return: y~ shaped (batch...) x 1
    """
    width = nd.value_of(p.w_tilde).shape[0]
    if nd.value_of(c_prev).shape[-1] + 1 != width:
        raise ShapeError('combine: context of size %d does not match w_tilde of size %d' % (
            nd.value_of(c_prev).shape[-1], width))
    return nd.add(nd.expand(nd.dot(p.w_tilde, nd.concat(y_prev, c_prev)), axis=-1), p.b_tilde)


def decode(attn, combine_params, lstm, H, y_hist, fixed_context=None):
    """Runs the decoder schedule over a window (see the module documentation).

    :param attn: TemporalAttentionParams, or None to use ``fixed_context`` for every c_t
    :param combine_params: ContextCombineParams
    :param lstm: decoder LstmParams with input_dim = 1 and hidden = p
    :param H: list of T encoder hidden states
    :param y_hist: target history y_1..y_{T-1}, shaped (batch...) x (T - 1)
    :param fixed_context: context used at every step when ``attn`` is None (e.g., h_T)
    :return: DecoderTrace
    """
    T = len(H)
    y_hist = nd.value_of(y_hist)
    if y_hist.ndim < 1 or y_hist.shape[-1] != T - 1:
        raise ShapeError('decode: target history of shape %s, expected %d values' % (y_hist.shape, T - 1))
    p, width = nd.value_of(lstm.Wf).shape
    if width - p != 1:
        raise ShapeError('decoder LSTM must take a scalar input, got input size %d' % (width - p))
    if attn is None and fixed_context is None:
        raise ValueError('decode requires temporal attention parameters or a fixed context')

    state = zero_state(y_hist.shape[:-1], p)
    stacked = _stack_states(H) if attn is not None else None
    projected = nd.matvec(attn.Ud, stacked) if attn is not None else None
    ds, betas, contexts = [], [], []
    for t in range(1, T + 1):
        if attn is not None:
            beta = temporal_weights(_scores(attn, state.h, state.s, projected))
            c_t = _context(beta, stacked)
            betas.append(beta)
        else:
            c_t = fixed_context
        if t >= 2:
            y_tilde = combine(y_hist[..., t - 2:t - 1], contexts[-1], combine_params)
            state = lstm_step(lstm, state, y_tilde)
        contexts.append(c_t)
        ds.append(state.h)
    return DecoderTrace(ds, betas if attn is not None else None, contexts, DecoderFinal(ds[-1], contexts[-1]))


def predict(p, d_T, c_T):
    """Output head ``y_T = vy . (Wy [d_T; c_T] + bw) + bv``."""
    return nd.add(nd.dot(p.vy, nd.add(nd.matvec(p.Wy, nd.concat(d_T, c_T)), p.bw)), p.bv)


def beta_matrix(trace):
    """Returns the temporal attention of a trace as an array of shape (batch...) x T (decoder) x T (encoder)."""
    if trace.betas is None:
        return None
    return np.stack([nd.value_of(beta) for beta in trace.betas], axis=-2)
