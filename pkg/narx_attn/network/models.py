"""Model variants of the ablation ladder behind one forward interface.

  - ``narx_rnn``: one LSTM over ``[x_t; y_{t-1}]`` (with y_0 = 0) and a linear head on h_T.
  - ``encoder_decoder``: plain encoder; the decoder uses c_t = h_T at every step.
  - ``attention_rnn``: plain encoder; temporal attention in the decoder.
  - ``input_attn_rnn``: input-attention encoder; the decoder uses c_t = h_T.
  - ``da_rnn``: input-attention encoder and temporal-attention decoder.

All decoder-bearing variants keep the same target/context combination and output head, so they differ only in
their attention stages.
"""

import collections
import enum
import logging
import numpy as np
from .. import ndcore as nd
from ..data.windows import WindowBatch, stack_windows
from ..errors import ShapeError
from .cells import lstm_shapes, bind_lstm, lstm_step, zero_state
from .encoder import input_attention_shapes, bind_input_attention, encode, EncoderTrace
from .decoder import temporal_attention_shapes, combine_shapes, output_shapes, bind_temporal_attention, \
    bind_combine, bind_output, decode, predict

logger = logging.getLogger(__name__)


class ModelVariant (enum.Enum):
    NARX_RNN = 'narx_rnn'
    ENCODER_DECODER = 'encoder_decoder'
    ATTENTION_RNN = 'attention_rnn'
    INPUT_ATTN_RNN = 'input_attn_rnn'
    DA_RNN = 'da_rnn'

    @property
    def input_attention(self):
        return self in (ModelVariant.INPUT_ATTN_RNN, ModelVariant.DA_RNN)

    @property
    def temporal_attention(self):
        return self in (ModelVariant.ATTENTION_RNN, ModelVariant.DA_RNN)

    @property
    def label(self):
        return _labels[self]

    @classmethod
    def parse(cls, text):
        """Returns the variant for a config value such as 'da_rnn'."""
        if isinstance(text, cls):
            return text
        try:
            return cls(text)
        except ValueError:
            raise ValueError('unknown variant "%s" (expected one of: %s)' % (text, ', '.join(v.value for v in cls)))


_labels = {
    ModelVariant.NARX_RNN: 'NARX RNN',
    ModelVariant.ENCODER_DECODER: 'Encoder-Decoder',
    ModelVariant.ATTENTION_RNN: 'Attention RNN',
    ModelVariant.INPUT_ATTN_RNN: 'Input-Attn-RNN',
    ModelVariant.DA_RNN: 'DA-RNN'
}


class Hyperparams (collections.namedtuple('Hyperparams', 'T n m p variant')):
    """Window length T, driving-series count n, encoder/decoder hidden sizes m and p, and the variant."""

    def __new__(cls, T, n, m, p, variant=ModelVariant.DA_RNN):
        return super(Hyperparams, cls).__new__(cls, int(T), int(n), int(m), int(p), ModelVariant.parse(variant))

    def validate(self):
        if self.T < 2:
            raise ValueError('window length T must be at least 2, got %d' % self.T)
        for name in ('n', 'm', 'p'):
            if getattr(self, name) < 1:
                raise ValueError('%s must be at least 1, got %d' % (name, getattr(self, name)))
        return self


#: the forward result: per-example predictions and the traces of each stage (decoder trace is None for narx_rnn)
Forward = collections.namedtuple('Forward', 'prediction encoder decoder')


def architecture(hp):
    """Returns the ordered ``{name: shape}`` layout of every parameter of a variant."""
    T, n, m, p, variant = hp
    shapes = collections.OrderedDict()
    if variant is ModelVariant.NARX_RNN:
        shapes.update(lstm_shapes('narx.lstm', n + 1, m))
        shapes['narx.out.vy'] = (m,)
        shapes['narx.out.bv'] = (1,)
        return shapes
    if variant.input_attention:
        shapes.update(input_attention_shapes('enc.attn', T, m))
    shapes.update(lstm_shapes('enc.lstm', n, m))
    if variant.temporal_attention:
        shapes.update(temporal_attention_shapes('dec.attn', m, p))
    shapes.update(combine_shapes('dec.combine', m))
    shapes.update(lstm_shapes('dec.lstm', 1, p))
    shapes.update(output_shapes('dec.out', m, p))
    return shapes


def _is_bias(name):
    return name.rsplit('.', 1)[-1].startswith('b')


class Model (object):
    """Hyperparameters plus the parameter store of one variant."""

    def __init__(self, hyperparams, store):
        self.hyperparams = hyperparams.validate()
        expected = architecture(hyperparams)
        if store.names() != list(expected):
            raise ValueError('parameter store does not match the %s architecture (expected %s, got %s)' % (
                hyperparams.variant.value, list(expected), store.names()))
        for name, shape in expected.items():
            if store.shape(name) != shape:
                raise ShapeError('parameter "%s" has shape %s, expected %s' % (name, store.shape(name), shape))
        self.store = store

    @classmethod
    def build(cls, hyperparams, seed):
        """Initializes a model: weights uniform in +/- 1/sqrt(fan_in) per row, biases zero.

        :param hyperparams: Hyperparams
        :param seed: integer seed; the same (hyperparams, seed) always yields identical weights
        :return: Model
        """
        hyperparams.validate()
        rng = np.random.default_rng(seed)
        store = nd.ParameterStore()
        for name, shape in architecture(hyperparams).items():
            if _is_bias(name):
                store.add(name, np.zeros(shape))
            else:
                bound = 1.0 / np.sqrt(shape[-1])
                store.add(name, rng.uniform(-bound, bound, size=shape))
        logger.debug('Built %s with %d parameters (seed %s)', hyperparams.variant.value, store.num_scalars(), seed)
        return cls(hyperparams, store)

    def redraw(self, scale, seed):
        """Replaces every parameter, biases included, with N(0, scale^2) draws in place.

        Gradient checks run on redrawn models: at the default initialization many gradient components fall below the
        resolution of central differences.

        :param scale: standard deviation of the draws (> 0)
        :param seed: integer seed
        :return: this model
        """
        if not scale > 0:
            raise ValueError('redraw scale must be positive, got %r' % (scale,))
        rng = np.random.default_rng(seed)
        for name in self.store:
            self.store.value(name)[...] = rng.normal(0.0, scale, size=self.store.shape(name))
        logger.debug('Redrew %d parameters at scale %g (seed %s)', self.store.num_scalars(), scale, seed)
        return self

    @property
    def variant(self):
        return self.hyperparams.variant

    def snapshot(self):
        return Model(self.hyperparams, self.store.snapshot())

    def _check(self, X, y_hist):
        T, n = self.hyperparams.T, self.hyperparams.n
        if X.shape[-2:] != (n, T):
            raise ShapeError('window of shape %s does not match n = %d, T = %d' % (X.shape[-2:], n, T))
        if y_hist.shape[-1:] != (T - 1,):
            raise ShapeError('target history of shape %s does not match T - 1 = %d' % (y_hist.shape, T - 1))

    def forward(self, X, y_hist, tape=None):
        """Records the forward pass of driving window(s) ``X`` ((batch...) x n x T) and target history(ies).

        :return: Forward, whose prediction is a tape variable shaped (batch...)
        """
        X, y_hist = nd.as_array(X), nd.as_array(y_hist)
        self._check(X, y_hist)
        tape = tape if tape is not None else nd.Tape()
        store = self.store
        variant = self.hyperparams.variant

        if variant is ModelVariant.NARX_RNN:
            lstm = bind_lstm(tape, store, 'narx.lstm')
            y_prev = np.concatenate([np.zeros(y_hist.shape[:-1] + (1,)), y_hist], axis=-1)
            state = zero_state(X.shape[:-2], self.hyperparams.m)
            H = []
            for t in range(self.hyperparams.T):
                state = lstm_step(lstm, state, np.concatenate([X[..., t], y_prev[..., t:t + 1]], axis=-1))
                H.append(state.h)
            prediction = nd.add(nd.dot(tape.parameter(store, 'narx.out.vy'), state.h),
                                tape.parameter(store, 'narx.out.bv'))
            return Forward(prediction, EncoderTrace(H, None, state), None)

        enc_attn = bind_input_attention(tape, store, 'enc.attn') if variant.input_attention else None
        encoder = encode(enc_attn, bind_lstm(tape, store, 'enc.lstm'), X)
        dec_attn = bind_temporal_attention(tape, store, 'dec.attn') if variant.temporal_attention else None
        decoder = decode(dec_attn, bind_combine(tape, store, 'dec.combine'), bind_lstm(tape, store, 'dec.lstm'),
                         encoder.H, y_hist, fixed_context=None if dec_attn is not None else encoder.H[-1])
        prediction = predict(bind_output(tape, store, 'dec.out'), decoder.final.d, decoder.final.c)
        return Forward(prediction, encoder, decoder)


def build(hp, seed):
    return Model.build(hp, seed)


def forward(model, window):
    """Predicts one window.

    :param model: Model
    :param window: DrivingWindow
    :return: (prediction as float, Forward with unbatched traces)
    """
    result = model.forward(window.X, window.y_hist)
    return float(nd.value_of(result.prediction).reshape(-1)[0]), result


def batch_loss(model, windows, tape=None):
    """Mean squared error ``(1/N) sum (y_hat - y)^2`` over a batch.

    :param model: Model
    :param windows: list of DrivingWindow, or a WindowBatch
    :param tape: tape to record on (a new one by default)
    :return: scalar tape variable; ``float(loss.value)`` is the loss
    """
    batch = windows if isinstance(windows, WindowBatch) else stack_windows(list(windows))
    if len(batch.y) == 0:
        raise ValueError('batch_loss requires a non-empty batch')
    tape = tape if tape is not None else nd.Tape()
    result = model.forward(batch.X, batch.y_hist, tape=tape)
    return nd.reduce_mean(nd.square(nd.sub(result.prediction, batch.y)))


def predict_batch(model, batch):
    """Returns the predictions for a WindowBatch as a numpy vector."""
    return np.array(nd.value_of(model.forward(batch.X, batch.y_hist).prediction), dtype=np.float64)
