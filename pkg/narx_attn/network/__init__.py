"""LSTM cells, the attention encoder and decoder, and the model variants built from them."""

from .cells import LstmParams, LstmState, lstm_shapes, lstm_step, zero_state
from .encoder import InputAttentionParams, EncoderTrace, input_scores, input_weights, reweigh, encode, alpha_matrix
from .decoder import TemporalAttentionParams, ContextCombineParams, OutputParams, DecoderTrace, temporal_scores, \
    temporal_weights, context_vector, combine, decode, predict, beta_matrix
from .models import ModelVariant, Hyperparams, Forward, Model, architecture, build, forward, batch_loss, \
    predict_batch
