"""Helpers for the tests: scalar-loop reference implementations and random fixtures."""

import logging
import math
import os
import shutil
import tempfile
import unittest
import numpy as np
from narx_attn.network import Hyperparams, Model, ModelVariant
from narx_attn.data import RawSeries, DrivingWindow

logger = logging.getLogger(__name__)
logger.setLevel(os.getenv('NARX_ATTN_TEST_LOGLEVEL', default=logging.WARNING))

#
# Scalar-loop reference model
#


def _sigmoid(a):
    return 1.0 / (1.0 + math.exp(-a))


def _mv(A, x):
    return [sum(A[i][j] * x[j] for j in range(len(x))) for i in range(len(A))]


def _softmax(z):
    top = max(z)
    e = [math.exp(v - top) for v in z]
    total = sum(e)
    return [v / total for v in e]


class ReferenceModel (object):
    """Evaluates a model one scalar at a time, straight from the defining equations."""

    def __init__(self, model):
        self.hp = model.hyperparams
        self.p = {name: model.store.value(name).tolist() for name in model.store}

    def lstm(self, prefix, h, s, x):
        z = list(h) + list(x)
        W = {g: self.p['%s.W%s' % (prefix, g)] for g in 'fios'}
        b = {g: self.p['%s.b%s' % (prefix, g)] for g in 'fios'}
        pre = {g: [a + c for a, c in zip(_mv(W[g], z), b[g])] for g in 'fios'}
        f = [_sigmoid(v) for v in pre['f']]
        i = [_sigmoid(v) for v in pre['i']]
        o = [_sigmoid(v) for v in pre['o']]
        s_new = [f[j] * s[j] + i[j] * math.tanh(pre['s'][j]) for j in range(len(h))]
        h_new = [o[j] * math.tanh(s_new[j]) for j in range(len(h))]
        return h_new, s_new

    def input_alpha(self, h, s, X):
        ve, We, Ue = self.p['enc.attn.ve'], self.p['enc.attn.We'], self.p['enc.attn.Ue']
        query = _mv(We, list(h) + list(s))
        scores = []
        for row in X:
            key = _mv(Ue, row)
            scores.append(sum(ve[j] * math.tanh(query[j] + key[j]) for j in range(len(ve))))
        return _softmax(scores)

    def temporal_beta(self, d, sp, H):
        vd, Wd, Ud = self.p['dec.attn.vd'], self.p['dec.attn.Wd'], self.p['dec.attn.Ud']
        query = _mv(Wd, list(d) + list(sp))
        scores = []
        for h in H:
            key = _mv(Ud, h)
            scores.append(sum(vd[j] * math.tanh(query[j] + key[j]) for j in range(len(vd))))
        return _softmax(scores)

    def forward(self, X, y_hist):
        """Returns (prediction, alphas per step or None, betas per decoder step or None)."""
        T, n, m, p, variant = self.hp
        X = [list(map(float, row)) for row in X]
        y_hist = [float(v) for v in y_hist]

        if variant is ModelVariant.NARX_RNN:
            h, s = [0.0] * m, [0.0] * m
            for t in range(T):
                y_prev = 0.0 if t == 0 else y_hist[t - 1]
                h, s = self.lstm('narx.lstm', h, s, [X[k][t] for k in range(n)] + [y_prev])
            vy, bv = self.p['narx.out.vy'], self.p['narx.out.bv']
            return sum(vy[j] * h[j] for j in range(m)) + bv[0], None, None

        h, s = [0.0] * m, [0.0] * m
        H, alphas = [], []
        for t in range(T):
            x = [X[k][t] for k in range(n)]
            if variant.input_attention:
                alpha = self.input_alpha(h, s, X)
                alphas.append(alpha)
                x = [alpha[k] * x[k] for k in range(n)]
            h, s = self.lstm('enc.lstm', h, s, x)
            H.append(h)

        w_tilde, b_tilde = self.p['dec.combine.w_tilde'], self.p['dec.combine.b_tilde']
        d, sp = [0.0] * p, [0.0] * p
        contexts, betas = [], []
        for t in range(1, T + 1):
            if variant.temporal_attention:
                beta = self.temporal_beta(d, sp, H)
                betas.append(beta)
                c = [sum(beta[i] * H[i][j] for i in range(T)) for j in range(m)]
            else:
                c = H[-1]
            if t >= 2:
                joined = [y_hist[t - 2]] + contexts[-1]
                y_tilde = sum(w_tilde[k] * joined[k] for k in range(m + 1)) + b_tilde[0]
                d, sp = self.lstm('dec.lstm', d, sp, [y_tilde])
            contexts.append(c)

        Wy, bw, vy, bv = (self.p['dec.out.%s' % name] for name in ('Wy', 'bw', 'vy', 'bv'))
        hidden = [a + b for a, b in zip(_mv(Wy, list(d) + contexts[-1]), bw)]
        prediction = sum(vy[j] * hidden[j] for j in range(p)) + bv[0]
        return prediction, alphas or None, betas or None


#
# Random fixtures
#

def random_model(variant, T=5, n=3, m=3, p=None, seed=0, scale=None):
    """Builds a model; with ``scale``, replaces every parameter (biases included) with N(0, scale^2) draws."""
    model = Model.build(Hyperparams(T, n, m, p if p is not None else m, variant), seed)
    if scale is not None:
        model.redraw(scale, seed + 1000)
    return model


def random_window(rng, n, T):
    X = rng.standard_normal((n, T))
    y = rng.standard_normal(T)
    return DrivingWindow(X, y[:-1], float(y[-1]), T - 1)


def linear_series(length=400, n=3, seed=0, noise=0.01):
    """A learnable series: y = 2 x^1 + small noise, with standard normal driving series."""
    rng = np.random.default_rng(seed)
    driving = rng.standard_normal((n, length))
    target = 2.0 * driving[0] + noise * rng.standard_normal(length)
    return RawSeries(driving, target, ['x%d' % (k + 1) for k in range(n)], 'y')


class TempDirTestCase (unittest.TestCase):
    """A base class test case with a fresh temporary directory per test.
    """

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp(prefix='narx_attn_test_')

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def path(self, *parts):
        return os.path.join(self.tmpdir, *parts)
