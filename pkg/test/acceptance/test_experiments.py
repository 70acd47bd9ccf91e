"""Desk-scale experiments on synthetic data (and SML 2010 when available).

These train many models and take minutes; they run only with ``NARX_ATTN_ACCEPTANCE=1``.
"""
import logging
import os
import unittest
import numpy as np
from narx_attn.cli.commands import mean_input_attention
from narx_attn.data import SplitSpec, synth_narx, inject_noise_series, load_csv
from narx_attn.network import Hyperparams, Model, ModelVariant
from narx_attn.train import TrainConfig, DatasetSplits, train, evaluate

logger = logging.getLogger(__name__)
logger.setLevel(os.getenv('NARX_ATTN_TEST_LOGLEVEL', default=logging.WARNING))

ACCEPTANCE = os.getenv('NARX_ATTN_ACCEPTANCE') == '1'
SML2010 = os.getenv('NARX_ATTN_SML2010')

_SEEDS = range(5)
_SPLIT = SplitSpec(1400, 300, 300)
#: 20 epochs of minibatches of 16 give about 1700 Adam steps on the 1400-point training range
_BUDGET = dict(max_epochs=20, batch_size=16, lr0=0.001)


def _run(series, variant, T, m, seed, spec=_SPLIT, budget=_BUDGET):
    splits = DatasetSplits.from_series(series, spec, T)
    hp = Hyperparams(T, len(series.names), m, m, variant)
    model, report = train(Model.build(hp, seed), splits, TrainConfig(seed=seed, **budget))
    return model, splits, report


@unittest.skipUnless(ACCEPTANCE, 'set NARX_ATTN_ACCEPTANCE=1 to run the desk-scale experiments')
class TestSyntheticExperiments (unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.series = synth_narx(10, 2000, [1, 2], 0.1, seed=0)

    def test_relevant_series_receive_more_attention(self):
        recovered = 0
        for seed in _SEEDS:
            model, splits, _ = _run(self.series, ModelVariant.DA_RNN, 8, 16, seed)
            per_series = mean_input_attention(model, splits.test).mean(axis=1)
            ratio = per_series[:2].mean() / per_series[2:].mean()
            logger.info('seed %d: relevant/irrelevant attention ratio %.3f', seed, ratio)
            recovered += ratio >= 2.0
        self.assertGreaterEqual(recovered, 4)

    def test_permuted_inputs_degrade_gracefully(self):
        noisy = inject_noise_series(self.series, seed=0)
        clean_rmse, noisy_rmse = [], []
        for seed in _SEEDS:
            model, splits, _ = _run(self.series, ModelVariant.DA_RNN, 8, 16, seed)
            clean_rmse.append(evaluate(model, splits.test, splits.stats)['rmse'])
            model, splits, _ = _run(noisy, ModelVariant.DA_RNN, 8, 16, seed)
            noisy_rmse.append(evaluate(model, splits.test, splits.stats)['rmse'])
        logger.info('clean rmse %.4f, noisy rmse %.4f', np.mean(clean_rmse), np.mean(noisy_rmse))
        self.assertLessEqual(np.mean(noisy_rmse), 1.5 * np.mean(clean_rmse))

    def test_ablation_ordering(self):
        rmse = {}
        for variant in (ModelVariant.ENCODER_DECODER, ModelVariant.INPUT_ATTN_RNN, ModelVariant.DA_RNN):
            values = []
            for seed in _SEEDS:
                model, splits, _ = _run(self.series, variant, 8, 16, seed)
                values.append(evaluate(model, splits.test, splits.stats)['rmse'])
            rmse[variant] = np.mean(values)
            logger.info('%s: mean test rmse %.4f', variant.label, rmse[variant])
        self.assertLessEqual(rmse[ModelVariant.DA_RNN], rmse[ModelVariant.INPUT_ATTN_RNN])
        self.assertLessEqual(rmse[ModelVariant.INPUT_ATTN_RNN], rmse[ModelVariant.ENCODER_DECODER])
        self.assertLessEqual(rmse[ModelVariant.DA_RNN], 0.95 * rmse[ModelVariant.ENCODER_DECODER])

    def test_window_length_has_an_interior_optimum(self):
        lengths = (3, 5, 10, 15, 25)
        interior = 0
        for seed in range(3):
            valid = [min(_run(self.series, ModelVariant.DA_RNN, T, 16, seed)[2].valid_rmse) for T in lengths]
            best = lengths[int(np.argmin(valid))]
            logger.info('seed %d: validation rmse by T %s, best T=%d', seed, valid, best)
            interior += best not in (lengths[0], lengths[-1])
        self.assertGreaterEqual(interior, 2)


@unittest.skipUnless(ACCEPTANCE and SML2010, 'set NARX_ATTN_SML2010 to the SML 2010 CSV to run this check')
class TestSML2010 (unittest.TestCase):

    def test_dual_attention_beats_encoder_decoder(self):
        series = load_csv(SML2010, os.getenv('NARX_ATTN_SML2010_TARGET', 'y'))
        spec = SplitSpec(3200, 400, 537)
        rmse = {}
        for variant in (ModelVariant.ENCODER_DECODER, ModelVariant.DA_RNN):
            values = []
            for seed in range(3):
                model, splits, _ = _run(series, variant, 10, 64, seed, spec=spec)
                self.assertEqual(len(splits.test), 537)
                values.append(evaluate(model, splits.test, splits.stats)['rmse'])
            rmse[variant] = np.mean(values)
        self.assertLess(rmse[ModelVariant.DA_RNN], rmse[ModelVariant.ENCODER_DECODER])


if __name__ == '__main__':
    unittest.main()
