"""Tests for running training jobs sequentially and in worker processes."""
import logging
import os
import unittest
from unittest import mock
import numpy as np
from narx_attn.cli import config
from narx_attn.cli.runner import THREADS_ENV, Job, effective_jobs, run_jobs
from narx_attn.data import write_csv
from narx_attn.errors import TrainingDiverged
from narx_attn.network import ModelVariant
from test.helpers import TempDirTestCase, linear_series

logger = logging.getLogger(__name__)
logger.setLevel(os.getenv('NARX_ATTN_TEST_LOGLEVEL', default=logging.WARNING))


class TestEffectiveJobs (unittest.TestCase):

    def test_unset(self):
        with mock.patch.dict(os.environ):
            os.environ.pop(THREADS_ENV, None)
            self.assertEqual(effective_jobs(4), 4)

    def test_cap(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: '2'}):
            self.assertEqual(effective_jobs(4), 2)
            self.assertEqual(effective_jobs(1), 1)

    def test_cap_above_request(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: '8'}):
            self.assertEqual(effective_jobs(4), 4)

    def test_non_integer(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: 'many'}):
            with self.assertLogs('narx_attn.cli.runner', level='WARNING') as cm:
                self.assertEqual(effective_jobs(4), 4)
        self.assertIn(THREADS_ENV, cm.output[0])


class TestRunJobs (TempDirTestCase):

    def setUp(self):
        super(TestRunJobs, self).setUp()
        self.dataset = self.path('linear.csv')
        write_csv(linear_series(length=120, n=2, seed=8), self.dataset)

    def _jobs(self, *overrides):
        cfg = config.load_config(overrides=['dataset=%s' % self.dataset, 'T=4', 'm=3', 'max_epochs=1',
                                            'batch_size=16', 'train_len=80', 'valid_len=20', 'test_len=20']
                                 + list(overrides))
        return [Job(cfg, ModelVariant.DA_RNN, None, None, seed, False) for seed in (0, 1, 2)]

    def test_workers_match_sequential_runs(self):
        jobs = self._jobs()
        parallel = run_jobs(jobs, workers=2)
        sequential = run_jobs(jobs, workers=1)
        self.assertEqual([result.job.seed for result in parallel], [0, 1, 2])
        for a, b in zip(parallel, sequential):
            self.assertEqual(a.report.epoch_losses, b.report.epoch_losses)
            self.assertEqual(a.metrics, b.metrics)
            for name in a.model.store:
                np.testing.assert_array_equal(a.model.store.value(name), b.model.store.value(name))

    def test_cap_runs_in_process(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: '1'}), \
                mock.patch('narx_attn.cli.runner.ProcessPoolExecutor') as executor:
            results = run_jobs(self._jobs()[:2], workers=4)
        executor.assert_not_called()
        self.assertEqual(len(results), 2)

    def test_divergence_in_a_worker(self):
        series = linear_series(length=120, n=2, seed=8)
        write_csv(series._replace(target=series.target * 1e160), self.dataset)
        with self.assertRaises(TrainingDiverged) as cm:
            run_jobs(self._jobs('lr0=1e6', 'batch_size=8', 'normalization=none'), workers=2)
        self.assertGreaterEqual(cm.exception.iteration, 0)


if __name__ == '__main__':
    unittest.main()
