"""Tests for the finite-difference gradient checker."""
import unittest
import numpy as np
from narx_attn import ndcore as nd
from narx_attn.errors import NumericError


def _quadratic(store):
    tape = nd.Tape()
    w = tape.parameter(store, 'w')
    return tape, nd.reduce_sum(nd.mul(nd.square(w), [1.0, 2.0, 3.0]))


def _loss(store):
    return float(nd.value_of(_quadratic(store)[1]))


class TestGradCheck (unittest.TestCase):

    def setUp(self):
        self.store = nd.ParameterStore()
        self.store.add('w', [0.5, -1.0, 2.0])

    def test_relative_error(self):
        self.assertEqual(nd.relative_error(1.0, 1.0), 0.0)
        self.assertAlmostEqual(nd.relative_error(1.0, 2.0), 0.5)
        self.assertEqual(nd.relative_error(0.0, 0.0), 0.0)
        self.assertAlmostEqual(nd.relative_error(1e-10, 0.0), 1e-10 / 1e-8)

    def test_correct_gradients_pass(self):
        tape, loss = _quadratic(self.store)
        tape.backward(loss)
        report = nd.finite_diff_check(_loss, self.store)
        self.assertTrue(report.passed)
        self.assertEqual(report.offenders, [])
        self.assertLess(report.worst, 1e-6)

    def test_wrong_gradients_fail(self):
        self.store.accumulate('w', np.array([1.0, 1.0, 1.0]))
        report = nd.finite_diff_check(_loss, self.store)
        self.assertFalse(report.passed)
        self.assertEqual(report.offenders, ['w'])

    def test_values_restored(self):
        before = self.store.value('w').copy()
        nd.finite_diff_check(_loss, self.store)
        np.testing.assert_array_equal(self.store.value('w'), before)

    def test_values_restored_after_error(self):
        before = self.store.value('w').copy()

        def failing(store):
            raise RuntimeError('boom')
        with self.assertRaises(RuntimeError):
            nd.finite_diff_check(failing, self.store)
        np.testing.assert_array_equal(self.store.value('w'), before)

    def test_non_finite_loss(self):
        with self.assertRaises(NumericError):
            nd.finite_diff_check(lambda store: float('inf'), self.store)

    def test_tight_tolerance_reports_failures(self):
        tape, loss = _quadratic(self.store)
        tape.backward(loss)
        self.store.grad('w')[0] += 1e-3
        report = nd.finite_diff_check(_loss, self.store, tol=1e-12)
        self.assertFalse(report.passed)


if __name__ == '__main__':
    unittest.main()
