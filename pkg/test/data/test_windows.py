"""Tests for sliding-window construction."""
import unittest
import numpy as np
from narx_attn.data import RawSeries, SplitSpec, make_windows, stack_windows, take, split


def _ramp(length, n=2):
    driving = np.array([np.arange(length) + 1000.0 * k for k in range(n)], dtype=np.float64)
    return RawSeries(driving, -np.arange(length, dtype=np.float64), ['x%d' % (k + 1) for k in range(n)], 'y')


class TestMakeWindows (unittest.TestCase):

    def test_exact_fit(self):
        windows = make_windows(_ramp(10), 10, (0, 10))
        self.assertEqual(len(windows), 1)
        self.assertEqual(windows[0].target_index, 9)

    def test_count(self):
        self.assertEqual(len(make_windows(_ramp(12), 10, (0, 12))), 3)
        self.assertEqual(make_windows(_ramp(5), 10, (0, 5)), [])

    def test_contents(self):
        window = make_windows(_ramp(20), 4, (0, 20))[2]
        self.assertEqual(window.target_index, 5)
        np.testing.assert_array_equal(window.X[0], [2.0, 3.0, 4.0, 5.0])
        np.testing.assert_array_equal(window.X[1], [1002.0, 1003.0, 1004.0, 1005.0])
        np.testing.assert_array_equal(window.y_hist, [-2.0, -3.0, -4.0])
        self.assertEqual(window.y_target, -5.0)

    def test_history_reaches_into_previous_split(self):
        series = _ramp(4137)
        ranges = split(series, SplitSpec(3200, 400, 537))
        windows = make_windows(series, 10, ranges.test)
        self.assertEqual(len(windows), 537)
        self.assertEqual(windows[0].target_index, 3600)
        self.assertEqual(windows[0].y_hist[0], -3591.0)
        self.assertEqual(len(make_windows(series, 10, ranges.train)), 3191)

    def test_short_window(self):
        with self.assertRaises(ValueError):
            make_windows(_ramp(10), 1, (0, 10))


class TestStack (unittest.TestCase):

    def test_stack_and_take(self):
        windows = make_windows(_ramp(20, n=3), 5, (0, 20))
        batch = stack_windows(windows)
        self.assertEqual(batch.X.shape, (16, 3, 5))
        self.assertEqual(batch.y_hist.shape, (16, 4))
        np.testing.assert_array_equal(batch.index, np.arange(4, 20))
        sub = take(batch, [3, 0])
        np.testing.assert_array_equal(sub.y, [windows[3].y_target, windows[0].y_target])
        np.testing.assert_array_equal(sub.X[1], windows[0].X)

    def test_empty(self):
        with self.assertRaises(ValueError):
            stack_windows([])


if __name__ == '__main__':
    unittest.main()
