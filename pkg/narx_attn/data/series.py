"""Series ingestion, chronological splitting, and standardization."""

import collections
import csv
import logging
import numpy as np
import pandas as pd
from ..errors import ConfigError, DataError, FormatError, ParseError

logger = logging.getLogger(__name__)

#: driving series (n x L, one row per exogenous series), target (L), driving column names, target column name
RawSeries = collections.namedtuple('RawSeries', 'driving target names target_name')

#: sizes of the chronological train/valid/test splits
SplitSpec = collections.namedtuple('SplitSpec', 'train_len valid_len test_len')

#: half-open index ranges (start, stop) of the three splits
SplitRanges = collections.namedtuple('SplitRanges', 'train valid test')


def _raw_series(driving, target, names, target_name):
    driving = np.asarray(driving, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if driving.ndim != 2 or driving.shape[1] != target.shape[0]:
        raise FormatError('driving series of shape %s do not match a target of length %d' % (
            driving.shape, target.shape[0]))
    return RawSeries(driving, target, list(names), target_name)


def _to_float(text):
    """Parses one cell with correct rounding; NaN for anything that is not a finite decimal number."""
    try:
        value = float(text) if '_' not in text else np.nan
    except ValueError:
        return np.nan
    return value if np.isfinite(value) else np.nan


def _read_rows(filename):
    try:
        with open(filename, newline='', encoding='utf-8') as csvfile:
            reader = csv.DictReader(csvfile)
            if not reader.fieldnames:
                raise FormatError('%s: file is empty' % filename)
            rows = []
            for row in reader:
                if None in row:
                    raise FormatError('%s: row %d has more fields than the header' % (filename, reader.line_num))
                if None in row.values():
                    raise FormatError('%s: row %d has fewer fields than the header' % (filename, reader.line_num))
                rows.append(row)
            return reader.fieldnames, rows
    except (UnicodeDecodeError, csv.Error) as e:
        raise FormatError('%s: %s' % (filename, e))


def load_csv(filename, target_column):
    """Loads a UTF-8, comma-separated file with a header row.

    The target column is selected by name; every other column becomes a driving series, in file order. Cells are
    parsed as Python floats, so values written with 17 significant digits load back bit-exactly.

    :param filename: path of the CSV file
    :param target_column: name of the target column
    :return: RawSeries
    """
    columns, rows = _read_rows(filename)
    if target_column not in columns:
        raise ConfigError('target column "%s" not found in %s (columns: %s)' % (
            target_column, filename, ', '.join(columns)))
    frame = pd.DataFrame(rows, columns=columns, dtype=str)

    numeric = {}
    for column in columns:
        values = frame[column].map(_to_float).to_numpy(dtype=np.float64)
        bad = np.isnan(values)
        if bad.any():
            position = int(np.flatnonzero(bad)[0])
            raise ParseError('%s: row %d, column "%s": cannot parse "%s" as a number' % (
                filename, position + 2, column, frame[column].iloc[position]), row=position + 2, column=column)
        numeric[column] = values

    names = [column for column in columns if column != target_column]
    driving = np.array([numeric[name] for name in names]).reshape(len(names), len(frame))
    logger.info('Loaded %s: %d driving series, %d steps', filename, len(names), len(frame))
    return _raw_series(driving, numeric[target_column], names, target_column)


def write_csv(series, filename):
    """Writes a RawSeries in the ingestion format (driving columns, then the target) with 17 significant digits."""
    columns = collections.OrderedDict((name, row) for name, row in zip(series.names, series.driving))
    columns[series.target_name] = series.target
    pd.DataFrame(columns).to_csv(filename, index=False, float_format='%.17g')
    logger.info('Wrote %s', filename)


def default_split_spec(length):
    """A 70/15/15 percent chronological split of ``length`` points."""
    train = int(length * 0.70)
    valid = int(length * 0.15)
    return SplitSpec(train, valid, length - train - valid)


def split(series, spec):
    """Chronological, contiguous, non-overlapping train/valid/test ranges starting at index 0.

    :param series: RawSeries
    :param spec: SplitSpec
    :return: SplitRanges
    """
    length = len(series.target)
    if any(size < 1 for size in spec):
        raise ValueError('split sizes must be positive, got %s' % (tuple(spec),))
    if sum(spec) > length:
        raise ValueError('split sizes %s sum to %d, exceeding the series length %d' % (tuple(spec), sum(spec), length))
    train_stop = spec.train_len
    valid_stop = train_stop + spec.valid_len
    return SplitRanges((0, train_stop), (train_stop, valid_stop), (valid_stop, valid_stop + spec.test_len))


class StandardizeStats (collections.namedtuple('StandardizeStats',
                                               'driving_mean driving_std target_mean target_std')):
    """Per-series training-range means and standard deviations."""

    def apply(self, series):
        driving = (series.driving - self.driving_mean[:, None]) / self.driving_std[:, None]
        target = (series.target - self.target_mean) / self.target_std
        return series._replace(driving=driving, target=target)

    def inverse_target(self, values):
        """Maps standardized target values back to original units."""
        return np.asarray(values, dtype=np.float64) * self.target_std + self.target_mean

    def inverse(self, series):
        driving = series.driving * self.driving_std[:, None] + self.driving_mean[:, None]
        return series._replace(driving=driving, target=self.inverse_target(series.target))

    @classmethod
    def identity(cls, n):
        return cls(np.zeros(n), np.ones(n), 0.0, 1.0)


def standardize(series, train_range, mode='standardize'):
    """Transforms every series to ``(x - mean) / std`` using statistics of the training range only.

    :param series: RawSeries
    :param train_range: (start, stop) of the training split
    :param mode: 'standardize', or 'none' for identity statistics
    :return: (standardized RawSeries, StandardizeStats)
    """
    if mode == 'none':
        stats = StandardizeStats.identity(len(series.names))
        return stats.apply(series), stats
    if mode != 'standardize':
        raise ValueError('unknown normalization "%s" (expected standardize or none)' % mode)
    start, stop = train_range
    if stop <= start:
        raise ValueError('training range [%d, %d) is empty' % (start, stop))

    driving = series.driving[:, start:stop]
    target = series.target[start:stop]
    stats = StandardizeStats(driving.mean(axis=1), driving.std(axis=1), float(target.mean()), float(target.std()))
    for name, std in zip(series.names, stats.driving_std):
        if not std > 0:
            raise DataError('driving series "%s" is constant over the training range' % name)
    if not stats.target_std > 0:
        raise DataError('target series "%s" is constant over the training range' % series.target_name)
    return stats.apply(series), stats
