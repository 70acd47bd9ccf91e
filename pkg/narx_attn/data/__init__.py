"""Dataset ingestion, splitting, standardization, windows, and synthetic generators."""

from .series import RawSeries, SplitSpec, SplitRanges, StandardizeStats, load_csv, write_csv, split, \
    default_split_spec, standardize
from .windows import DrivingWindow, WindowBatch, make_windows, stack_windows, take
from .synth import synth_narx, inject_noise_series
