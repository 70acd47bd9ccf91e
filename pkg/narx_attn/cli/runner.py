"""Independent training runs, executed sequentially or in worker processes."""

import collections
import functools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from ..data import load_csv, inject_noise_series
from ..network import Model
from ..train import DatasetSplits, train, evaluate
from .config import hyperparams, train_config, split_spec

logger = logging.getLogger(__name__)

#: environment variable capping the number of worker processes
THREADS_ENV = 'NARX_ATTN_THREADS'

#: one training run: configuration, variant, window length, hidden size (None for the configured m/p), seed,
#: and whether permuted copies of the driving series are appended
Job = collections.namedtuple('Job', 'config variant T m seed noisy')

#: outcome of a run: the job, best model, TrainReport, and {split: metrics record} for train, valid and test
RunResult = collections.namedtuple('RunResult', 'job model report metrics')


@functools.lru_cache(maxsize=8)
def load_series(dataset, target_column, noisy=False, noise_seed=0):
    """Loads (and caches, per process) a dataset, optionally with permuted copies of its driving series."""
    series = load_csv(dataset, target_column)
    return inject_noise_series(series, noise_seed) if noisy else series


def load_splits(cfg, T, noisy=False):
    """Returns (RawSeries, DatasetSplits) of the configured dataset for window length T."""
    series = load_series(cfg.dataset, cfg.target_column, noisy, cfg.noise_seed)
    return series, DatasetSplits.from_series(series, split_spec(cfg, len(series.target)), T, cfg.normalization)


def run_job(job):
    """Builds, trains and evaluates one model."""
    cfg = job.config
    T = job.T if job.T is not None else cfg.T
    series, splits = load_splits(cfg, T, job.noisy)
    hp = hyperparams(cfg, len(series.names), variant=job.variant, T=T, m=job.m)
    logger.info('run %s T=%d m=%d p=%d seed=%d%s', hp.variant.value, hp.T, hp.m, hp.p, job.seed,
                ' (noisy inputs)' if job.noisy else '')
    model, report = train(Model.build(hp, job.seed), splits, train_config(cfg, job.seed))
    metrics = collections.OrderedDict(
        (name, evaluate(model, windows, splits.stats))
        for name, windows in zip(('train', 'valid', 'test'), splits[:3])
    )
    return RunResult(job, model, report, metrics)


def effective_jobs(requested):
    """Caps the requested worker count by ``NARX_ATTN_THREADS`` when that is set."""
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            cap = int(cap)
        except ValueError:
            logger.warning('ignoring non-integer %s="%s"', THREADS_ENV, cap)
            return requested
        if 1 <= cap < requested:
            logger.warning('jobs capped from %d to %d by %s', requested, cap, THREADS_ENV)
            return cap
    return requested


def run_jobs(jobs, workers=1):
    """Runs jobs and returns their results in job order.

    :param jobs: list of Job
    :param workers: maximum number of concurrent worker processes
    :return: list of RunResult
    """
    workers = min(effective_jobs(workers), len(jobs)) if jobs else 1
    if workers <= 1:
        return [run_job(job) for job in jobs]
    logger.info('running %d jobs on %d worker processes', len(jobs), workers)
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run_job, jobs))
