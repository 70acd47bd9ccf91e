"""Commands of the ``narx-attn`` tool.

Every command takes a validated RunConfig, writes its artifacts under ``config.out``, and returns an exit status.
"""

import collections
import json
import logging
import os
import sys
import numpy as np
import pandas as pd
from .. import ndcore as nd
from ..data import WindowBatch, stack_windows, take, synth_narx, write_csv
from ..network import Model, ModelVariant, Hyperparams, alpha_matrix, beta_matrix, batch_loss
from ..train import predictions, evaluate
from ..util import describe
from .config import hyperparams, variants
from .runner import Job, run_jobs, load_splits, load_series

logger = logging.getLogger(__name__)

_METRICS = ('rmse', 'mae', 'mape_percent')


#
# Output helpers
#

def _path(cfg, *parts):
    path = os.path.join(cfg.out, *parts)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    return path


def _write_json(path, obj):
    with open(path, 'w') as fp:
        json.dump(obj, fp, indent=2)
        fp.write('\n')
    logger.info('Wrote %s', path)


def _write_table(path, rows, columns):
    pd.DataFrame(rows, columns=columns).to_csv(path, index=False, float_format='%.17g')
    logger.info('Wrote %s', path)


def _aggregate(records):
    """Mean and population standard deviation of each metric across runs: ``{split: {metric: {mean, std}}}``."""
    summary = collections.OrderedDict()
    for split in records[0]:
        summary[split] = collections.OrderedDict()
        for metric in records[0][split]:
            values = np.array([record[split][metric] for record in records])
            summary[split][metric] = collections.OrderedDict([('mean', float(values.mean())),
                                                              ('std', float(values.std()))])
    return summary


def _save_run(cfg, result, *parts):
    result.model.store.save(_path(cfg, *(parts + ('model.txt',))))
    _write_json(_path(cfg, *(parts + ('report.json',))), result.report.to_json())
    _write_json(_path(cfg, *(parts + ('metrics.json',))), result.metrics)


def _load_model(cfg, n, variant=None):
    """Loads the configured snapshot, reading the hidden sizes off its parameter shapes."""
    store = nd.ParameterStore.load(cfg.model)
    variant = ModelVariant.parse(variant if variant is not None else cfg.variant)
    lstm = 'narx.lstm.bf' if variant is ModelVariant.NARX_RNN else 'enc.lstm.bf'
    if lstm not in store:
        raise ValueError('%s is not a %s snapshot (no parameter "%s")' % (cfg.model, variant.value, lstm))
    m = store.shape(lstm)[0]
    p = store.shape('dec.lstm.bf')[0] if 'dec.lstm.bf' in store else m
    return Model(Hyperparams(cfg.T, n, m, p, variant), store)


#
# Commands
#

def cmd_train(cfg):
    """Trains the configured variant once per seed; writes per-seed artifacts and an aggregate across seeds."""
    variant = ModelVariant.parse(cfg.variant)
    results = run_jobs([Job(cfg, variant, None, None, seed, False) for seed in cfg.seeds], cfg.jobs)
    for result in results:
        _save_run(cfg, result, 'train', 'seed_%d' % result.job.seed)
    aggregate = collections.OrderedDict([
        ('variant', variant.value),
        ('seeds', list(cfg.seeds)),
        ('metrics', _aggregate([result.metrics for result in results]))
    ])
    _write_json(_path(cfg, 'train', 'aggregate.json'), aggregate)
    test = aggregate['metrics']['test']
    print('%s over %d seed(s): test rmse %.6g +/- %.3g, mae %.6g, mape %.4g%%' % (
        variant.label, len(results), test['rmse']['mean'], test['rmse']['std'], test['mae']['mean'],
        test['mape_percent']['mean']))
    return 0


def cmd_evaluate(cfg):
    """Evaluates a model snapshot on the configured split (or all three)."""
    series, splits = load_splits(cfg, cfg.T)
    model = _load_model(cfg, len(series.names))
    names = ('train', 'valid', 'test') if cfg.split == 'all' else (cfg.split,)
    windows = dict(zip(('train', 'valid', 'test'), splits[:3]))
    metrics = collections.OrderedDict((name, evaluate(model, windows[name], splits.stats)) for name in names)
    _write_json(_path(cfg, 'evaluate', 'metrics.json'), metrics)
    for name, record in metrics.items():
        print('%s: rmse %.6g, mae %.6g, mape %.4g%%' % (name, record['rmse'], record['mae'], record['mape_percent']))
    return 0


def _metric_columns(record):
    return [record[split][metric] for metric in _METRICS for split in ('valid', 'test')]


def cmd_grid_search(cfg):
    """Trains every (variant, T, m = p) combination once per seed and marks, per variant, the combination with the
    lowest mean validation RMSE."""
    grid_T = cfg.T_grid or [cfg.T]
    grid_m = cfg.m_grid or [hyperparams(cfg, 1).m]
    jobs = [Job(cfg, variant, T, m, seed, False)
            for variant in variants(cfg) for T in grid_T for m in grid_m for seed in cfg.seeds]
    results = run_jobs(jobs, cfg.jobs)

    valid = collections.defaultdict(list)
    for result in results:
        valid[(result.job.variant, result.job.T, result.job.m)].append(result.metrics['valid']['rmse'])
    best = {}
    for (variant, T, m), values in valid.items():
        if variant not in best or np.mean(values) < np.mean(valid[(variant,) + best[variant]]):
            best[variant] = (T, m)

    rows = [
        [r.job.T, r.job.m, r.job.seed] + _metric_columns(r.metrics) +
        [r.job.variant.value, int(best[r.job.variant] == (r.job.T, r.job.m))]
        for r in results
    ]
    columns = ['T', 'm', 'seed'] + ['%s_%s' % (split, metric) for metric in _METRICS for split in ('valid', 'test')] \
        + ['variant', 'best']
    _write_table(_path(cfg, 'grid', 'grid.csv'), rows, columns)

    summary = collections.OrderedDict()
    for variant, (T, m) in best.items():
        summary[variant.value] = collections.OrderedDict([('T', T), ('m', m), ('p', m),
                                                          ('valid_rmse', float(np.mean(valid[(variant, T, m)])))])
        logger.info('best %s: T=%d m=p=%d', variant.value, T, m)
        print('%s: best T=%d, m=p=%d (mean valid rmse %.6g)' % (
            variant.label, T, m, summary[variant.value]['valid_rmse']))
    _write_json(_path(cfg, 'grid', 'best.json'), summary)
    return 0


def cmd_ablation(cfg):
    """Trains each variant on identical splits and seeds, and tabulates their metrics."""
    ladder = variants(cfg, default_all=True)
    results = run_jobs([Job(cfg, variant, None, None, seed, False) for variant in ladder for seed in cfg.seeds],
                       cfg.jobs)

    by_variant = collections.OrderedDict((variant, []) for variant in ladder)
    for result in results:
        by_variant[result.job.variant].append(result.metrics)
    summary = collections.OrderedDict((variant.value, _aggregate(records)) for variant, records in by_variant.items())
    winner = min(by_variant, key=lambda v: summary[v.value]['test']['rmse']['mean'])

    rows = [
        [r.job.variant.value, r.job.variant.label, r.job.seed] + _metric_columns(r.metrics) +
        [int(r.job.variant is winner)]
        for r in results
    ]
    columns = ['variant', 'label', 'seed'] + \
        ['%s_%s' % (split, metric) for metric in _METRICS for split in ('valid', 'test')] + ['best']
    _write_table(_path(cfg, 'ablation', 'ablation.csv'), rows, columns)
    _write_json(_path(cfg, 'ablation', 'ablation.json'),
                collections.OrderedDict([('best', winner.value), ('seeds', list(cfg.seeds)), ('variants', summary)]))

    for variant in ladder:
        test = summary[variant.value]['test']
        print('%-16s test rmse %.6g, mae %.6g, mape %.4g%%%s' % (
            variant.label, test['rmse']['mean'], test['mae']['mean'], test['mape_percent']['mean'],
            ' *' if variant is winner else ''))
    return 0


def mean_input_attention(model, windows):
    """Mean input-attention weight of each driving series at each encoder step, over windows: an n x T array."""
    batch = stack_windows(windows)
    total = None
    for start in range(0, len(batch.y), 1024):
        chunk = take(batch, slice(start, start + 1024))
        alphas = alpha_matrix(model.forward(chunk.X, chunk.y_hist).encoder).sum(axis=0)
        total = alphas if total is None else total + alphas
    return total / len(batch.y)


def cmd_robustness(cfg):
    """Trains on clean inputs and on inputs with permuted copies appended; compares test metrics and summarizes how
    much input attention the original and the permuted series receive."""
    variant = ModelVariant.parse(cfg.variant)
    jobs = [Job(cfg, variant, None, None, seed, noisy) for seed in cfg.seeds for noisy in (False, True)]
    results = run_jobs(jobs, cfg.jobs)
    clean = [r for r in results if not r.job.noisy]
    noisy = [r for r in results if r.job.noisy]

    series, splits = load_splits(cfg, cfg.T, noisy=True)
    n = len(series.names) // 2
    attention = np.mean([mean_input_attention(r.model, splits.test) for r in noisy], axis=0)

    group_rows = [[t + 1, group, float(attention[rows, t].mean())]
                  for group, rows in (('original', slice(0, n)), ('noisy', slice(n, 2 * n)))
                  for t in range(cfg.T)]
    _write_table(_path(cfg, 'robustness', 'attention_groups.csv'), group_rows, ['t', 'group', 'mean_alpha'])
    per_series = attention.mean(axis=1)
    series_rows = [[k + 1, name, 'original' if k < n else 'noisy', float(per_series[k])]
                   for k, name in enumerate(series.names)]
    _write_table(_path(cfg, 'robustness', 'attention_series.csv'), series_rows,
                 ['series_index', 'name', 'group', 'mean_alpha'])

    metric_rows = [['noisy' if r.job.noisy else 'clean', r.job.seed] + [r.metrics['test'][m] for m in _METRICS]
                   for r in results]
    _write_table(_path(cfg, 'robustness', 'metrics.csv'), metric_rows,
                 ['condition', 'seed'] + ['test_%s' % m for m in _METRICS])

    summary = collections.OrderedDict([
        ('clean', _aggregate([r.metrics for r in clean])['test']),
        ('noisy', _aggregate([r.metrics for r in noisy])['test'])
    ])
    summary['rmse_ratio'] = summary['noisy']['rmse']['mean'] / summary['clean']['rmse']['mean']
    summary['mean_alpha'] = collections.OrderedDict([('original', float(per_series[:n].mean())),
                                                     ('noisy', float(per_series[n:].mean()))])
    if cfg.relevant:
        relevant = [k - 1 for k in cfg.relevant if 1 <= k <= n]
        others = [k for k in range(n) if k not in relevant]
        summary['mean_alpha']['relevant'] = float(per_series[relevant].mean()) if relevant else None
        summary['mean_alpha']['irrelevant'] = float(per_series[others].mean()) if others else None
    _write_json(_path(cfg, 'robustness', 'robustness.json'), summary)

    print('test rmse clean %.6g, noisy %.6g (ratio %.3f); mean alpha original %.4g, noisy %.4g' % (
        summary['clean']['rmse']['mean'], summary['noisy']['rmse']['mean'], summary['rmse_ratio'],
        summary['mean_alpha']['original'], summary['mean_alpha']['noisy']))
    return 0


def cmd_dump_attention(cfg):
    """Writes attention weights and predictions of a snapshot for a range of windows of the configured split.

    ``window_start`` and ``window_stop`` select positions within the split's window list.
    """
    if cfg.split == 'all':
        raise ValueError('dump-attention needs a single split (train, valid or test)')
    series, splits = load_splits(cfg, cfg.T)
    model = _load_model(cfg, len(series.names))
    windows = dict(zip(('train', 'valid', 'test'), splits[:3]))[cfg.split]
    start = cfg.window_start or 0
    stop = cfg.window_stop if cfg.window_stop is not None else len(windows)
    if not 0 <= start < stop <= len(windows):
        raise ValueError('window range [%d, %d) is outside the %d %s windows' % (start, stop, len(windows), cfg.split))
    windows = windows[start:stop]

    batch = stack_windows(windows)
    result = model.forward(batch.X, batch.y_hist)
    alphas = alpha_matrix(result.encoder) if model.variant.input_attention else None
    betas = beta_matrix(result.decoder) if model.variant.temporal_attention else None
    for i, index in enumerate(batch.index):
        if alphas is not None:
            n, T = alphas.shape[-2:]
            _write_table(_path(cfg, 'attention', 'alpha_%d.csv' % index),
                         [[t + 1, k + 1, alphas[i, k, t]] for t in range(T) for k in range(n)],
                         ['t', 'series_index', 'alpha'])
        if betas is not None:
            T = betas.shape[-1]
            _write_table(_path(cfg, 'attention', 'beta_%d.csv' % index),
                         [[t + 1, j + 1, betas[i, t, j]] for t in range(T) for j in range(T)],
                         ['decoder_t', 'encoder_i', 'beta'])

    pred = predictions(model, windows, splits.stats)
    _write_table(_path(cfg, 'attention', 'predictions.csv'),
                 [[int(index), y, y_hat] for index, y, y_hat in zip(*pred)], ['index', 'y_true', 'y_pred'])
    print('dumped %d window(s) of the %s split to %s' % (len(windows), cfg.split, os.path.join(cfg.out, 'attention')))
    return 0


def cmd_grad_check(cfg):
    """Compares tape gradients of every variant with central finite differences on a small random batch.

    Each model is redrawn from N(0, grad_scale^2) before the check (see ``Model.redraw``).
    """
    seed = cfg.seeds[0]
    rng = np.random.default_rng(seed)
    T, n, m = cfg.grad_T, cfg.grad_n, cfg.grad_m
    batch_size = 2
    batch = WindowBatch(rng.standard_normal((batch_size, n, T)), rng.standard_normal((batch_size, T - 1)),
                        rng.standard_normal(batch_size), np.arange(batch_size))

    report, failed = collections.OrderedDict(), []
    for variant in variants(cfg, default_all=True):
        model = Model.build(Hyperparams(T, n, m, m, variant), seed).redraw(cfg.grad_scale, seed)
        tape = nd.Tape()
        tape.backward(batch_loss(model, batch, tape))
        check = nd.finite_diff_check(lambda store: float(nd.value_of(batch_loss(model, batch))), model.store,
                                     step=cfg.step, tol=cfg.tol)
        groups = collections.OrderedDict()
        for name, error in check.errors.items():
            group = name.rpartition('.')[0]
            groups[group] = max(groups.get(group, 0.0), error)
        report[variant.value] = collections.OrderedDict([('passed', check.passed), ('groups', groups),
                                                         ('offenders', check.offenders)])
        print('%s: %s' % (variant.label, 'pass' if check.passed else 'FAIL'))
        for group, error in groups.items():
            print('  %-12s max relative error %.3e' % (group, error))
        failed.extend('%s:%s' % (variant.value, name) for name in check.offenders)

    _write_json(_path(cfg, 'gradcheck', 'gradcheck.json'), report)
    if failed:
        print('gradient check failed (tol %g): %s' % (cfg.tol, ', '.join(failed)), file=sys.stderr)
        return 1
    return 0


def cmd_synth(cfg):
    """Generates a synthetic NARX dataset in the ingestion CSV format, seeded by the first of ``seeds``."""
    series = synth_narx(cfg.n, cfg.length, cfg.relevant, cfg.noise_std, cfg.seeds[0])
    path = _path(cfg, 'synthetic.csv')
    write_csv(series, path)
    print(path)
    return 0


def cmd_describe(cfg):
    """Prints the parameter census of the configured variant as a markdown table."""
    n = len(load_series(cfg.dataset, cfg.target_column).names) if cfg.dataset else cfg.n
    model = Model.build(hyperparams(cfg, n), cfg.seeds[0])
    print(repr(describe(model)))
    return 0


#: command name -> implementation
COMMANDS = collections.OrderedDict([
    ('train', cmd_train),
    ('evaluate', cmd_evaluate),
    ('grid-search', cmd_grid_search),
    ('ablation', cmd_ablation),
    ('robustness', cmd_robustness),
    ('dump-attention', cmd_dump_attention),
    ('grad-check', cmd_grad_check),
    ('synth-data', cmd_synth),
    ('describe', cmd_describe)
])
