"""Run configuration: the ``key = value`` file grammar, the typed schema, and validation."""

import collections
import errno
import logging
import os
from pyparsing import Word, Literal, alphas, alphanums, restOfLine, ParseException
from ..errors import ConfigError
from ..network import ModelVariant, Hyperparams
from ..train import TrainConfig
from ..data import SplitSpec, default_split_spec
from ..util import splitter_fn

logger = logging.getLogger(__name__)

#
# Grammar
#

_identifier = Word(alphas + '_', alphanums + '_')
_assignment = _identifier('key') + Literal('=').suppress() + restOfLine('value')


def parse_config_text(text, origin='<config>'):
    """Parses ``key = value`` lines into an ordered ``{key: (value text, line number)}`` mapping.

    Blank lines and lines starting with ``#`` are skipped; values run to the end of the line.

    :param text: configuration text
    :param origin: name used in error messages (usually the file name)
    :return: OrderedDict
    """
    entries = collections.OrderedDict()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith('#'):
            continue
        try:
            parsed = _assignment.parseString(stripped, parseAll=True)
        except ParseException:
            raise ConfigError('%s:%d: expected "key = value", got "%s"' % (origin, lineno, stripped))
        key = parsed['key']
        if key in entries:
            raise ConfigError('%s:%d: duplicate key "%s" (first set on line %d)' % (
                origin, lineno, key, entries[key][1]))
        entries[key] = (parsed['value'].strip(), lineno)
    return entries


def parse_config_file(filename):
    """Reads and parses a configuration file."""
    with open(filename, encoding='utf-8') as fp:
        return parse_config_text(fp.read(), origin=filename)


#
# Typed schema
#

_split = splitter_fn(',')


def _bool(text):
    lowered = text.strip().lower()
    if lowered in ('true', 'yes', 'on', '1'):
        return True
    if lowered in ('false', 'no', 'off', '0'):
        return False
    raise ValueError('expected true or false, got "%s"' % text)


def _int_list(text):
    values = [int(v) for v in _split(text)]
    if not values:
        raise ValueError('expected a comma-separated list of integers')
    return values


def _str_list(text):
    values = list(_split(text))
    if not values:
        raise ValueError('expected a comma-separated list')
    return values


def _optional(convert):
    def converter(text):
        return None if text.strip().lower() in ('', 'none') else convert(text)
    return converter


#: a schema entry: converter from text, and the default value
Option = collections.namedtuple('Option', 'convert default')

SCHEMA = collections.OrderedDict([
    ('dataset', Option(_optional(str), None)),
    ('target_column', Option(str, 'y')),
    ('variant', Option(str, ModelVariant.DA_RNN.value)),
    ('T', Option(int, 10)),
    ('m', Option(int, 64)),
    ('p', Option(_optional(int), None)),
    ('batch_size', Option(int, 128)),
    ('lr0', Option(float, 0.001)),
    ('decay_factor', Option(float, 0.9)),
    ('decay_every', Option(int, 10000)),
    ('max_epochs', Option(int, 10)),
    ('shuffle', Option(_bool, True)),
    ('normalization', Option(str, 'standardize')),
    ('seeds', Option(_int_list, [0])),
    ('out', Option(str, 'runs')),
    ('train_len', Option(_optional(int), None)),
    ('valid_len', Option(_optional(int), None)),
    ('test_len', Option(_optional(int), None)),
    ('T_grid', Option(_optional(_int_list), None)),
    ('m_grid', Option(_optional(_int_list), None)),
    ('variants', Option(_optional(_str_list), None)),
    ('jobs', Option(int, 1)),
    ('window_start', Option(_optional(int), None)),
    ('window_stop', Option(_optional(int), None)),
    ('split', Option(str, 'test')),
    ('model', Option(_optional(str), None)),
    ('relevant', Option(_optional(_int_list), None)),
    ('n', Option(int, 10)),
    ('length', Option(int, 2000)),
    ('noise_std', Option(float, 0.1)),
    ('noise_seed', Option(int, 0)),
    ('tol', Option(float, 1e-4)),
    ('step', Option(float, 1e-5)),
    ('grad_T', Option(int, 4)),
    ('grad_n', Option(int, 3)),
    ('grad_m', Option(int, 4)),
    ('grad_scale', Option(float, 0.6))
])

#: a fully typed configuration; every key of the schema is a field
RunConfig = collections.namedtuple('RunConfig', list(SCHEMA))

#: split names accepted by the ``split`` key
SPLITS = ('train', 'valid', 'test', 'all')

#: commands that read the dataset, and those that read a model snapshot
_NEEDS_DATASET = ('train', 'evaluate', 'grid-search', 'ablation', 'robustness', 'dump-attention')
_NEEDS_MODEL = ('evaluate', 'dump-attention')


def _convert(key, text, where):
    if key not in SCHEMA:
        raise ConfigError('%s: unknown key "%s"' % (where, key))
    try:
        return SCHEMA[key].convert(text)
    except ValueError as e:
        raise ConfigError('%s: invalid value "%s" for key "%s" (%s)' % (where, text, key, e))


def load_config(filename=None, flags=None, overrides=None):
    """Merges defaults, a config file, global flags, and ``key=value`` overrides, in increasing precedence.

    :param filename: optional path of a config file
    :param flags: optional ``{key: text}`` of global command-line flags (e.g., out, seeds, jobs)
    :param overrides: optional list of ``key=value`` strings
    :return: RunConfig (typed, not yet validated for a command)
    """
    values = collections.OrderedDict((key, option.default) for key, option in SCHEMA.items())
    if filename:
        for key, (text, lineno) in parse_config_file(filename).items():
            values[key] = _convert(key, text, '%s:%d' % (filename, lineno))
    for key, text in (flags or {}).items():
        if text is not None:
            values[key] = _convert(key, str(text), 'command line')
    for override in overrides or []:
        key, sep, text = override.partition('=')
        if not sep:
            raise ConfigError('override "%s" must have the form key=value' % override)
        values[key.strip()] = _convert(key.strip(), text.strip(), 'override')
    return RunConfig(**values)


def validate(cfg, command):
    """Checks every value a command depends on, before any data is read.

    :param cfg: RunConfig
    :param command: command name, e.g. 'train'
    :return: the config
    :raises ConfigError: naming the offending key
    :raises FileNotFoundError: when the dataset or model snapshot a command reads does not exist
    """
    def require(condition, key, message):
        if not condition:
            raise ConfigError('%s: %s (got %r)' % (key, message, getattr(cfg, key)))

    def require_file(path, key):
        if not os.path.isfile(path):
            raise FileNotFoundError(errno.ENOENT, '%s: file not found' % key, path)

    try:
        ModelVariant.parse(cfg.variant)
        for variant in cfg.variants or []:
            ModelVariant.parse(variant)
    except ValueError as e:
        raise ConfigError(str(e))

    require(cfg.T >= 2, 'T', 'window length must be at least 2')
    require(cfg.m >= 1, 'm', 'must be at least 1')
    require(cfg.p is None or cfg.p >= 1, 'p', 'must be at least 1')
    require(cfg.batch_size >= 1, 'batch_size', 'must be at least 1')
    require(cfg.lr0 > 0, 'lr0', 'must be positive')
    require(0 < cfg.decay_factor <= 1, 'decay_factor', 'must lie in (0, 1]')
    require(cfg.decay_every >= 1, 'decay_every', 'must be at least 1')
    require(cfg.max_epochs >= 0, 'max_epochs', 'must be non-negative')
    require(cfg.normalization in ('standardize', 'none'), 'normalization', 'must be standardize or none')
    require(all(seed >= 0 for seed in cfg.seeds), 'seeds', 'must be non-negative integers')
    require(cfg.jobs >= 1, 'jobs', 'must be at least 1')
    require(cfg.split in SPLITS, 'split', 'must be one of %s' % ', '.join(SPLITS))
    require(cfg.T_grid is None or all(T >= 2 for T in cfg.T_grid), 'T_grid', 'window lengths must be at least 2')
    require(cfg.m_grid is None or all(m >= 1 for m in cfg.m_grid), 'm_grid', 'hidden sizes must be at least 1')

    lengths = (cfg.train_len, cfg.valid_len, cfg.test_len)
    require(all(v is None for v in lengths) or all(v is not None for v in lengths), 'train_len',
            'train_len, valid_len and test_len must be given together')
    require(all(v is None or v >= 1 for v in lengths), 'train_len', 'split sizes must be positive')
    require(cfg.window_start is None or cfg.window_start >= 0, 'window_start', 'must be non-negative')
    require(cfg.window_stop is None or cfg.window_stop > (cfg.window_start or 0), 'window_stop',
            'must exceed window_start')

    if command in _NEEDS_DATASET:
        require(cfg.dataset, 'dataset', 'a dataset path is required by "%s"' % command)
        require_file(cfg.dataset, 'dataset')
    if command in _NEEDS_MODEL:
        require(cfg.model, 'model', 'a model snapshot path is required by "%s"' % command)
        require_file(cfg.model, 'model')
    if command == 'robustness':
        require(ModelVariant.parse(cfg.variant).input_attention, 'variant',
                'the robustness experiment needs a variant with input attention')
    if command == 'synth-data':
        require(cfg.n >= 1, 'n', 'must be at least 1')
        require(cfg.length >= 100, 'length', 'synthetic series need at least 100 steps')
        require(cfg.noise_std >= 0, 'noise_std', 'must be non-negative')
        require(cfg.relevant, 'relevant', 'the synthetic generator needs relevant series indices')
        require(all(1 <= k <= cfg.n for k in cfg.relevant), 'relevant', 'indices must lie in 1..n')
    if command == 'grad-check':
        require(2 <= cfg.grad_T <= 6, 'grad_T', 'must lie in 2..6')
        require(1 <= cfg.grad_n <= 4, 'grad_n', 'must lie in 1..4')
        require(1 <= cfg.grad_m <= 6, 'grad_m', 'must lie in 1..6')
        require(cfg.grad_scale > 0, 'grad_scale', 'must be positive')
        require(cfg.tol > 0, 'tol', 'must be positive')
        require(cfg.step > 0, 'step', 'must be positive')
    if command == 'describe':
        require(cfg.dataset or cfg.n >= 1, 'n', 'must be at least 1')
    logger.debug('validated configuration for "%s": %s', command, cfg)
    return cfg


#
# Derived settings
#

def hidden_sizes(cfg, m=None):
    """Returns (m, p) with p defaulting to m; a grid value of m also sets p."""
    if m is not None:
        return m, m
    return cfg.m, cfg.p if cfg.p is not None else cfg.m


def hyperparams(cfg, n, variant=None, T=None, m=None):
    m, p = hidden_sizes(cfg, m)
    return Hyperparams(T if T is not None else cfg.T, n, m, p, variant if variant is not None else cfg.variant)


def train_config(cfg, seed):
    return TrainConfig(cfg.batch_size, cfg.lr0, cfg.decay_factor, cfg.decay_every, cfg.max_epochs, seed, cfg.shuffle)


def split_spec(cfg, length):
    if cfg.train_len is None:
        return default_split_spec(length)
    return SplitSpec(cfg.train_len, cfg.valid_len, cfg.test_len)


def variants(cfg, default_all=False):
    """Variants a command iterates over: the ``variants`` list when set, else all five or just ``variant``."""
    if cfg.variants:
        return [ModelVariant.parse(v) for v in cfg.variants]
    return list(ModelVariant) if default_all else [ModelVariant.parse(cfg.variant)]
