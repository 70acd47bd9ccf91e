"""Command-line interface of the ``narx-attn`` tool."""

import argparse
import logging
import os
import sys
from ..errors import ConfigError, TrainingDiverged
from .config import load_config, validate
from .commands import COMMANDS

logger = logging.getLogger(__name__)

#: environment variable with the default log level
LOGLEVEL_ENV = 'NARX_ATTN_LOGLEVEL'

_help = {
    'train': 'train the configured variant once per seed',
    'evaluate': 'evaluate a model snapshot on a split',
    'grid-search': 'sweep window length and hidden size',
    'ablation': 'compare all model variants',
    'robustness': 'train with permuted copies of the driving series appended',
    'dump-attention': 'write attention weights and predictions of a snapshot',
    'grad-check': 'compare tape gradients with finite differences',
    'synth-data': 'generate a synthetic NARX dataset',
    'describe': 'print the parameter census of the configured variant'
}


def _global_flags(suppress):
    """Flags accepted before or after the command name."""
    default = argparse.SUPPRESS if suppress else None
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--config', metavar='PATH', default=default, help='configuration file of key = value lines')
    parser.add_argument('--out', metavar='DIR', default=default, help='output directory')
    parser.add_argument('--seeds', metavar='LIST', default=default, help='comma-separated seeds, e.g. 0,1,2')
    parser.add_argument('--jobs', metavar='K', default=default, help='concurrent training runs')
    parser.add_argument('--set', metavar='KEY=VALUE', action='append', default=default, dest='overrides',
                        help='override a configuration key (repeatable)')
    parser.add_argument('--log-level', metavar='LEVEL', default=default, dest='log_level',
                        help='logging level (default: WARNING, or $%s)' % LOGLEVEL_ENV)
    return parser


def make_parser():
    parser = argparse.ArgumentParser(prog='narx-attn', parents=[_global_flags(False)],
                                     description='Attention-based recurrent networks for NARX time series prediction.')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[_global_flags(True)], help=_help[name])
    return parser


def main(argv=None):
    """Runs a command and returns its exit status: 0 on success, 2 on a usage or configuration error, 1 otherwise."""
    args = make_parser().parse_args(argv)

    level = (args.log_level or os.environ.get(LOGLEVEL_ENV) or 'WARNING').upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        flags = {'out': args.out, 'seeds': args.seeds, 'jobs': args.jobs}
        cfg = validate(load_config(args.config, flags, args.overrides), args.command)
    except (ConfigError, ValueError, OSError) as e:
        print('narx-attn: error: %s' % e, file=sys.stderr)
        return 2

    try:
        return COMMANDS[args.command](cfg)
    except TrainingDiverged as e:
        logger.error('%s', e)
        print('narx-attn: %s' % e, file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, RuntimeError, OSError) as e:
        print('narx-attn: %s: %s' % (type(e).__name__, e), file=sys.stderr)
        return 1
