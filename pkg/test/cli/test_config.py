"""Tests for configuration parsing, precedence, and validation."""
import logging
import os
import unittest
from narx_attn.cli import config
from narx_attn.errors import ConfigError
from narx_attn.network import ModelVariant
from test.helpers import TempDirTestCase

logger = logging.getLogger(__name__)
logger.setLevel(os.getenv('NARX_ATTN_TEST_LOGLEVEL', default=logging.WARNING))


class TestParse (unittest.TestCase):

    def test_lines(self):
        entries = config.parse_config_text('# a comment\n\nT = 10\n  m=64  \nvariants = da_rnn, narx_rnn\n')
        self.assertEqual(list(entries), ['T', 'm', 'variants'])
        self.assertEqual(entries['T'], ('10', 3))
        self.assertEqual(entries['m'][0], '64')
        self.assertEqual(entries['variants'][0], 'da_rnn, narx_rnn')

    def test_duplicate_key(self):
        with self.assertRaises(ConfigError) as cm:
            config.parse_config_text('T = 10\nT = 12\n', origin='run.conf')
        self.assertIn('run.conf:2', str(cm.exception))

    def test_malformed_line(self):
        for text in ('T 10', '= 10', '10 = T'):
            with self.assertRaises(ConfigError, msg=text):
                config.parse_config_text(text)


class TestLoad (TempDirTestCase):

    def _write(self, text):
        filename = self.path('run.conf')
        with open(filename, 'w', encoding='utf-8') as f:
            f.write(text)
        return filename

    def test_defaults(self):
        cfg = config.load_config()
        self.assertEqual((cfg.T, cfg.m, cfg.p, cfg.batch_size), (10, 64, None, 128))
        self.assertEqual((cfg.lr0, cfg.decay_factor, cfg.decay_every, cfg.max_epochs), (0.001, 0.9, 10000, 10))
        self.assertEqual(cfg.variant, 'da_rnn')
        self.assertEqual(cfg.seeds, [0])
        self.assertTrue(cfg.shuffle)

    def test_precedence(self):
        filename = self._write('T = 12\nm = 16\nout = from_file\nshuffle = no\n')
        cfg = config.load_config(filename, flags={'out': 'from_flag', 'seeds': None}, overrides=['m=32'])
        self.assertEqual(cfg.T, 12)
        self.assertEqual(cfg.m, 32)
        self.assertEqual(cfg.out, 'from_flag')
        self.assertEqual(cfg.seeds, [0])
        self.assertFalse(cfg.shuffle)

    def test_lists(self):
        cfg = config.load_config(overrides=['T_grid=3, 5,10', 'seeds=1,2', 'p=none'])
        self.assertEqual(cfg.T_grid, [3, 5, 10])
        self.assertEqual(cfg.seeds, [1, 2])
        self.assertIsNone(cfg.p)

    def test_unknown_key(self):
        with self.assertRaises(ConfigError) as cm:
            config.load_config(self._write('learning_rate = 0.1\n'))
        self.assertIn('learning_rate', str(cm.exception))
        with self.assertRaises(ConfigError):
            config.load_config(overrides=['bogus=1'])

    def test_bad_value(self):
        with self.assertRaises(ConfigError) as cm:
            config.load_config(overrides=['T=ten'])
        self.assertIn('"T"', str(cm.exception))
        with self.assertRaises(ConfigError):
            config.load_config(overrides=['shuffle=maybe'])
        with self.assertRaises(ConfigError):
            config.load_config(overrides=['T'])


class TestValidate (TempDirTestCase):

    def setUp(self):
        super(TestValidate, self).setUp()
        self.dataset = self.path('data.csv')
        with open(self.dataset, 'w', encoding='utf-8') as f:
            f.write('x1,y\n1,2\n')

    def _cfg(self, *overrides):
        return config.load_config(overrides=['dataset=%s' % self.dataset] + list(overrides))

    def test_valid(self):
        cfg = self._cfg()
        self.assertIs(config.validate(cfg, 'train'), cfg)

    def _assert_key(self, key, command, *overrides):
        with self.assertRaises(ConfigError) as cm:
            config.validate(self._cfg(*overrides), command)
        self.assertIn(key, str(cm.exception))

    def test_invalid_values(self):
        self._assert_key('T', 'train', 'T=1')
        self._assert_key('batch_size', 'train', 'batch_size=0')
        self._assert_key('lr0', 'train', 'lr0=0')
        self._assert_key('decay_factor', 'train', 'decay_factor=1.5')
        self._assert_key('max_epochs', 'train', 'max_epochs=-1')
        self._assert_key('normalization', 'train', 'normalization=minmax')
        self._assert_key('split', 'train', 'split=holdout')
        self._assert_key('train_len', 'train', 'train_len=100')
        self._assert_key('gru', 'train', 'variant=gru')

    def test_missing_files(self):
        with self.assertRaises(ConfigError):
            config.validate(config.load_config(), 'train')
        self._assert_key('model', 'evaluate')
        with self.assertRaises(FileNotFoundError) as cm:
            config.validate(self._cfg('dataset=%s' % self.path('absent.csv')), 'train')
        self.assertEqual(cm.exception.filename, self.path('absent.csv'))
        with self.assertRaises(FileNotFoundError) as cm:
            config.validate(self._cfg('model=%s' % self.path('absent.txt')), 'evaluate')
        self.assertIn('model', str(cm.exception))

    def test_command_requirements(self):
        self._assert_key('variant', 'robustness', 'variant=attention_rnn')
        self._assert_key('relevant', 'synth-data')
        self._assert_key('relevant', 'synth-data', 'relevant=11')
        self._assert_key('grad_T', 'grad-check', 'grad_T=7')
        self._assert_key('grad_scale', 'grad-check', 'grad_scale=0')
        config.validate(self._cfg('relevant=1,2'), 'synth-data')
        config.validate(config.load_config(), 'grad-check')


class TestDerived (unittest.TestCase):

    def test_hidden_sizes(self):
        cfg = config.load_config(overrides=['m=16'])
        self.assertEqual(config.hidden_sizes(cfg), (16, 16))
        self.assertEqual(config.hidden_sizes(cfg._replace(p=8)), (16, 8))
        self.assertEqual(config.hidden_sizes(cfg._replace(p=8), m=32), (32, 32))
        hp = config.hyperparams(cfg, 5, T=4)
        self.assertEqual((hp.T, hp.n, hp.m, hp.p), (4, 5, 16, 16))

    def test_variants(self):
        cfg = config.load_config()
        self.assertEqual(config.variants(cfg), [ModelVariant.DA_RNN])
        self.assertEqual(config.variants(cfg, default_all=True), list(ModelVariant))
        self.assertEqual(config.variants(cfg._replace(variants=['narx_rnn'])), [ModelVariant.NARX_RNN])

    def test_split_spec(self):
        cfg = config.load_config(overrides=['train_len=10', 'valid_len=5', 'test_len=5'])
        self.assertEqual(tuple(config.split_spec(cfg, 100)), (10, 5, 5))
        self.assertEqual(sum(config.split_spec(config.load_config(), 100)), 100)


if __name__ == '__main__':
    unittest.main()
