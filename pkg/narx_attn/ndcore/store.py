"""Named parameter storage with gradient slots, and its text serialization."""

import collections
import logging
import re
import numpy as np
from ..errors import ShapeError, FormatError

logger = logging.getLogger(__name__)

#: a stored parameter: value, gradient of the same shape, and the shape record
Entry = collections.namedtuple('Entry', 'value grad shape')

_header_pattern = re.compile(r'^#\s*(?P<name>\S+)\s+(?P<rows>\d+)\s+(?P<cols>\d+)\s*$')
_scalar_pattern = re.compile(r'^(?P<name>[^\[\s]+)\[(?P<index>\d+(,\d+)?)\]\t(?P<value>\S+)$')


class ParameterStore (object):
    """All learnable weights of a model, addressable by name.

    Values are vectors (1-d) or matrices (2-d) of float64. Each entry has a gradient slot of identical shape,
    which the tape's backward pass accumulates into.
    """
    def __init__(self):
        self._entries = collections.OrderedDict()

    def __contains__(self, name):
        return name in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def names(self):
        return list(self._entries)

    def add(self, name, value):
        """Adds a parameter (copied) with a zeroed gradient slot.

        :param name: unique parameter name
        :param value: vector or matrix initial value
        """
        if name in self._entries:
            raise ValueError('duplicate parameter name "%s"' % name)
        value = np.array(value, dtype=np.float64)
        if value.ndim not in (1, 2) or value.size == 0:
            raise ShapeError('parameter "%s" must be a non-empty vector or matrix, got shape %s' % (name, value.shape))
        self._entries[name] = Entry(value, np.zeros_like(value), value.shape)

    def entry(self, name):
        try:
            return self._entries[name]
        except KeyError:
            raise KeyError('no parameter named "%s"' % name)

    def value(self, name):
        return self.entry(name).value

    def grad(self, name):
        return self.entry(name).grad

    def shape(self, name):
        return self.entry(name).shape

    def accumulate(self, name, grad):
        """Adds ``grad`` into the gradient slot of ``name``."""
        entry = self.entry(name)
        if grad.shape != entry.shape:
            raise ShapeError('gradient of shape %s does not match parameter "%s" of shape %s' % (
                grad.shape, name, entry.shape))
        entry.grad[...] += grad

    def zero_grad(self):
        for entry in self._entries.values():
            entry.grad.fill(0.0)

    def num_scalars(self):
        return sum(entry.value.size for entry in self._entries.values())

    def snapshot(self):
        """Returns an independent copy of the values, with zeroed gradients."""
        copy = ParameterStore()
        for name, entry in self._entries.items():
            copy.add(name, entry.value)
        return copy

    def assign(self, other):
        """Overwrites the values of this store, in place, with those of a store of identical layout."""
        if self.names() != other.names():
            raise ValueError('parameter stores differ in their parameter names')
        for name, entry in self._entries.items():
            source = other.value(name)
            if source.shape != entry.shape:
                raise ShapeError('parameter "%s": shape %s does not match %s' % (name, source.shape, entry.shape))
            entry.value[...] = source

    def save(self, filename):
        """Writes the store in its flat text format.

        A header block records each shape as ``# name rows cols`` (vectors as ``len 1``), followed by one line per
        scalar, ``name[i]`` or ``name[i,j]``, a tab, and the value with 17 significant digits.
        """
        with open(filename, 'w') as fp:
            for name, entry in self._entries.items():
                rows, cols = entry.shape if len(entry.shape) == 2 else (entry.shape[0], 1)
                fp.write('# %s %d %d\n' % (name, rows, cols))
            for name, entry in self._entries.items():
                for index in np.ndindex(*entry.shape):
                    fp.write('%s[%s]\t%.17g\n' % (name, ','.join(str(i) for i in index), entry.value[index]))
        logger.debug('Wrote %d parameters to %s', len(self._entries), filename)

    @classmethod
    def load(cls, filename):
        """Reads a store written by ``save``; values round-trip exactly.

        :param filename: path of the text file
        :return: a ParameterStore
        """
        shapes = collections.OrderedDict()
        scalars = collections.defaultdict(dict)
        with open(filename) as fp:
            for lineno, line in enumerate(fp, start=1):
                line = line.rstrip('\n')
                if not line.strip():
                    continue
                if line.startswith('#'):
                    m = _header_pattern.match(line)
                    if not m:
                        raise FormatError('%s:%d: malformed shape header "%s"' % (filename, lineno, line))
                    shapes[m.group('name')] = (int(m.group('rows')), int(m.group('cols')))
                    continue
                m = _scalar_pattern.match(line)
                if not m:
                    raise FormatError('%s:%d: malformed parameter line "%s"' % (filename, lineno, line))
                index = tuple(int(i) for i in m.group('index').split(','))
                try:
                    scalars[m.group('name')][index] = float(m.group('value'))
                except ValueError:
                    raise FormatError('%s:%d: value "%s" is not a number' % (filename, lineno, m.group('value')))

        store = cls()
        for name, (rows, cols) in shapes.items():
            values = scalars.pop(name, {})
            is_vector = all(len(index) == 1 for index in values)
            shape = (rows,) if is_vector else (rows, cols)
            if is_vector and cols != 1:
                raise FormatError('%s: vector "%s" must record 1 column, got %d' % (filename, name, cols))
            array = np.empty(shape, dtype=np.float64)
            expected = set(np.ndindex(*shape))
            if set(values) != expected:
                raise FormatError('%s: parameter "%s" has %d of %d expected values' % (
                    filename, name, len(set(values) & expected), len(expected)))
            for index, value in values.items():
                array[index] = value
            store.add(name, array)
        if scalars:
            raise FormatError('%s: values without a shape header: %s' % (filename, ', '.join(sorted(scalars))))
        return store
