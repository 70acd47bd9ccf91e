"""Methods for describing models and parameter stores."""

from collections import defaultdict
from ..ndcore import ParameterStore
from ..network import Model


def describe(obj):
    """Returns a text (markdown) description.

    :param obj: a Model or a ParameterStore
    :return: a Description object that can be dumped to the console for text or markdown display
    """
    if isinstance(obj, Model):
        return describe_model(obj)
    elif isinstance(obj, ParameterStore):
        return describe_store(obj)

    raise TypeError('Objects of type {typ} are not supported'.format(typ=type(obj).__name__))


class Description (object):
    """Renders as plain text through ``repr`` and as quoted markdown in notebooks."""

    def __init__(self, make):
        self._make = make

    def _repr_markdown_(self):
        return self._make(quote=markdown_quote)

    def __repr__(self):
        return self._make()


def _census(store, quote):
    data = [
        ["Name", "Shape", "Scalars"]
    ] + [
        [name, ' x '.join(str(s) for s in store.shape(name)), store.value(name).size] for name in store
    ] + [
        ["Total", "", store.num_scalars()]
    ]
    return markdown_table(data, quote)


def describe_store(store):
    """Returns a text (markdown) parameter census of a store: name, shape, scalar count, and the total."""

    def _make_markdown_repr(quote=lambda s: s):
        return "### Parameters\n" + _census(store, quote)

    return Description(_make_markdown_repr)


def describe_model(model):
    """Returns a text (markdown) description of a model: its variant, dimensions, and parameter census."""
    T, n, m, p, variant = model.hyperparams

    def _make_markdown_repr(quote=lambda s: s):
        dims = [
            ["Variant", "T", "n", "m", "p"],
            [variant.label, T, n, m, p]
        ]
        return "### Model \"" + quote(variant.value) + "\"\n" + \
               markdown_table(dims, quote) + "\n" + \
               "#### Parameters\n" + \
               _census(model.store, quote)

    return Description(_make_markdown_repr)


def markdown_quote(s, special="\\`*_{}[]()#+-.!"):
    """Escapes markdown special characters of a string."""
    if not s:
        return s
    return ''.join('\\' + c if c in special else c for c in s)


def markdown_table(data=[[""]], quote=lambda s: s):
    """Generates a markdown table from rows of values; the first row is the header."""
    text = [[str(value) for value in row] for row in data]

    # column widths
    padding = defaultdict(int)
    for row in text:
        for i, value in enumerate(row):
            padding[i] = max(padding[i], len(value))

    def _row(values):
        return '| ' + ' | '.join(quote(value).ljust(padding[i]) for i, value in enumerate(values)) + ' |\n'

    rule = '|-' + '-|-'.join('-' * padding[i] for i in range(len(text[0]))) + '-|\n'
    return _row(text[0]) + rule + ''.join(_row(row) for row in text[1:])
