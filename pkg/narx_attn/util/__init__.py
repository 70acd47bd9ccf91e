"""Utility functions (internal use)."""

from .describe import describe
from .graph import graph


def splitter_fn(delim):
    """Simple string splitter function builder.

    Creates a splitter that splits an input string on ``delim``, strips whitespace, drops empty fields, and yields
    the resulting values one at a time.

    :param delim: delimiter character (e.g., ',')
    :return: splitter function
    """
    def splitter(s):
        if s:
            for v in s.split(delim):
                v = v.strip()
                if v:
                    yield v
    return splitter
