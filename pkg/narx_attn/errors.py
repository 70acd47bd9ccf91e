"""Exceptions raised by the library."""


class ShapeError (ValueError):
    """Operand shapes are inconsistent with an operation."""


class StateError (RuntimeError):
    """An object was used in the wrong lifecycle state."""


class NumericError (ArithmeticError):
    """A non-finite value was produced or encountered."""


class TrainingDiverged (NumericError):
    """The training loss became non-finite."""
    def __init__(self, iteration, lr, loss):
        super(TrainingDiverged, self).__init__(
            'training diverged at iteration %d (lr=%r): loss is %r' % (iteration, lr, loss))
        self.iteration = iteration
        self.lr = lr
        self.loss = loss

    def __reduce__(self):
        return TrainingDiverged, (self.iteration, self.lr, self.loss)


class DataError (ValueError):
    """Dataset contents are unusable (e.g., a constant series)."""


class ConfigError (ValueError):
    """Invalid configuration key or value."""


class ParseError (ValueError):
    """A cell of an input file could not be parsed as a number."""
    def __init__(self, message, row=None, column=None):
        super(ParseError, self).__init__(message)
        self.row = row
        self.column = column

    def __reduce__(self):
        return ParseError, (self.args[0], self.row, self.column)


class FormatError (ValueError):
    """An input file is structurally malformed (e.g., ragged rows)."""


class DomainError (ValueError):
    """A value lies outside the domain of a function."""
    def __init__(self, message, index=None):
        super(DomainError, self).__init__(message)
        self.index = index

    def __reduce__(self):
        return DomainError, (self.args[0], self.index)
