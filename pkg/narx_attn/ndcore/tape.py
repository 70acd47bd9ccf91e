"""Dense vector arithmetic and the reverse-mode differentiation tape.

Every primitive applies its vector-level definition along the last axis of its operands; any leading axes are
batch axes, and unbatched operands (typically parameters) broadcast across them. Called with plain arrays, a
primitive simply evaluates. Called with at least one tape variable, it also appends a node to that variable's tape,
keeping the local vector-Jacobian product needed by the backward pass.
"""

import collections
import functools
import logging
import numpy as np
from ..errors import ShapeError, StateError, NumericError

logger = logging.getLogger(__name__)

#: a recorded primitive: op name, input node indices, output value, and vector-Jacobian product (None for leaves)
Node = collections.namedtuple('Node', 'op inputs value vjp')


def as_array(value):
    """Returns the value as a float64 numpy array (without copying when possible)."""
    return np.asarray(value, dtype=np.float64)


class Var (object):
    """Handle to a node of a tape."""

    __slots__ = ('tape', 'index')

    def __init__(self, tape, index):
        self.tape = tape
        self.index = index

    @property
    def value(self):
        return self.tape.nodes[self.index].value

    @property
    def shape(self):
        return self.value.shape

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __repr__(self):
        return 'Var(%d, %s, shape=%s)' % (self.index, self.tape.nodes[self.index].op, self.shape)


class Tape (object):
    """Append-only record of primitive operations.

    Node inputs always reference earlier nodes, so the node list is a topological order by construction and the
    backward pass is a single reverse sweep.
    """
    def __init__(self):
        self.nodes = []
        self.outputs = []
        self._parameters = {}  # node index -> (store, name)
        self._bound = {}  # (id(store), name) -> Var

    def __len__(self):
        return len(self.nodes)

    def _append(self, node):
        self.nodes.append(node)
        return Var(self, len(self.nodes) - 1)

    def constant(self, value):
        """Records a constant leaf."""
        return self._append(Node('const', (), as_array(value), None))

    def parameter(self, store, name):
        """Records (once per tape) a leaf bound to a named entry of a parameter store.

        :param store: a ParameterStore
        :param name: name of the parameter
        :return: tape variable whose adjoint is accumulated into the store's gradient slot
        """
        key = (id(store), name)
        if key not in self._bound:
            var = self._append(Node('param', (), store.value(name), None))
            self._parameters[var.index] = (store, name)
            self._bound[key] = var
        return self._bound[key]

    def parameter_name(self, index):
        """Returns the store name bound to a node index, or None."""
        binding = self._parameters.get(index)
        return binding[1] if binding else None

    def record(self, op, inputs, value, vjp):
        """Appends a computed node; inputs must be variables of this tape."""
        assert all(var.tape is self for var in inputs), 'inputs must belong to this tape'
        return self._append(Node(op, tuple(var.index for var in inputs), value, vjp))

    def backward(self, loss):
        """Accumulates d(loss)/d(parameter) into the gradient slots of every bound parameter store.

        Intermediate adjoints are local to this call and discarded afterwards.

        :param loss: scalar tape variable
        """
        if not isinstance(loss, Var) or loss.tape is not self or loss.index >= len(self.nodes):
            raise StateError('backward requires a loss variable recorded on this tape')
        if self.nodes[loss.index].vjp is None:
            raise StateError('backward requires a computed loss, not a leaf node')
        value = loss.value
        if value.size != 1:
            raise ShapeError('backward requires a scalar loss, got shape %s' % (value.shape,))

        self.outputs.append(loss.index)
        adjoints = [None] * (loss.index + 1)
        adjoints[loss.index] = np.ones_like(value)
        for i in range(loss.index, -1, -1):
            grad = adjoints[i]
            if grad is None:
                continue
            adjoints[i] = None
            node = self.nodes[i]
            if node.vjp is None:
                if i in self._parameters:
                    store, name = self._parameters[i]
                    store.accumulate(name, grad)
                continue
            for j, input_grad in zip(node.inputs, node.vjp(grad)):
                adjoints[j] = input_grad if adjoints[j] is None else adjoints[j] + input_grad
        logger.debug('backward visited %d nodes', loss.index + 1)


#
# Primitive definition helpers
#

def primitive(fn):
    """Turns ``fn(*values, **params) -> (value, vjp)`` into a primitive that evaluates or records.

    ``vjp(g)`` returns one gradient per positional input, shaped like that input.
    """
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        tape = None
        for arg in args:
            if isinstance(arg, Var):
                if tape is None:
                    tape = arg.tape
                elif arg.tape is not tape:
                    raise StateError('operands of "%s" belong to different tapes' % fn.__name__)
        values = [arg.value if isinstance(arg, Var) else as_array(arg) for arg in args]
        value, vjp = fn(*values, **kwargs)
        if not np.all(np.isfinite(value)):
            raise NumericError('"%s" produced non-finite values' % fn.__name__)
        if tape is None:
            return value
        inputs = [arg if isinstance(arg, Var) else tape.constant(val) for arg, val in zip(args, values)]
        return tape.record(fn.__name__, inputs, value, vjp)
    return wrapper


def _broadcast(op, a, b):
    try:
        return np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise ShapeError('%s: shapes %s and %s do not conform' % (op, a.shape, b.shape))


def _unbroadcast(grad, shape):
    """Sums a broadcast gradient back down to the operand's shape."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, size in enumerate(shape) if size == 1 and grad.shape[i] != 1)
    return grad.sum(axis=axes, keepdims=True) if axes else grad


#
# Primitives
#

@primitive
def matvec(A, x):
    """Affine map without bias: ``result[i] = sum_j A[i, j] * x[j]``."""
    if A.ndim != 2 or x.ndim < 1 or x.shape[-1] != A.shape[1]:
        raise ShapeError('matvec: matrix of shape %s does not conform with vector of shape %s' % (A.shape, x.shape))

    def vjp(g):
        lead = tuple(range(g.ndim - 1))
        return np.tensordot(g, x, axes=(lead, lead)), g @ A
    return x @ A.T, vjp


@primitive
def add(a, b):
    _broadcast('add', a, b)
    return a + b, lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape))


@primitive
def sub(a, b):
    _broadcast('sub', a, b)
    return a - b, lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape))


@primitive
def mul(a, b):
    _broadcast('mul', a, b)
    return a * b, lambda g: (_unbroadcast(g * b, a.shape), _unbroadcast(g * a, b.shape))


@primitive
def tanh(a):
    y = np.tanh(a)
    return y, lambda g: (g * (1.0 - y * y),)


@primitive
def sigmoid(a):
    # algebraically 1/(1+exp(-a)), without overflow for large negative inputs
    y = 0.5 * (1.0 + np.tanh(0.5 * a))
    return y, lambda g: (g * y * (1.0 - y),)


@primitive
def softmax(z, axis=-1):
    """Normalized exponentials along ``axis``, shifted by the max for stability."""
    if z.ndim == 0 or z.shape[axis] == 0:
        raise ShapeError('softmax of an empty vector (shape %s)' % (z.shape,))
    e = np.exp(z - z.max(axis=axis, keepdims=True))
    y = e / e.sum(axis=axis, keepdims=True)
    return y, lambda g: (y * (g - (g * y).sum(axis=axis, keepdims=True)),)


@primitive
def dot(a, b):
    """Inner product along the last axis (e.g., ``v^T x`` with v unbatched)."""
    if a.ndim < 1 or b.ndim < 1 or a.shape[-1] != b.shape[-1]:
        raise ShapeError('dot: shapes %s and %s do not conform' % (a.shape, b.shape))
    _broadcast('dot', a, b)

    def vjp(g):
        g = g[..., None]
        return _unbroadcast(g * b, a.shape), _unbroadcast(g * a, b.shape)
    return (a * b).sum(axis=-1), vjp


@primitive
def concat(*parts, axis=-1):
    """Concatenation ``[a; b; ...]`` along the vector axis."""
    try:
        value = np.concatenate(parts, axis=axis)
    except ValueError:
        raise ShapeError('concat: shapes %s do not conform' % ([part.shape for part in parts],))
    offsets = np.cumsum([part.shape[axis] for part in parts])[:-1]
    return value, lambda g: tuple(np.split(g, offsets, axis=axis))


@primitive
def stack(*parts, axis=-2):
    """Stacks equally shaped vectors into a new axis (e.g., T hidden states into a T x m block)."""
    try:
        value = np.stack(parts, axis=axis)
    except ValueError:
        raise ShapeError('stack: shapes %s do not conform' % ([part.shape for part in parts],))
    return value, lambda g: tuple(np.take(g, i, axis=axis) for i in range(len(parts)))


@primitive
def expand(a, axis=-1):
    """Inserts a unit axis, so that a per-example vector broadcasts against a block."""
    return np.expand_dims(a, axis), lambda g: (g.reshape(a.shape),)


@primitive
def reduce_sum(a, axis=None):
    def vjp(g):
        if axis is not None:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, a.shape),)
    return a.sum(axis=axis), vjp


@primitive
def reduce_mean(a):
    return np.asarray(a.mean()), lambda g: (np.full(a.shape, g / a.size),)


def square(a):
    return mul(a, a)


#: elementwise operations by name
_elementwise_ops = {
    'add': (add, 2),
    'mul': (mul, 2),
    'tanh': (tanh, 1),
    'sigmoid': (sigmoid, 1)
}


def elementwise(op, *args):
    """Applies a named elementwise operation: one of 'add', 'mul', 'tanh', 'sigmoid'.

    :param op: operation name
    :param args: operands (arrays or tape variables)
    :return: result array or tape variable
    """
    if op not in _elementwise_ops:
        raise ValueError('unsupported elementwise operation "%s"' % op)
    fn, arity = _elementwise_ops[op]
    if len(args) != arity:
        raise ShapeError('elementwise "%s" takes %d operand(s), got %d' % (op, arity, len(args)))
    if arity == 2:
        a, b = (arg.shape if isinstance(arg, Var) else np.shape(arg) for arg in args)
        if a != b:
            raise ShapeError('elementwise "%s": shapes %s and %s differ' % (op, a, b))
    return fn(*args)


def value_of(x):
    """Returns the numeric value of a tape variable or array."""
    return x.value if isinstance(x, Var) else as_array(x)
