"""Methods for graphing recorded computations and model layouts."""

import collections
from graphviz import Digraph
from ..ndcore import Tape
from ..network import Model


def graph(obj, engine='dot'):
    """Generates and returns a graphviz Digraph.

    :param obj: a Tape or a Model
    :param engine: text name for the graphviz engine (dot, neato, circo, etc.)
    :return: a Graph object that can be rendered directly by jupyter notebook or qtconsole
    """
    if isinstance(obj, Tape):
        return graph_tape(obj, engine=engine)
    elif isinstance(obj, Model):
        return graph_model(obj, engine=engine)

    raise TypeError('Objects of type {typ} are not supported'.format(typ=type(obj).__name__))


def _shape(value):
    return 'x'.join(str(size) for size in value.shape) or 'scalar'


def graph_tape(tape, engine='dot'):
    """Generates and returns a graphviz Digraph of every node recorded on a tape.

    Parameter leaves are labelled by their store names, constants are drawn as plain ovals, and computed nodes by
    their op name and value shape.

    :param tape: a Tape
    :param engine: text name for the graphviz engine
    :return: a Digraph
    """
    dot = Digraph(name='Tape', engine=engine, node_attr={'shape': 'box', 'fontsize': '10'})
    dot.attr('graph', rankdir='LR')

    for index, node in enumerate(tape.nodes):
        name = tape.parameter_name(index)
        if name is not None:
            dot.node(str(index), '%s\n%s' % (name, _shape(node.value)), shape='box', style='filled',
                     fillcolor='lightgrey')
        elif node.vjp is None:
            dot.node(str(index), _shape(node.value), shape='oval')
        else:
            dot.node(str(index), '%s\n%s' % (node.op, _shape(node.value)))

    for index, node in enumerate(tape.nodes):
        for source in node.inputs:
            dot.edge(str(source), str(index))

    for index in tape.outputs:
        dot.node(str(index), peripheries='2')

    return dot


def graph_model(model, engine='dot'):
    """Generates and returns a graphviz Digraph of a model's stages and their parameter groups.

    :param model: a Model
    :param engine: text name for the graphviz engine
    :return: a Digraph
    """
    dot = Digraph(name=model.variant.label, engine=engine, node_attr={'shape': 'box'})
    dot.attr('graph', rankdir='LR')

    # group parameters by stage, e.g. 'enc.attn' -> ['ve', 'We', 'Ue']
    groups = collections.OrderedDict()
    for name in model.store:
        group, _, leaf = name.rpartition('.')
        groups.setdefault(group, []).append('%s %s' % (leaf, 'x'.join(str(s) for s in model.store.shape(name))))

    stages = collections.OrderedDict()
    for group in groups:
        stages.setdefault(group.split('.', 1)[0], []).append(group)

    for stage, members in stages.items():
        with dot.subgraph(name='cluster_%s' % stage) as subgraph:
            subgraph.attr(label=stage)
            for group in members:
                subgraph.node(group, '%s\n%s' % (group, '\n'.join(groups[group])))

    # the data flows through the groups in the order they are laid out
    names = list(groups)
    for tail, head in zip(names, names[1:]):
        dot.edge(tail, head)

    return dot
