""" Multi-hop collection over a given routing tree

Sensors are attached to tree nodes (cluster heads). A node's cluster
transmits to it; relays forward towards the root, the sink. Two relay
schemes are supported:

* combine and forward: every relay ORs what it hears and forwards it, one
  codebook is shared by the whole tree.
* encode-decode, combine and forward: every relay decodes with its own
  codebook, re-encodes the decoded messages with its parent's codebook and
  forwards the OR.

Codebooks of the second scheme index sensors locally: the sensors of a
node's subtree, sorted, are rows 0, 1, ... of that node's codebook.
"""
import logging
from collections import namedtuple

import numpy as np

from . import derive_seed
from . import seed_to_int
from . import ParameterError
from . import ShapeError
from .bounds import BoundParams
from .bounds import bound_T_lemma1
from .channel import or_superpose
from .codebook import CodeParams
from .codebook import generate_codebook
from .decoders import AMBIGUOUS
from .decoders import INFEASIBLE
from .decoders import UNIQUE
from .decoders import ActiveSet
from .decoders import DecodeResult
from .decoders import Entry
from .decoders import create_decoder

log = logging.getLogger(__name__)

_NONE = '-'

_SEVERITY = {UNIQUE: 0, AMBIGUOUS: 1, INFEASIBLE: 2}

# seed sub-streams
_CLUSTER = 0
_RELAY = 1
_ACTIVATION = 2


Node = namedtuple('Node', ['id', 'parent', 'codebook_ref', 'sensors'])


class RoutingTree(object):
    """A rooted tree of relays.

    :param nodes: iterable of :class:`Node`; exactly one has ``parent`` None
    """

    def __init__(self, nodes):
        self.nodes = {}
        for node in nodes:
            node = Node(str(node.id), None if node.parent is None else str(node.parent), node.codebook_ref,
                        tuple(sorted(int(s) for s in node.sensors)))
            if node.id in self.nodes:
                raise ParameterError('duplicate_node: %s' % node.id)
            self.nodes[node.id] = node
        self._children = dict((i, []) for i in self.nodes)
        roots = []
        for node in self.nodes.values():
            if node.parent is None:
                roots.append(node.id)
            elif node.parent not in self.nodes:
                raise ParameterError('unknown_parent: %s -> %s' % (node.id, node.parent))
            else:
                self._children[node.parent].append(node.id)
        if len(roots) != 1:
            raise ParameterError('tree_needs_single_root: %d roots' % len(roots))
        self.root = roots[0]
        for children in self._children.values():
            children.sort()
        self._order = self._bottom_up()
        if len(self._order) != len(self.nodes):
            raise ParameterError('tree_has_cycle_or_unreachable_node')
        seen = set()
        for node in self.nodes.values():
            for s in node.sensors:
                if s in seen:
                    raise ParameterError('sensor_attached_twice: %d' % s)
                seen.add(s)

    def _bottom_up(self):
        order = []
        stack = [(self.root, False)]
        while stack:
            node_id, expanded = stack.pop()
            if expanded:
                order.append(node_id)
                continue
            stack.append((node_id, True))
            for child in reversed(self._children[node_id]):
                stack.append((child, False))
        return order

    def children(self, node_id):
        return list(self._children[node_id])

    def bottom_up(self):
        """Node ids, every node after all of its descendants"""
        return list(self._order)

    def depth(self, node_id):
        depth = 0
        while self.nodes[node_id].parent is not None:
            node_id = self.nodes[node_id].parent
            depth += 1
        return depth

    def subtree_sensors(self, node_id):
        """Sorted sensors attached anywhere below ``node_id``, itself included"""
        sensors = list(self.nodes[node_id].sensors)
        for child in self._children[node_id]:
            sensors.extend(self.subtree_sensors(child))
        return sorted(sensors)

    @property
    def sensors(self):
        return self.subtree_sensors(self.root)

    def sensor_node(self):
        """dict sensor -> id of the node it is attached to"""
        return dict((s, node.id) for node in self.nodes.values() for s in node.sensors)

    def dumps(self):
        """One line per node: ``id parent codebook_ref sensors``, ``-`` for
        none and sensors comma separated.
        """
        lines = []
        for node_id in reversed(self._order):
            node = self.nodes[node_id]
            lines.append(' '.join([
                node.id,
                node.parent if node.parent is not None else _NONE,
                node.codebook_ref or _NONE,
                ','.join(str(s) for s in node.sensors) or _NONE,
            ]))
        return '\n'.join(lines) + '\n'

    @classmethod
    def loads(cls, text):
        nodes = []
        for number, line in enumerate(text.splitlines(), 1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            if len(fields) not in (3, 4):
                raise ParameterError('bad_tree_line: %d' % number)
            if len(fields) == 3:
                fields.append(_NONE)
            node_id, parent, ref, sensors = fields
            try:
                sensors = [] if sensors == _NONE else [int(s) for s in sensors.split(',')]
            except ValueError:
                raise ParameterError('bad_sensor_list: %d' % number)
            nodes.append(Node(node_id, None if parent == _NONE else parent, None if ref == _NONE else ref,
                              sensors))
        return cls(nodes)

    @classmethod
    def random(cls, n_clusters, depth, sensors_per_cluster, seed):
        """A random tree: the sink, ``depth - 1`` levels of relays and the
        clusters hanging from relays of the last level. Every relay has its
        own codebook reference and sensors are numbered cluster by cluster.
        """
        if n_clusters < 1 or depth < 1 or sensors_per_cluster < 1:
            raise ParameterError('random_tree_args_not_positive')
        rng = np.random.default_rng(seed)
        nodes = [Node('sink', None, 'sink', ())]
        level = ['sink']
        for d in range(1, depth):
            width = int(rng.integers(len(level), max(len(level), n_clusters) + 1))
            names = ['r%d.%d' % (d, i) for i in range(width)]
            for i, name in enumerate(names):
                parent = level[i] if i < len(level) else level[int(rng.integers(0, len(level)))]
                nodes.append(Node(name, parent, name, ()))
            level = names
        sensor = 0
        for c in range(n_clusters):
            parent = level[c] if c < len(level) else level[int(rng.integers(0, len(level)))]
            members = tuple(range(sensor, sensor + sensors_per_cluster))
            sensor += sensors_per_cluster
            nodes.append(Node('c%d' % c, parent, 'c%d' % c, members))
        return cls(nodes)

    def __repr__(self):
        return 'RoutingTree(%d nodes, root=%s)' % (len(self.nodes), self.root)


def multihop_combine_forward(tree, leaf_outcomes, code_length=None):
    """Root vector when every relay ORs its inputs and forwards.

    :param leaf_outcomes: dict node id -> outcome vector heard from the
                          node's own cluster; missing nodes heard nothing
    :returns: the vector reaching the sink
    """
    lengths = set(np.asarray(y).shape[0] for y in leaf_outcomes.values())
    if code_length is not None:
        lengths.add(code_length)
    if len(lengths) > 1:
        raise ShapeError('leaf_outcome_length_mismatch: %s' % sorted(lengths))
    if not lengths:
        raise ShapeError('code_length_required_without_outcomes')
    length = lengths.pop()
    unknown = set(leaf_outcomes) - set(tree.nodes)
    if unknown:
        raise ParameterError('outcome_for_unknown_node: %s' % sorted(unknown))
    forwarded = {}
    for node_id in tree.bottom_up():
        inputs = [forwarded[c] for c in tree.children(node_id)]
        if node_id in leaf_outcomes:
            inputs.append(np.asarray(leaf_outcomes[node_id], dtype=np.uint8))
        forwarded[node_id] = or_superpose(inputs, length)
    return forwarded[tree.root]


def local_index(tree, node_id):
    """dict global sensor -> row block of the node's codebook"""
    return dict((s, i) for i, s in enumerate(tree.subtree_sensors(node_id)))


def _codebook_of(tree, codebooks, node_id):
    ref = tree.nodes[node_id].codebook_ref
    if ref not in codebooks:
        raise ParameterError('missing_codebook: %s' % ref)
    codebook = codebooks[ref]
    needed = len(tree.subtree_sensors(node_id))
    if codebook.params.n_sensors != needed:
        raise ParameterError('codebook_size_mismatch: %s has %d sensors, subtree %d'
                             % (ref, codebook.params.n_sensors, needed))
    return codebook


def _encode(codebook, index, entries, rng):
    """OR of the rows of ``entries`` (global sensors) in ``codebook``"""
    f = codebook.params.n_subcodewords
    rows = [codebook.row_index(index[e.sensor], e.message, int(rng.integers(0, f)) if f > 1 else 0)
            for e in sorted(entries)]
    return or_superpose(codebook.rows_bits(rows), codebook.code_length)


def cluster_outcomes(tree, active, codebooks, seed, shared=False):
    """What every cluster head hears from its own sensors.

    :param active: the :class:`~boolmac.decoders.ActiveSet` of the whole tree
    :param codebooks: one shared codebook when ``shared``, else dict
                      codebook ref -> codebook indexed by subtree
    :returns: dict node id -> outcome vector, for every node with sensors
    """
    attached = tree.sensor_node()
    by_node = {}
    for e in active:
        if e.sensor not in attached:
            raise ParameterError('sensor_not_in_tree: %d' % e.sensor)
        by_node.setdefault(attached[e.sensor], []).append(Entry(e.sensor, e.message))
    outcomes = {}
    for i, node_id in enumerate(sorted(tree.nodes)):
        if not tree.nodes[node_id].sensors:
            continue
        if shared:
            codebook = codebooks
            index = dict((s, s) for s in tree.nodes[node_id].sensors)
        else:
            codebook = _codebook_of(tree, codebooks, node_id)
            index = local_index(tree, node_id)
        rng = np.random.default_rng(derive_seed(seed, _CLUSTER, i))
        outcomes[node_id] = _encode(codebook, index, by_node.get(node_id, ()), rng)
    return outcomes


def _worst(statuses):
    return max(statuses, key=_SEVERITY.get)


def multihop_encode_decode_forward(tree, codebooks, leaf_outcomes, seed, relay_decoder=None, sink_decoder=None):
    """Root decision when every relay decodes, re-encodes and forwards.

    :param codebooks: dict codebook ref -> codebook indexed by subtree
    :param leaf_outcomes: dict node id -> vector heard from the node's
                          cluster, in the node's own codebook
    :param relay_decoder: decoder config of the relays, CoMa by default
    :param sink_decoder: decoder config of the sink, CoMa by default
    :returns: :class:`~boolmac.decoders.DecodeResult` with global sensors; the
              status is the worst status of any hop
    """
    relay_decoder = dict(relay_decoder or {'type': 'coma'})
    sink_decoder = dict(sink_decoder or {'type': 'coma'})
    forwarded = {}
    statuses = {}
    result = None
    for i, node_id in enumerate(tree.bottom_up()):
        codebook = _codebook_of(tree, codebooks, node_id)
        inputs = [forwarded[c] for c in tree.children(node_id)]
        if node_id in leaf_outcomes:
            y = np.asarray(leaf_outcomes[node_id], dtype=np.uint8)
            if y.shape[0] != codebook.code_length:
                raise ShapeError('leaf_outcome_length_mismatch: %s' % node_id)
            inputs.append(y)
        for y in inputs:
            if y.shape[0] != codebook.code_length:
                raise ShapeError('forwarded_length_mismatch: %s' % node_id)
        y = or_superpose(inputs, codebook.code_length)
        is_root = node_id == tree.root
        decoder = create_decoder(sink_decoder if is_root else relay_decoder, codebook.params.k_active)
        result = decoder.decode(codebook, y)
        sensors = tree.subtree_sensors(node_id)
        decoded = [Entry(sensors[e.sensor], e.message, e.subcodeword) for e in result.estimate]
        statuses[node_id] = result.status
        log.debug('node %s decoded %d entries, %s', node_id, len(decoded), result.status)
        if is_root:
            result = DecodeResult(decoded, dict((sensors[s], n) for s, n in result.candidates_surviving.items()),
                                  result.status, result.diagnostics)
            break
        parent = tree.nodes[node_id].parent
        parent_codebook = _codebook_of(tree, codebooks, parent)
        if result.status == INFEASIBLE:
            decoded = []
        rng = np.random.default_rng(derive_seed(seed, _RELAY, i))
        forwarded[node_id] = _encode(parent_codebook, local_index(tree, parent), decoded, rng)
    status = _worst(statuses.values())
    diagnostics = dict(result.diagnostics, hop_status=statuses)
    return DecodeResult(result.estimate, result.candidates_surviving, status, diagnostics)


def build_tree_codebooks(tree, k_active, n_messages, seed, scale=1.0, overrides=None, epsilon=0.0):
    """One codebook per codebook reference, sized for the subtree it serves.

    T of a node is ``scale`` times the noiseless length bound for its
    subtree with K = min(k_active, subtree size).

    :param overrides: dict codebook ref -> code length
    """
    overrides = overrides or {}
    codebooks = {}
    sizes = {}
    for node_id in tree.bottom_up():
        node = tree.nodes[node_id]
        n = len(tree.subtree_sensors(node_id))
        if node.codebook_ref in sizes:
            if sizes[node.codebook_ref] != n:
                raise ParameterError('shared_codebook_ref_with_different_subtrees: %s' % node.codebook_ref)
            continue
        if n == 0:
            raise ParameterError('node_without_sensors: %s' % node_id)
        sizes[node.codebook_ref] = n
        k = min(k_active, n)
        length = overrides.get(node.codebook_ref)
        if length is None:
            length = max(1, int(round(scale * bound_T_lemma1(BoundParams(n, k, n_messages, epsilon)))))
        params = CodeParams(n, k, n_messages, length, seed=seed_to_int(derive_seed(seed, len(codebooks))))
        codebooks[node.codebook_ref] = generate_codebook(params)
    return codebooks


MultihopOutcome = namedtuple('MultihopOutcome', ['truth', 'combine_y', 'combine_result', 'encode_decode_result'])


def draw_tree_activation(tree, k_active, n_messages, seed):
    rng = np.random.default_rng(derive_seed(seed, _ACTIVATION))
    sensors = tree.sensors
    count = min(k_active, len(sensors))
    chosen = rng.choice(sensors, size=count, replace=False)
    messages = rng.integers(0, n_messages, size=count)
    return ActiveSet(Entry(int(s), int(m)) for s, m in zip(chosen, messages))


def run_multihop_round(tree, sink_codebook, codebooks, active, seed, decoder=None, relay_decoder=None):
    """Both schemes on the same traffic.

    :param sink_codebook: the codebook shared by the tree under combine and
                          forward, indexed by global sensor
    :param codebooks: per-node codebooks of the encode-decode scheme, or None
                      to skip it
    :rtype: MultihopOutcome
    """
    decoder = dict(decoder or {'type': 'coma'})
    shared = cluster_outcomes(tree, active, sink_codebook, derive_seed(seed, 0), shared=True)
    combine_y = multihop_combine_forward(tree, shared, sink_codebook.code_length)
    combine_result = create_decoder(decoder, sink_codebook.params.k_active).decode(sink_codebook, combine_y)
    encode_decode_result = None
    if codebooks is not None:
        local = cluster_outcomes(tree, active, codebooks, derive_seed(seed, 1))
        encode_decode_result = multihop_encode_decode_forward(tree, codebooks, local, derive_seed(seed, 2),
                                                              relay_decoder, decoder)
    return MultihopOutcome(active, combine_y, combine_result, encode_decode_result)
