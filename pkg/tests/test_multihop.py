import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_array_equal

from boolmac import ParameterError
from boolmac import ShapeError
from boolmac.channel import or_superpose
from boolmac.codebook import CodeParams
from boolmac.codebook import Codebook
from boolmac.codebook import generate_codebook
from boolmac.decoders import INFEASIBLE
from boolmac.decoders import UNIQUE
from boolmac.decoders import ActiveSet
from boolmac.decoders import Entry
from boolmac.decoders import decode_coma
from boolmac.multihop import Node
from boolmac.multihop import RoutingTree
from boolmac.multihop import build_tree_codebooks
from boolmac.multihop import cluster_outcomes
from boolmac.multihop import draw_tree_activation
from boolmac.multihop import local_index
from boolmac.multihop import multihop_combine_forward
from boolmac.multihop import multihop_encode_decode_forward
from boolmac.multihop import run_multihop_round

CHAIN = """
# a chain of three hops
sink - sink 0,1
r1 sink r1 2,3
c1 r1 c1 4,5,6
"""

TWO_CLUSTERS = """
sink - sink
c0 sink c0 0,1,2,3,4,5,6,7,8,9
c1 sink c1 10,11,12,13,14,15,16,17,18,19
"""


def test_loads_chain():
    tree = RoutingTree.loads(CHAIN)
    assert tree.root == 'sink'
    assert tree.bottom_up() == ['c1', 'r1', 'sink']
    assert tree.depth('c1') == 2
    assert tree.children('sink') == ['r1']
    assert tree.subtree_sensors('r1') == [2, 3, 4, 5, 6]
    assert tree.sensors == list(range(7))
    assert tree.sensor_node()[5] == 'c1'
    assert local_index(tree, 'r1') == {2: 0, 3: 1, 4: 2, 5: 3, 6: 4}


def test_dumps_loads():
    tree = RoutingTree.loads(TWO_CLUSTERS)
    again = RoutingTree.loads(tree.dumps())
    assert again.nodes == tree.nodes
    assert 'sink - sink -' in tree.dumps()


@pytest.mark.parametrize('text', [
    'a - a\nb - b\n',
    'a - a\nb x b\n',
    'a - a\nb c b\nc b c\n',
    'a - a\na - a\n',
    'a - a 1\nb a b 1\n',
    'a\n',
    'a - a 1,x\n',
])
def test_invalid_trees(text):
    with pytest.raises(ParameterError):
        RoutingTree.loads(text)


@given(st.integers(1, 6), st.integers(1, 4), st.integers(1, 5), st.integers(0, 2 ** 32))
def test_random_tree(n_clusters, depth, size, seed):
    tree = RoutingTree.random(n_clusters, depth, size, seed)
    assert tree.sensors == list(range(n_clusters * size))
    for node_id, node in tree.nodes.items():
        if node.sensors:
            assert node_id.startswith('c')
            assert tree.depth(node_id) == depth
        else:
            assert tree.children(node_id)


def test_random_tree_args():
    with pytest.raises(ParameterError):
        RoutingTree.random(0, 2, 5, 0)


def test_combine_forward_is_flat_or():
    tree = RoutingTree.random(4, 3, 5, seed=1)
    codebook = generate_codebook(CodeParams(20, 4, n_messages=3, code_length=40, seed=2))
    active = draw_tree_activation(tree, 4, 3, seed=3)
    outcomes = cluster_outcomes(tree, active, codebook, seed=4, shared=True)
    flat = or_superpose(codebook.rows_bits(active.rows(codebook)), codebook.code_length)
    assert_array_equal(multihop_combine_forward(tree, outcomes, codebook.code_length), flat)


def test_combine_forward_chain():
    tree = RoutingTree.loads(CHAIN)
    outcomes = {
        'c1': np.array([1, 0, 0, 0], dtype=np.uint8),
        'r1': np.array([0, 1, 0, 0], dtype=np.uint8),
        'sink': np.array([0, 0, 0, 1], dtype=np.uint8),
    }
    assert multihop_combine_forward(tree, outcomes).tolist() == [1, 1, 0, 1]
    assert multihop_combine_forward(tree, {}, 4).tolist() == [0, 0, 0, 0]


def test_combine_forward_errors():
    tree = RoutingTree.loads(CHAIN)
    with pytest.raises(ShapeError):
        multihop_combine_forward(tree, {'c1': np.zeros(4), 'r1': np.zeros(5)})
    with pytest.raises(ShapeError):
        multihop_combine_forward(tree, {})
    with pytest.raises(ParameterError):
        multihop_combine_forward(tree, {'nowhere': np.zeros(4)})


def test_build_tree_codebooks():
    tree = RoutingTree.loads(TWO_CLUSTERS)
    codebooks = build_tree_codebooks(tree, 2, 2, seed=0, overrides={'c1': 17})
    assert sorted(codebooks) == ['c0', 'c1', 'sink']
    assert codebooks['sink'].params.n_sensors == 20
    assert codebooks['c0'].params.n_sensors == 10
    assert codebooks['c1'].code_length == 17
    assert codebooks['c0'].code_length == 8
    assert codebooks['sink'].code_length == 11
    assert codebooks['c0'] != codebooks['c1']


def test_build_tree_codebooks_shared_ref():
    tree = RoutingTree.loads('sink - sink\nc0 sink x 0,1\nc1 sink x 2,3,4\n')
    with pytest.raises(ParameterError):
        build_tree_codebooks(tree, 1, 1, seed=0)


def test_encode_decode_two_clusters():
    tree = RoutingTree.loads(TWO_CLUSTERS)
    codebooks = build_tree_codebooks(tree, 2, 2, seed=5, scale=6)
    successes = combined = 0
    for trial in range(20):
        active = draw_tree_activation(tree, 2, 2, seed=trial)
        outcome = run_multihop_round(tree, codebooks['sink'], codebooks, active, seed=trial)
        successes += outcome.encode_decode_result.matches(active)
        combined += outcome.combine_result.matches(active)
        assert set(outcome.encode_decode_result.diagnostics['hop_status']) == {'c0', 'c1', 'sink'}
    assert successes >= 18
    assert combined >= 18


def test_encode_decode_agrees_with_combine():
    tree = RoutingTree.random(4, 3, 5, seed=11)
    codebooks = build_tree_codebooks(tree, 3, 2, seed=12, scale=6)
    agreed = 0
    for trial in range(40):
        active = draw_tree_activation(tree, 3, 2, seed=100 + trial)
        outcome = run_multihop_round(tree, codebooks['sink'], codebooks, active, seed=trial)
        hops = outcome.encode_decode_result.diagnostics['hop_status']
        if set(hops.values()) != {UNIQUE} or not outcome.combine_result.is_unique:
            continue
        agreed += 1
        assert outcome.encode_decode_result.estimate.pairs() == outcome.combine_result.estimate.pairs()
        assert outcome.combine_result.estimate.pairs() == active.pairs()
    assert agreed >= 36


def test_undersized_relays_hurt_only_encode_decode():
    tree = RoutingTree.loads(TWO_CLUSTERS)
    codebooks = build_tree_codebooks(tree, 2, 2, seed=13, scale=6, overrides={'c0': 3, 'c1': 3})
    assert codebooks['sink'].code_length >= 30
    relayed = combined = 0
    for trial in range(40):
        active = draw_tree_activation(tree, 2, 2, seed=200 + trial)
        outcome = run_multihop_round(tree, codebooks['sink'], codebooks, active, seed=trial)
        relayed += outcome.encode_decode_result.matches(active)
        combined += outcome.combine_result.matches(active)
    assert combined >= 36
    assert combined - relayed >= 20


def test_encode_decode_single_hop_is_plain_decoding():
    tree = RoutingTree.loads('sink - sink 0,1,2,3,4,5,6,7,8,9\n')
    codebooks = build_tree_codebooks(tree, 2, 3, seed=1, scale=3)
    active = ActiveSet([(2, 1), (7, 0)])
    outcomes = cluster_outcomes(tree, active, codebooks, seed=2)
    result = multihop_encode_decode_forward(tree, codebooks, outcomes, seed=3)
    plain = decode_coma(codebooks['sink'], outcomes['sink'])
    assert result.estimate == plain.estimate
    assert result.status == plain.status


def test_infeasible_relay_forwards_nothing():
    tree = RoutingTree.loads(TWO_CLUSTERS)
    codebooks = build_tree_codebooks(tree, 2, 2, seed=7, scale=6)
    active = ActiveSet([Entry(1, 0), Entry(4, 1), Entry(15, 1)])
    outcomes = cluster_outcomes(tree, active, codebooks, seed=8)
    result = multihop_encode_decode_forward(tree, codebooks, outcomes, seed=9, relay_decoder={'type': 'ml', 'k': 1})
    assert result.diagnostics['hop_status']['c0'] == INFEASIBLE
    assert result.status == INFEASIBLE
    assert not result.estimate.sensors() & {1, 4}


def test_codebook_size_checked():
    tree = RoutingTree.loads(TWO_CLUSTERS)
    codebooks = build_tree_codebooks(tree, 2, 2, seed=0)
    codebooks['c0'] = Codebook(codebooks['sink'].params, codebooks['sink'].packed)
    with pytest.raises(ParameterError):
        cluster_outcomes(tree, ActiveSet(), codebooks, seed=0)
    del codebooks['c0']
    with pytest.raises(ParameterError):
        cluster_outcomes(tree, ActiveSet(), codebooks, seed=0)


def test_unknown_sensor():
    tree = RoutingTree.loads(CHAIN)
    codebook = generate_codebook(CodeParams(7, 2, code_length=10))
    with pytest.raises(ParameterError):
        cluster_outcomes(tree, ActiveSet([(9, 0)]), codebook, seed=0, shared=True)


def test_draw_tree_activation():
    tree = RoutingTree.loads(CHAIN)
    active = draw_tree_activation(tree, 10, 4, seed=0)
    assert len(active) == 7
    assert active.sensors() == set(range(7))
    assert draw_tree_activation(tree, 3, 4, seed=1) == draw_tree_activation(tree, 3, 4, seed=1)


def test_node_tuple():
    node = Node('a', None, 'a', (3, 1))
    tree = RoutingTree([node])
    assert tree.nodes['a'].sensors == (1, 3)
