""" Full scale Monte Carlo runs, deselected by default; run with ``pytest -m slow``
"""
import numpy as np
import pytest
from numpy.testing import assert_array_equal

from boolmac.bounds import BoundParams
from boolmac.bounds import ml_rival_count
from boolmac.channel import or_superpose
from boolmac.codebook import CodeParams
from boolmac.codebook import generate_codebook
from boolmac.decoders import ActiveSet
from boolmac.decoders import Entry
from boolmac.decoders.coma import coma_survivors
from boolmac.multihop import RoutingTree
from boolmac.multihop import build_tree_codebooks
from boolmac.multihop import cluster_outcomes
from boolmac.multihop import draw_tree_activation
from boolmac.multihop import multihop_combine_forward
from boolmac.multihop import run_multihop_round
from boolmac.protocol import SessionConfig
from boolmac.protocol import run_dissemination_round
from boolmac.experiments import run_cdf_experiment
from boolmac.experiments import run_leakage_experiment
from boolmac.experiments import run_secure_cdf_experiment
from boolmac.experiments import two_proportion_test

pytestmark = pytest.mark.slow

N, K, C = 500, 3, 10
TRIALS = 4000


def _successes(row):
    return int(round(row['success_rate'] * row['trials']))


def _assert_rising(rows):
    for shorter, longer in zip(rows, rows[1:]):
        z, _ = two_proportion_test(_successes(longer), longer['trials'], _successes(shorter), shorter['trials'])
        assert z > -1.96


def _assert_above_rival_bound(rows, bp):
    for row in rows:
        floor = 1.0 - ml_rival_count(bp, row['code_length'], row['n_subcodewords']) - row['capacity_rate']
        assert row['success_high'] >= floor


def test_coma_threshold():
    result = run_cdf_experiment(N, K, C, {'type': 'coma'}, (120, 149), trials=TRIALS, seed=11, workers=4)
    low, high = result.rows
    assert low['success_rate'] >= 0.95
    assert high['success_rate'] >= 0.999


def test_ml_threshold():
    # exact-K ML stays ambiguous while a rival row set of the same size
    # covers y; 1 - ml_rival_count is the floor of the measured curve
    lengths = (40, 45, 51, 80)
    result = run_cdf_experiment(N, K, C, {'type': 'ml', 'prefilter': True}, lengths, trials=TRIALS, seed=12,
                                workers=4)
    rows = result.rows
    assert [r['code_length'] for r in rows] == list(lengths)
    _assert_rising(rows)
    _assert_above_rival_bound(rows, BoundParams(N, K, C))
    assert rows[2]['success_rate'] >= 0.88
    assert rows[-1]['success_rate'] >= 0.999
    assert all(r['capacity_rate'] == 0.0 for r in rows)


def test_secure_ml_threshold():
    lengths = (55, 66, 90)
    result = run_secure_cdf_experiment(N, K, C, 0.1, {'type': 'ml', 'prefilter': True}, lengths, trials=TRIALS,
                                       seed=17, workers=4)
    rows = result.rows
    assert [r['n_subcodewords'] for r in rows] == [4, 8, 8]
    _assert_rising(rows)
    _assert_above_rival_bound(rows, BoundParams(N, K, C, delta=0.1))
    assert rows[-1]['success_rate'] >= 0.999


def test_secure_coma_threshold():
    result = run_secure_cdf_experiment(N, K, C, 0.1, {'type': 'coma'}, (192,), trials=TRIALS, seed=13, workers=4)
    row = result.rows[0]
    assert row['n_subcodewords'] == 128
    assert row['success_rate'] >= 0.999


def test_eavesdropper_leakage():
    row = run_leakage_experiment(N, K, C, 0.1, 160, trials=TRIALS, seed=14, sink_decoder='ml', workers=4).rows[0]
    assert row['n_subcodewords'] == 64
    assert row['eve_exact_rate'] <= 0.01
    assert row['sink_success_rate'] >= 0.999


def test_coma_never_drops_a_sent_row():
    trials = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(5, 200))
        k = int(rng.integers(1, min(n, 8) + 1))
        c = int(rng.integers(1, 6))
        f = int(rng.choice([1, 2, 4]))
        codebook = generate_codebook(CodeParams(n, k, c, int(rng.integers(5, 120)), f, seed=seed))
        for _ in range(100):
            sensors = rng.choice(n, size=k, replace=False)
            truth = ActiveSet(Entry(int(s), int(rng.integers(0, c)), int(rng.integers(0, f))) for s in sensors)
            rows = truth.rows(codebook)
            y = or_superpose(codebook.rows_bits(rows), codebook.code_length)
            assert set(rows) <= set(coma_survivors(codebook, y).tolist())
            trials += 1
    assert trials == 10 ** 4


def test_combine_forward_equals_flat_or():
    for trial in range(500):
        rng = np.random.default_rng(trial)
        tree = RoutingTree.random(int(rng.integers(1, 9)), int(rng.integers(1, 5)), int(rng.integers(1, 11)), trial)
        n = len(tree.sensors)
        k = min(4, n)
        codebook = generate_codebook(CodeParams(n, k, n_messages=3, code_length=60, seed=trial))
        active = draw_tree_activation(tree, k, 3, seed=trial)
        outcomes = cluster_outcomes(tree, active, codebook, seed=trial, shared=True)
        flat = or_superpose(codebook.rows_bits(active.rows(codebook)), codebook.code_length)
        assert_array_equal(multihop_combine_forward(tree, outcomes, codebook.code_length), flat)


def test_multihop_three_levels():
    tree = RoutingTree.random(8, 3, 10, seed=18)
    codebooks = build_tree_codebooks(tree, 4, 1, seed=19, scale=6)
    relayed = combined = 0
    for trial in range(500):
        active = draw_tree_activation(tree, 4, 1, seed=1000 + trial)
        outcome = run_multihop_round(tree, codebooks['sink'], codebooks, active, seed=trial)
        relayed += outcome.encode_decode_result.matches(active)
        combined += outcome.combine_result.matches(active)
    assert relayed >= 495
    assert combined >= 495


def test_dissemination_privacy():
    params = CodeParams(100, 3, n_messages=4, code_length=120, seed=15)
    cfg = SessionConfig(params)
    rng = np.random.default_rng(16)
    exact = clean = 0
    for trial in range(1000):
        sensors = rng.choice(100, size=3, replace=False).tolist()
        addressees = list(zip(sensors, rng.integers(0, 4, size=3).tolist()))
        results = run_dissemination_round(cfg, addressees, trial)
        exact += all(results[s].estimate.pairs() == {(s, m)} for s, m in addressees)
        clean += all(len(r.estimate) == 0 for s, r in results.items() if s not in sensors)
    assert exact >= 990
    assert clean >= 990
