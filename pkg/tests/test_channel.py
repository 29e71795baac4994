import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_array_equal

from boolmac import ParameterError
from boolmac import ShapeError
from boolmac.channel import ERASED
from boolmac.channel import AnalogParams
from boolmac.channel import EveParams
from boolmac.channel import NoiseParams
from boolmac.channel import analog_superpose_detect
from boolmac.channel import apply_flip_noise
from boolmac.channel import dumps_outcome
from boolmac.channel import eavesdrop
from boolmac.channel import loads_outcome
from boolmac.channel import observed_bits
from boolmac.channel import observed_mask
from boolmac.channel import or_superpose

from conftest import support_row


def _bits(length):
    return arrays(np.uint8, length, elements=st.integers(0, 1))


def test_or_example():
    y = or_superpose([support_row(11, (1, 7, 10)), support_row(11, (0, 5, 10))])
    assert np.flatnonzero(y).tolist() == [0, 1, 5, 7, 10]


def test_or_empty():
    assert_array_equal(or_superpose([], 5), np.zeros(5, dtype=np.uint8))
    assert_array_equal(or_superpose(np.zeros((0, 4), dtype=np.uint8)), np.zeros(4, dtype=np.uint8))
    with pytest.raises(ShapeError):
        or_superpose([])


def test_or_length_mismatch():
    with pytest.raises(ShapeError):
        or_superpose([np.zeros(3), np.zeros(4)])
    with pytest.raises(ShapeError):
        or_superpose([np.zeros(3)], 4)


@given(_bits(16), _bits(16), _bits(16))
def test_or_semilattice(a, b, c):
    assert_array_equal(or_superpose([a, b]), or_superpose([b, a]))
    assert_array_equal(or_superpose([or_superpose([a, b]), c]), or_superpose([a, or_superpose([b, c])]))
    assert_array_equal(or_superpose([a, a]), a)
    assert_array_equal(or_superpose([a]), a)


@given(st.lists(_bits(12), min_size=1, max_size=6), st.integers(0, 2 ** 32))
def test_noiseless_analog_is_or(rows, seed):
    gains = np.linspace(0.5, 2.0, len(rows))
    analog = AnalogParams(noise_power=0.0, threshold=0.5)
    assert_array_equal(analog_superpose_detect(rows, gains, analog, seed), or_superpose(rows))


def test_analog_threshold_above_sum():
    rows = np.ones((3, 8), dtype=np.uint8)
    analog = AnalogParams(threshold=3.5)
    assert not analog_superpose_detect(rows, [1.0, 1.0, 1.0], analog, 0).any()


def test_analog_low_noise_agrees_with_or():
    rng = np.random.default_rng(1)
    rows = (rng.random((2, 100000)) < 0.3).astype(np.uint8)
    analog = AnalogParams(noise_power=0.01, threshold=0.5)
    y = analog_superpose_detect(rows, [1.0, 2.0], analog, 5)
    assert np.count_nonzero(y != or_superpose(rows)) < 10


def test_analog_deterministic_per_seed():
    rows = np.ones((1, 1000), dtype=np.uint8)
    analog = AnalogParams(noise_power=0.5, threshold=1.0)
    assert_array_equal(analog_superpose_detect(rows, [1.0], analog, 3),
                       analog_superpose_detect(rows, [1.0], analog, 3))


def test_analog_gain_count():
    with pytest.raises(ShapeError):
        analog_superpose_detect(np.ones((2, 4)), [1.0], AnalogParams(), 0)


@pytest.mark.parametrize('kw', [
    dict(noise_power=-1.0),
    dict(threshold=0.0),
    dict(tx_amplitude=0.0),
    dict(gains=(1.0, -1.0)),
])
def test_invalid_analog(kw):
    with pytest.raises(ParameterError):
        AnalogParams(**kw)


def test_gains_of():
    analog = AnalogParams(gains=(1.0, 0.5, 2.0))
    assert analog.gains_of([2, 0]).tolist() == [2.0, 1.0]
    assert AnalogParams().gains_of([4, 5]).tolist() == [1.0, 1.0]
    with pytest.raises(ParameterError):
        analog.gains_of([3])


@given(_bits(64), st.integers(0, 2 ** 32))
def test_flip_noise_identity(y, seed):
    assert_array_equal(apply_flip_noise(y, NoiseParams(), seed), y)


def test_flip_noise_extremes():
    y = np.array([0, 1, 0, 1, 1, 0], dtype=np.uint8)
    assert_array_equal(apply_flip_noise(y, NoiseParams(1.0, 0.0), 0), np.ones(6, dtype=np.uint8))
    assert_array_equal(apply_flip_noise(y, NoiseParams(0.0, 1.0), 0), np.zeros(6, dtype=np.uint8))
    assert_array_equal(apply_flip_noise(y, NoiseParams.symmetric(1.0), 0), 1 - y)


def test_noise_params_range():
    assert NoiseParams(0.7, 1.0) == (0.7, 1.0)
    with pytest.raises(ParameterError):
        NoiseParams(1.5)
    with pytest.raises(ParameterError):
        NoiseParams(0.0, -0.1)


def test_flip_noise_rate():
    y = np.ones(100000, dtype=np.uint8)
    flipped = 100000 - int(apply_flip_noise(y, NoiseParams(0.0, 0.05), 9).sum())
    assert abs(flipped - 5000) < 350


def test_invalid_noise():
    with pytest.raises(ParameterError):
        NoiseParams(1.5, 0.0)
    with pytest.raises(ParameterError):
        NoiseParams(0.0, -0.1)
    assert NoiseParams.symmetric(0.1) == NoiseParams(0.1, 0.1)
    assert NoiseParams().is_noiseless


def test_eavesdrop_extremes():
    y = np.array([1, 0, 1, 1, 0], dtype=np.uint8)
    assert_array_equal(eavesdrop(y, EveParams.from_delta(1.0), 1), y)
    assert (eavesdrop(y, EveParams.from_delta(0.0), 1) == ERASED).all()


def test_eavesdrop_keeps_observed_bits():
    rng = np.random.default_rng(2)
    y = (rng.random(100000) < 0.5).astype(np.uint8)
    z = eavesdrop(y, EveParams.from_delta(0.1), 4)
    mask = observed_mask(z)
    assert abs(int(mask.sum()) - 10000) < 475
    assert_array_equal(z[mask], y[mask])
    assert_array_equal(observed_bits(z)[mask], y[mask])
    assert not observed_bits(z)[~mask].any()


def test_eve_params():
    assert EveParams.from_delta(0.25).erase_prob == pytest.approx(0.75)
    assert EveParams(0.4).delta == pytest.approx(0.6)
    with pytest.raises(ParameterError):
        EveParams(1.2)


def test_outcome_text():
    z = np.array([1, ERASED, 0, 0, ERASED], dtype=np.int8)
    assert dumps_outcome(z) == '1?00?'
    assert_array_equal(loads_outcome('1?00?'), z)
    assert_array_equal(loads_outcome('0110\n'), np.array([0, 1, 1, 0], dtype=np.uint8))
    with pytest.raises(ParameterError):
        loads_outcome('01x')
