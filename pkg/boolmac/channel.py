""" The multiple access channel as seen by the sink and by an eavesdropper

Outcome vectors are 1-D numpy arrays: uint8 over {0, 1} for the sink, int8
over {0, 1, ERASED} for the eavesdropper.
"""
from collections import namedtuple

import numpy as np

from . import ParameterError
from . import ShapeError

ERASED = -1

_ERASED_CHAR = '?'


_AnalogParams = namedtuple('_AnalogParams', ['noise_power', 'threshold', 'tx_amplitude', 'gains'])


class AnalogParams(_AnalogParams):
    """Energy detection front end of the sink.

    :param noise_power: variance of the additive Gaussian noise on the per
                        minislot decision statistic
    :param threshold: power threshold of the hard decision
    :param tx_amplitude: energy of a transmitted one
    :param gains: optional per-sensor fades, fixed for the whole session
    """
    __slots__ = ()

    def __new__(cls, noise_power=0.0, threshold=0.5, tx_amplitude=1.0, gains=None):
        if gains is not None:
            gains = tuple(float(g) for g in gains)
            if any(g <= 0 for g in gains):
                raise ParameterError('gain_not_positive')
        self = _AnalogParams.__new__(cls, float(noise_power), float(threshold), float(tx_amplitude), gains)
        if self.noise_power < 0:
            raise ParameterError('noise_power_negative: %r' % self.noise_power)
        if self.threshold <= 0:
            raise ParameterError('threshold_not_positive: %r' % self.threshold)
        if self.tx_amplitude <= 0:
            raise ParameterError('tx_amplitude_not_positive: %r' % self.tx_amplitude)
        return self

    def gains_of(self, sensors):
        """Fades of the given sensors, 1.0 when no gains were configured"""
        if self.gains is None:
            return np.ones(len(sensors))
        try:
            return np.array([self.gains[s] for s in sensors], dtype=float)
        except IndexError:
            raise ParameterError('missing_gain_for_sensor')


_NoiseParams = namedtuple('_NoiseParams', ['q_false_pos', 'q_false_neg'])


class NoiseParams(_NoiseParams):
    """Flip noise of the energy detector.

    :param q_false_pos: probability an idle minislot reads busy
    :param q_false_neg: probability a busy minislot reads idle
    """
    __slots__ = ()

    def __new__(cls, q_false_pos=0.0, q_false_neg=0.0):
        self = _NoiseParams.__new__(cls, float(q_false_pos), float(q_false_neg))
        for q in self:
            # any probability, q >= 0.5 included, so a detector that always
            # misreads can be modelled; the noisy decoders still take q < 0.5
            if not 0.0 <= q <= 1.0:
                raise ParameterError('flip_probability_out_of_range: %r' % q)
        return self

    @classmethod
    def symmetric(cls, q):
        return cls(q, q)

    @property
    def is_noiseless(self):
        return self.q_false_pos == 0 and self.q_false_neg == 0


_EveParams = namedtuple('_EveParams', ['erase_prob'])


class EveParams(_EveParams):
    """Erasure channel of the eavesdropper. A minislot is observed with
    probability ``delta = 1 - erase_prob``.
    """
    __slots__ = ()

    def __new__(cls, erase_prob):
        self = _EveParams.__new__(cls, float(erase_prob))
        if not 0.0 <= self.erase_prob <= 1.0:
            raise ParameterError('erase_prob_out_of_range: %r' % self.erase_prob)
        return self

    @classmethod
    def from_delta(cls, delta):
        return cls(1.0 - float(delta))

    @property
    def delta(self):
        return 1.0 - self.erase_prob


def _as_rows(rows, code_length):
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        matrix = rows
    else:
        rows = [np.asarray(r) for r in rows]
        lengths = set(r.shape[0] for r in rows)
        if len(lengths) > 1:
            raise ShapeError('row_length_mismatch: %s' % sorted(lengths))
        if not rows:
            if code_length is None:
                raise ShapeError('code_length_required_for_empty_set')
            return np.zeros((0, code_length), dtype=np.uint8)
        matrix = np.vstack(rows)
    if code_length is not None and matrix.shape[1] != code_length:
        raise ShapeError('row_length_mismatch: %d != %d' % (matrix.shape[1], code_length))
    return matrix.astype(np.uint8, copy=False)


def or_superpose(rows, code_length=None):
    """Position-wise OR of the transmitted rows.

    :param rows: a 2-D 0/1 array or a sequence of equal length 0/1 vectors
    :param code_length: T, required when ``rows`` is an empty sequence
    :returns: the outcome vector, all zero for an empty set
    """
    matrix = _as_rows(rows, code_length)
    if matrix.shape[0] == 0:
        return np.zeros(matrix.shape[1], dtype=np.uint8)
    return np.bitwise_or.reduce(matrix, axis=0)


def _rng(seed):
    return np.random.default_rng(seed)


def analog_superpose_detect(rows, gains, analog, seed, code_length=None):
    """Superpose faded transmissions plus Gaussian noise and threshold each
    minislot.

    :param rows: the transmitted 0/1 rows
    :param gains: one fade per row
    :param analog: :class:`AnalogParams`
    :param seed: anything :func:`numpy.random.default_rng` accepts
    """
    matrix = _as_rows(rows, code_length)
    gains = np.asarray(gains, dtype=float).reshape(-1)
    if gains.shape[0] != matrix.shape[0]:
        raise ShapeError('gain_count_mismatch: %d != %d' % (gains.shape[0], matrix.shape[0]))
    statistic = analog.tx_amplitude * (gains @ matrix.astype(float))
    if analog.noise_power > 0:
        statistic = statistic + _rng(seed).normal(0.0, np.sqrt(analog.noise_power), matrix.shape[1])
    return (statistic >= analog.threshold).astype(np.uint8)


def apply_flip_noise(y, noise, seed):
    """Flip each idle minislot with ``q_false_pos`` and each busy one with
    ``q_false_neg``, independently.
    """
    y = np.asarray(y, dtype=np.uint8)
    if noise.is_noiseless:
        return y.copy()
    draws = _rng(seed).random(y.shape[0])
    flips = np.where(y == 1, draws < noise.q_false_neg, draws < noise.q_false_pos)
    return y ^ flips.astype(np.uint8)


def eavesdrop(y, eve, seed):
    """Erase each minislot independently with ``eve.erase_prob``; the rest is
    copied unchanged.
    """
    z = np.asarray(y, dtype=np.int8).copy()
    erased = _rng(seed).random(z.shape[0]) < eve.erase_prob
    z[erased] = ERASED
    return z


def observed_mask(z):
    """Positions of an eavesdropper outcome that were not erased"""
    return np.asarray(z) != ERASED


def observed_bits(z):
    """The eavesdropper outcome with erasures read as zero, for use with a mask"""
    z = np.asarray(z)
    return np.where(z == ERASED, 0, z).astype(np.uint8)


def dumps_outcome(y):
    """``0``/``1`` characters, ``?`` for erased positions"""
    return ''.join(_ERASED_CHAR if v == ERASED else str(int(v)) for v in np.asarray(y))


def loads_outcome(text):
    """The reversal of :func:`dumps_outcome`"""
    text = text.strip()
    if any(ch not in '01' + _ERASED_CHAR for ch in text):
        raise ParameterError('bad_outcome_characters')
    if _ERASED_CHAR in text:
        return np.array([ERASED if ch == _ERASED_CHAR else int(ch) for ch in text], dtype=np.int8)
    return np.array([int(ch) for ch in text], dtype=np.uint8)
