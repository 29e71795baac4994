""" Decoders for the flip-noise channel
"""
import itertools
import math

import numpy as np

from .. import _DEFAULT_ENUMERATION_CAP
from .. import CapacityError
from .. import ParameterError
from ..codebook import pack_bits
from .base import AMBIGUOUS
from .base import INFEASIBLE
from .base import UNIQUE
from .base import DecodeResult
from .base import Decoder
from .base import Entry
from .base import check_outcome
from .base import packed_mask
from .base import popcount_rows
from .coma import split_rows
from .coma import summarize_survivors


def _check_q(q, epsilon):
    if not 0.0 <= q < 0.5:
        raise ParameterError('q_out_of_range: %r' % q)
    if epsilon < 0:
        raise ParameterError('epsilon_negative: %r' % epsilon)


def match_counts(codebook, y, mask=None):
    """|zeta| and |beta| of every row: its observed ones, and those that
    fall on ones of ``y``.
    """
    y = check_outcome(codebook, y)
    observed = packed_mask(mask, codebook.code_length)
    rows = codebook.packed & observed
    zeta = popcount_rows(rows)
    beta = popcount_rows(rows & pack_bits(y))
    return zeta, beta


def mismatch_fractions(codebook, y, mask=None):
    """Fraction of each row's ones that landed on idle minislots"""
    zeta, beta = match_counts(codebook, y, mask)
    return np.where(zeta > 0, (zeta - beta) / np.maximum(zeta, 1), 0.0)


def decode_noisy_coma(codebook, y, q, epsilon=0.0, mask=None):
    """Noisy-CoMa: a row survives iff |beta| >= |zeta| (1 - q (1 + epsilon)).

    Uncovered ones of ``y`` up to the same q (1 + epsilon) fraction of the
    observed minislots are tolerated before the result turns ambiguous; with
    ``q == 0`` this is exactly :func:`~boolmac.decoders.coma.decode_coma`.

    :param q: detector error probability, in [0, 0.5)
    :param epsilon: slack above q
    :rtype: DecodeResult
    """
    _check_q(q, epsilon)
    zeta, beta = match_counts(codebook, y, mask)
    slack = q * (1.0 + epsilon)
    rows = np.flatnonzero(beta >= zeta * (1.0 - slack))
    result = summarize_survivors(codebook, rows, y, mask)
    if slack == 0 or result.is_unique:
        return result
    observed = codebook.code_length if mask is None else int(np.count_nonzero(mask))
    allowed = int(math.floor(slack * observed))
    if result.diagnostics['uncovered_ones'] > allowed:
        return result
    relaxed = summarize_survivors(codebook, rows, np.asarray(y, dtype=np.uint8) & _covered(codebook, rows), mask,
                                  diagnostics={'uncovered_ones_tolerated': result.diagnostics['uncovered_ones']})
    return relaxed


def _covered(codebook, rows):
    if not len(rows):
        return np.zeros(codebook.code_length, dtype=np.uint8)
    return np.bitwise_or.reduce(codebook.rows_bits(rows), axis=0)


def _count_candidates(per_sensor, size):
    """Elementary symmetric polynomial of the per-sensor counts"""
    e = [1] + [0] * size
    for count in per_sensor:
        for j in range(size, 0, -1):
            e[j] += e[j - 1] * count
    return e[size]


def decode_noisy_ml(codebook, y, k, q=0.0, epsilon=0.0, tolerance=0.0, prefilter=True, exact=True,
                    mask=None, cap=_DEFAULT_ENUMERATION_CAP):
    """ML for the flip-noise channel: the explanation whose OR is closest to
    ``y`` in Hamming distance.

    :param k: number of transmitters looked for
    :param q: detector error probability used by the Noisy-CoMa prefilter
    :param epsilon: prefilter slack
    :param tolerance: largest accepted distance as a fraction of the observed
                      minislots; a larger minimum is infeasible
    :param prefilter: restrict candidates to Noisy-CoMa survivors
    :param exact: exactly ``k`` rows, else sizes 1..k (0 too when y is empty)
    :rtype: DecodeResult
    """
    if k < 1:
        raise ParameterError('k_not_positive: %r' % k)
    _check_q(q, epsilon)
    y = check_outcome(codebook, y)
    observed = packed_mask(mask, codebook.code_length)
    target = pack_bits(y) & observed
    if prefilter:
        zeta, beta = match_counts(codebook, y, mask)
        rows = np.flatnonzero(beta >= zeta * (1.0 - q * (1.0 + epsilon)))
    else:
        rows = np.arange(codebook.n_rows)
    sensors = split_rows(codebook, rows)[0]
    by_sensor = {}
    for row, sensor in zip(rows.tolist(), sensors.tolist()):
        by_sensor.setdefault(sensor, []).append(row)
    sizes = [k] if exact else list(range(0 if not target.any() else 1, k + 1))
    total = sum(_count_candidates([len(v) for v in by_sensor.values()], s) for s in sizes)
    if total > cap:
        raise CapacityError('noisy_ml_enumeration_exceeds_cap: %d > %d' % (total, cap))
    masked = codebook.packed & observed
    best = None
    explanations = {}
    for size in sizes:
        for chosen in itertools.combinations(sorted(by_sensor), size):
            for rowset in itertools.product(*(by_sensor[s] for s in chosen)):
                if rowset:
                    union = np.bitwise_or.reduce(masked[list(rowset)], axis=0)
                else:
                    union = np.zeros_like(target)
                distance = int(popcount_rows((union ^ target)[None, :])[0])
                if best is None or distance < best:
                    best = distance
                    explanations = {}
                if distance == best:
                    entries = [Entry(*codebook.entry_of(r)) for r in rowset]
                    explanations.setdefault(frozenset((e.sensor, e.message) for e in entries), entries)
    values, counts = np.unique(sensors, return_counts=True)
    surviving = dict(zip(values.tolist(), counts.tolist()))
    n_observed = codebook.code_length if mask is None else int(np.count_nonzero(mask))
    diagnostics = {'candidates': total, 'min_distance': best}
    if best is None or best > tolerance * n_observed:
        return DecodeResult((), surviving, INFEASIBLE, diagnostics)
    status = UNIQUE if len(explanations) == 1 else AMBIGUOUS
    return DecodeResult(next(iter(explanations.values())), surviving, status, diagnostics)


class NoisyComa(Decoder):

    name = 'noisy_coma'

    def __init__(self, q, epsilon=0.0):
        _check_q(q, epsilon)
        Decoder.__init__(self, q=q, epsilon=epsilon)

    def decode(self, codebook, y, mask=None):
        return decode_noisy_coma(codebook, y, self.config['q'], self.config['epsilon'], mask)


class NoisyMl(Decoder):

    name = 'noisy_ml'

    def __init__(self, k, q=0.0, epsilon=0.0, tolerance=0.0, prefilter=True, exact=True,
                 cap=_DEFAULT_ENUMERATION_CAP):
        _check_q(q, epsilon)
        Decoder.__init__(self, k=k, q=q, epsilon=epsilon, tolerance=tolerance, prefilter=prefilter,
                         exact=exact, cap=cap)

    def decode(self, codebook, y, mask=None):
        c = self.config
        return decode_noisy_ml(codebook, y, c['k'], c['q'], c['epsilon'], c['tolerance'], c['prefilter'],
                               c['exact'], mask, c['cap'])
