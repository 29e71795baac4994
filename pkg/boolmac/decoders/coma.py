""" Column matching: an idle minislot invalidates every codeword with a one there
"""
import numpy as np

from ..codebook import pack_bits
from .base import AMBIGUOUS
from .base import UNIQUE
from .base import DecodeResult
from .base import Decoder
from .base import Entry
from .base import check_outcome
from .base import containment_survivors
from .base import packed_mask
from .base import popcount_rows


def coma_survivors(codebook, y, mask=None):
    """Indices of the rows whose support lies inside the support of ``y``"""
    y = check_outcome(codebook, y)
    alive = containment_survivors(codebook.packed, pack_bits(y), packed_mask(mask, codebook.code_length))
    return np.flatnonzero(alive)


def split_rows(codebook, rows):
    """(sensor, message, subcodeword) arrays of the given row indices"""
    p = codebook.params
    rows = np.asarray(rows, dtype=np.int64)
    pair, subcodeword = np.divmod(rows, p.n_subcodewords)
    sensor, message = np.divmod(pair, p.n_messages)
    return sensor, message, subcodeword


def uncovered_ones(codebook, rows, y, mask=None):
    """Observed ones of ``y`` that no row in ``rows`` covers"""
    target = pack_bits(y) & packed_mask(mask, codebook.code_length)
    if len(rows):
        target = target & ~np.bitwise_or.reduce(codebook.packed[rows], axis=0)
    return int(popcount_rows(target[None, :])[0])


def summarize_survivors(codebook, rows, y, mask=None, diagnostics=None):
    """Build the CoMa style result from surviving rows.

    The result is unique when every sensor keeps at most one (sensor,
    message) sub-bin and the survivors cover every observed one of ``y``.
    A unique estimate keeps the lowest surviving sub-codeword of each sub-bin.
    """
    sensor, message, subcodeword = split_rows(codebook, rows)
    pair_ids = np.unique(sensor * codebook.params.n_messages + message)
    pair_sensors = pair_ids // codebook.params.n_messages
    sensors, counts = np.unique(sensor, return_counts=True)
    surviving = dict(zip(sensors.tolist(), counts.tolist()))
    missing = uncovered_ones(codebook, rows, y, mask)
    one_pair_per_sensor = len(np.unique(pair_sensors)) == len(pair_sensors)
    diagnostics = dict(diagnostics or {})
    diagnostics.update(surviving_rows=int(len(rows)), surviving_pairs=int(len(pair_ids)), uncovered_ones=missing)
    if one_pair_per_sensor and missing == 0:
        chosen = {}
        for s, m, f in zip(sensor.tolist(), message.tolist(), subcodeword.tolist()):
            if s not in chosen or f < chosen[s].subcodeword:
                chosen[s] = Entry(s, m, f)
        return DecodeResult(chosen.values(), surviving, UNIQUE, diagnostics)
    entries = (Entry(*e) for e in zip(sensor.tolist(), message.tolist(), subcodeword.tolist()))
    return DecodeResult(entries, surviving, AMBIGUOUS, diagnostics)


def decode_coma(codebook, y, mask=None):
    """CoMa decoding.

    A row survives iff it has no one at an idle (observed) minislot. In a
    noiseless channel a transmitted row always survives.

    :param codebook: the codebook
    :param y: outcome vector of length T
    :param mask: optional observed positions
    :rtype: DecodeResult
    """
    rows = coma_survivors(codebook, y, mask)
    return summarize_survivors(codebook, rows, y, mask)


class Coma(Decoder):

    name = 'coma'

    def decode(self, codebook, y, mask=None):
        return decode_coma(codebook, y, mask)


def definite_pairs(codebook, rows, y, mask=None):
    """(sensor, message) pairs that are the only survivors covering some
    observed one of ``y``. In the noiseless channel each of them was sent.
    """
    if not len(rows):
        return frozenset()
    ones = np.asarray(y, dtype=bool)
    if mask is not None:
        ones = ones & np.asarray(mask, dtype=bool)
    columns = np.flatnonzero(ones)
    if not len(columns):
        return frozenset()
    sensor, message, _ = split_rows(codebook, rows)
    pair = sensor * codebook.params.n_messages + message
    covering = codebook.rows_bits(rows)[:, columns].astype(bool)
    sentinel = codebook.params.n_sensors * codebook.params.n_messages
    low = np.where(covering, pair[:, None], sentinel).min(axis=0)
    high = np.where(covering, pair[:, None], -1).max(axis=0)
    single = np.unique(low[(low == high) & (low < sentinel)])
    return frozenset(divmod(int(p), codebook.params.n_messages) for p in single)
