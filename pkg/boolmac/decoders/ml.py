""" Maximum likelihood decoding for the noiseless channel

Under the deterministic OR channel the likelihood of an explanation is 1 when
the OR of its rows equals the outcome and 0 otherwise, so ML is a search for
exact matches. Explanations are compared by their (sensor, message) pairs:
two row sets that differ only in sub-codewords are the same explanation.
"""
import itertools
import logging
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
from .coma import coma_survivors
from .coma import split_rows

log = logging.getLogger(__name__)


def _to_int(packed_row):
    return int.from_bytes(packed_row.tobytes(), 'big')


class _Search(object):
    """Collects distinct explanations, stopping at the second one"""

    def __init__(self, codebook, cap):
        self.codebook = codebook
        self.cap = cap
        self.visited = 0
        self.found = []
        self._seen = set()

    def tick(self, amount=1):
        self.visited += amount
        if self.visited > self.cap:
            raise CapacityError('ml_search_exceeds_cap: %d' % self.cap)

    def add(self, rows):
        entries = [Entry(*self.codebook.entry_of(r)) for r in rows]
        key = frozenset((e.sensor, e.message) for e in entries)
        if key not in self._seen:
            self._seen.add(key)
            self.found.append(entries)

    @property
    def done(self):
        return len(self.found) >= 2


def _branch(search, candidates, target, size):
    """Row sets of exactly ``size`` rows from distinct sensors whose OR is
    ``target``. ``candidates`` are (row, sensor, bits) with bits inside target.

    The lowest uncovered bit must be covered by one of the chosen rows, so
    only rows covering it are branched on; once covered, the remaining
    slots take any candidate of an unused sensor.
    """
    chosen = []
    used = set()

    def fill(start, slots):
        if search.done:
            return
        if slots == 0:
            search.add([row for row, _ in chosen])
            return
        for index in range(start, len(candidates)):
            row, sensor, _ = candidates[index]
            if sensor in used:
                continue
            search.tick()
            chosen.append((row, sensor))
            used.add(sensor)
            fill(index + 1, slots - 1)
            chosen.pop()
            used.discard(sensor)
            if search.done:
                return

    def cover(covered, slots):
        if search.done:
            return
        remaining = target & ~covered
        if remaining == 0:
            fill(0, slots)
            return
        if slots == 0:
            return
        lowest = remaining & -remaining
        for row, sensor, bits in candidates:
            if sensor in used or not bits & lowest:
                continue
            search.tick()
            chosen.append((row, sensor))
            used.add(sensor)
            cover(covered | bits, slots - 1)
            chosen.pop()
            used.discard(sensor)
            if search.done:
                return

    cover(0, size)


def _result(codebook, search, survivors, diagnostics):
    sensors = split_rows(codebook, survivors)[0]
    values, counts = np.unique(sensors, return_counts=True)
    surviving = dict(zip(values.tolist(), counts.tolist()))
    diagnostics = dict(diagnostics, visited=search.visited, surviving_rows=int(len(survivors)))
    if not search.found:
        return DecodeResult((), surviving, INFEASIBLE, diagnostics)
    status = UNIQUE if len(search.found) == 1 else AMBIGUOUS
    return DecodeResult(search.found[0], surviving, status, diagnostics)


def _sizes(k, exact, target):
    if exact:
        return [k]
    return list(range(0 if target == 0 else 1, k + 1))


def enumeration_size(codebook, k):
    """binom(N, k) (C F)^k, the number of candidates without prefiltering"""
    p = codebook.params
    return math.comb(p.n_sensors, k) * p.bin_size ** k


def decode_ml(codebook, y, k, prefilter=True, exact=True, mask=None, cap=_DEFAULT_ENUMERATION_CAP):
    """ML decoding in the noiseless channel.

    :param codebook: the codebook
    :param y: outcome vector
    :param k: number of transmitters looked for
    :param prefilter: restrict the search to CoMa survivors. Sound in the
                      noiseless channel since CoMa never drops a sent row.
    :param exact: search explanations of exactly ``k`` rows; otherwise the
                  smallest explanations of at most ``k`` rows
    :param mask: optional observed positions
    :param cap: enumeration cap
    :rtype: DecodeResult
    """
    if k < 1:
        raise ParameterError('k_not_positive: %r' % k)
    y = check_outcome(codebook, y)
    mask_packed = packed_mask(mask, codebook.code_length)
    target = _to_int(pack_bits(y) & mask_packed)
    survivors = coma_survivors(codebook, y, mask)
    search = _Search(codebook, cap)
    if prefilter:
        sensors = split_rows(codebook, survivors)[0].tolist()
        masked = codebook.packed[survivors] & mask_packed
        candidates = [(int(r), s, _to_int(bits)) for r, s, bits in zip(survivors, sensors, masked)]
        for size in _sizes(k, exact, target):
            _branch(search, candidates, target, size)
            if search.found:
                break
    else:
        _exhaustive(codebook, search, mask_packed, target, k, exact)
    log.debug('ml visited %d nodes, %d explanations', search.visited, len(search.found))
    return _result(codebook, search, survivors, {'prefilter': bool(prefilter)})


def _exhaustive(codebook, search, mask_packed, target, k, exact):
    if enumeration_size(codebook, k) > search.cap:
        raise CapacityError('ml_enumeration_exceeds_cap: %d > %d, enable prefilter'
                            % (enumeration_size(codebook, k), search.cap))
    p = codebook.params
    row_bits = [_to_int(row & mask_packed) for row in codebook.packed]
    for size in _sizes(k, exact, target):
        for sensors in itertools.combinations(range(p.n_sensors), size):
            for local in itertools.product(range(p.bin_size), repeat=size):
                search.tick()
                rows = [s * p.bin_size + j for s, j in zip(sensors, local)]
                covered = 0
                for r in rows:
                    covered |= row_bits[r]
                if covered == target:
                    search.add(rows)
                    if search.done:
                        return
        if search.found:
            return


class Ml(Decoder):

    name = 'ml'

    def __init__(self, k, prefilter=True, exact=True, cap=_DEFAULT_ENUMERATION_CAP):
        Decoder.__init__(self, k=k, prefilter=prefilter, exact=exact, cap=cap)

    def decode(self, codebook, y, mask=None):
        c = self.config
        return decode_ml(codebook, y, c['k'], c['prefilter'], c['exact'], mask, c['cap'])
