""" Base class for the decoders
"""
import json
from collections import namedtuple

import numpy as np

from ..codebook import pack_bits
from .. import ParameterError
from .. import ShapeError

UNIQUE = 'unique'
AMBIGUOUS = 'ambiguous'
INFEASIBLE = 'infeasible'

STATUSES = (UNIQUE, AMBIGUOUS, INFEASIBLE)


Entry = namedtuple('Entry', ['sensor', 'message', 'subcodeword'])
Entry.__new__.__defaults__ = (0,)


class ActiveSet(frozenset):
    """Set of (sensor, message, subcodeword) entries, one per active sensor"""

    def __new__(cls, entries=()):
        return frozenset.__new__(cls, (e if isinstance(e, Entry) else Entry(*e) for e in entries))

    def validate(self, k_active=None):
        sensors = [e.sensor for e in self]
        if len(set(sensors)) != len(sensors):
            raise ParameterError('duplicate_sensor_in_active_set')
        if k_active is not None and len(self) > k_active:
            raise ParameterError('active_set_exceeds_k: %d > %d' % (len(self), k_active))
        return self

    def pairs(self):
        """The (sensor, message) pairs, sub-codeword identity dropped"""
        return frozenset((e.sensor, e.message) for e in self)

    def sensors(self):
        return frozenset(e.sensor for e in self)

    def rows(self, codebook):
        return [codebook.row_index(*e) for e in self]

    def __repr__(self):
        return 'ActiveSet(%r)' % sorted(self)


_DecodeResult = namedtuple('_DecodeResult', ['estimate', 'candidates_surviving', 'status', 'diagnostics'])


class DecodeResult(_DecodeResult):
    """Decoder output.

    :param estimate: the :class:`ActiveSet` explaining the outcome, for an
                     ambiguous result one representative (ML) or every
                     survivor (CoMa)
    :param candidates_surviving: dict sensor -> number of surviving rows
    :param status: one of ``unique``, ``ambiguous``, ``infeasible``
    :param diagnostics: dict of decoder specific numbers
    """
    __slots__ = ()

    def __new__(cls, estimate=(), candidates_surviving=None, status=UNIQUE, diagnostics=None):
        if status not in STATUSES:
            raise ParameterError('unknown_status: %s' % status)
        return _DecodeResult.__new__(cls, ActiveSet(estimate), dict(candidates_surviving or {}), status,
                                     dict(diagnostics or {}))

    @property
    def is_unique(self):
        return self.status == UNIQUE

    def matches(self, truth):
        """Exact recovery: unique and the same (sensor, message) pairs"""
        return self.is_unique and self.estimate.pairs() == ActiveSet(truth).pairs()

    def to_record(self):
        return {
            'status': self.status,
            'estimate': [list(e) for e in sorted(self.estimate)],
            'survivors': {str(s): n for s, n in sorted(self.candidates_surviving.items())},
            'diagnostics': self.diagnostics,
        }

    def dumps(self):
        return json.dumps(self.to_record(), sort_keys=True)

    @classmethod
    def loads(cls, text):
        record = json.loads(text)
        return cls(
            estimate=[Entry(*e) for e in record['estimate']],
            candidates_surviving={int(s): n for s, n in record['survivors'].items()},
            status=record['status'],
            diagnostics=record.get('diagnostics'),
        )


def check_outcome(codebook, y):
    y = np.asarray(y)
    if y.ndim != 1 or y.shape[0] != codebook.code_length:
        raise ShapeError('outcome_length_mismatch: %r != %d' % (y.shape, codebook.code_length))
    return y.astype(np.uint8)


def packed_mask(mask, code_length):
    """Packed observed-position mask, all ones when ``mask`` is None"""
    if mask is None:
        return pack_bits(np.ones(code_length, dtype=np.uint8))
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (code_length,):
        raise ShapeError('mask_length_mismatch: %r != %d' % (mask.shape, code_length))
    return pack_bits(mask.astype(np.uint8))


def popcount_rows(packed):
    """Number of ones of every packed row"""
    return np.unpackbits(packed, axis=-1).sum(axis=-1, dtype=np.int64)


def containment_survivors(packed_rows, y_packed, mask_packed):
    """Rows with no one at an observed idle position"""
    forbidden = mask_packed & ~y_packed
    return ~np.any(packed_rows & forbidden, axis=1)


def survivors_by_sensor(codebook, rows):
    counts = {}
    for row in rows:
        sensor = codebook.entry_of(row)[0]
        counts[sensor] = counts.get(sensor, 0) + 1
    return counts


class Decoder(object):
    """Base class of the decoders. All the decoders implement this API.

    :param config: the remaining keys of the config dict
    """

    name = None

    def __init__(self, **config):
        self.config = config

    def decode(self, codebook, y, mask=None):
        """Estimate the active set from an outcome vector.

        :param codebook: the shared :class:`~boolmac.codebook.Codebook`
        :param y: the 0/1 outcome vector of length T
        :param mask: optional boolean vector of observed positions; positions
                     outside it impose no constraint
        :rtype: DecodeResult
        """
        raise NotImplementedError()

    def __repr__(self):
        return '%s(%s)' % (type(self).__name__, ', '.join('%s=%r' % kv for kv in sorted(self.config.items())))
