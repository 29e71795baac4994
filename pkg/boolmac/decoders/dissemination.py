""" Sensor side decoding of the downstream beacon
"""
import numpy as np

from .. import ParameterError
from .. import ShapeError
from ..codebook import pack_bits
from .base import AMBIGUOUS
from .base import UNIQUE
from .base import DecodeResult
from .base import Entry
from .base import containment_survivors
from .base import packed_mask


def decode_dissemination(own_bin, y, mask=None):
    """CoMa restricted to the bin of one sensor.

    A sensor only holds its own C * F codewords, so it can tell which of its
    messages were sent and nothing about the others. An empty estimate means
    no message was destined to it.

    :param own_bin: the :class:`~boolmac.codebook.SensorBin` of the sensor
    :param y: the received outcome vector
    :rtype: DecodeResult
    """
    if own_bin.packed.shape[0] == 0:
        raise ParameterError('empty_bin')
    y = np.asarray(y, dtype=np.uint8)
    if y.shape != (own_bin.code_length,):
        raise ShapeError('outcome_length_mismatch: %r != %d' % (y.shape, own_bin.code_length))
    alive = containment_survivors(own_bin.packed, pack_bits(y), packed_mask(mask, own_bin.code_length))
    local = np.flatnonzero(alive)
    messages, subcodewords = np.divmod(local, own_bin.n_subcodewords)
    surviving = {own_bin.sensor: int(len(local))} if len(local) else {}
    found = {}
    for m, f in zip(messages.tolist(), subcodewords.tolist()):
        found.setdefault(m, Entry(own_bin.sensor, m, f))
    status = UNIQUE if len(found) <= 1 else AMBIGUOUS
    return DecodeResult(found.values(), surviving, status, {'surviving_messages': len(found)})
