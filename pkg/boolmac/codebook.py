""" Random superimposed codebooks, plain and sub-binned
"""
import logging
from collections import namedtuple

import numpy as np

from . import _LN2
from . import _DEFAULT_MEMORY_CAP_BITS
from . import _GENERATION_CHUNK_ROWS
from . import CODEBOOK_MAGIC
from . import CODEBOOK_VERSION
from . import CapacityError
from . import ParameterError
from . import ShapeError

log = logging.getLogger(__name__)

_MAX_SEED = 1 << 64

_CodeParams = namedtuple('_CodeParams', [
    'n_sensors', 'k_active', 'n_messages', 'code_length', 'n_subcodewords', 'bit_prob', 'seed',
])


class CodeParams(_CodeParams):
    """Parameters of a codebook.

    :param n_sensors: number of sensors N
    :param k_active: maximal number of simultaneously active sensors K
    :param n_messages: messages per sensor C
    :param code_length: codeword length T in minislots
    :param n_subcodewords: codewords per sub-bin F, 1 for the non-secure code
    :param bit_prob: probability of a one, default ln(2)/K
    :param seed: unsigned 64-bit key of the generator
    """
    __slots__ = ()

    def __new__(cls, n_sensors, k_active, n_messages=1, code_length=1, n_subcodewords=1,
                bit_prob=None, seed=0):
        if bit_prob is None:
            bit_prob = _LN2 / k_active if k_active > 0 else 0.0
        self = _CodeParams.__new__(
            cls, int(n_sensors), int(k_active), int(n_messages), int(code_length),
            int(n_subcodewords), float(bit_prob), int(seed))
        self.validate()
        return self

    def validate(self):
        if self.n_sensors < 1:
            raise ParameterError('n_sensors_not_positive: %d' % self.n_sensors)
        if self.k_active < 1:
            raise ParameterError('k_active_not_positive: %d' % self.k_active)
        if self.k_active > self.n_sensors:
            raise ParameterError('k_active_exceeds_n_sensors: %d > %d' % (self.k_active, self.n_sensors))
        if self.n_messages < 1:
            raise ParameterError('n_messages_not_positive: %d' % self.n_messages)
        if self.code_length < 1:
            raise ParameterError('code_length_not_positive: %d' % self.code_length)
        if self.n_subcodewords < 1:
            raise ParameterError('n_subcodewords_not_positive: %d' % self.n_subcodewords)
        if not 0.0 < self.bit_prob < 1.0:
            raise ParameterError('bit_prob_out_of_range: %r' % self.bit_prob)
        if not 0 <= self.seed < _MAX_SEED:
            raise ParameterError('seed_out_of_range: %d' % self.seed)

    def replace(self, **kw):
        """Like ``_replace`` but validates the result. ``bit_prob`` is kept as is
        unless given.
        """
        values = self._asdict()
        values.update(kw)
        return CodeParams(**values)

    @property
    def n_rows(self):
        return self.n_sensors * self.n_messages * self.n_subcodewords

    @property
    def bin_size(self):
        return self.n_messages * self.n_subcodewords


SensorBin = namedtuple('SensorBin', ['sensor', 'packed', 'n_messages', 'n_subcodewords', 'code_length'])


def pack_bits(bits):
    """Pack a 0/1 vector (or matrix, row-wise) into uint8 words"""
    return np.packbits(np.asarray(bits, dtype=np.uint8), axis=-1)


def unpack_bits(packed, length):
    return np.unpackbits(packed, axis=-1, count=length)


def _stride(code_length):
    # Philox emits 4 words per counter step; rows start on a block boundary
    return -(-code_length // 4) * 4


class Codebook(object):
    """An (N * C * F) x T binary matrix, stored as packed rows.

    Row order is sensor-major, then message, then sub-codeword, so that the
    bin of a sensor and the sub-bin of a (sensor, message) pair are contiguous.

    :param params: the :class:`CodeParams` the matrix was drawn from
    :param packed: uint8 array of shape (rows, ceil(T / 8))
    """

    def __init__(self, params, packed):
        expected = (params.n_rows, (params.code_length + 7) // 8)
        if packed.shape != expected:
            raise ShapeError('packed_shape_mismatch: %r != %r' % (packed.shape, expected))
        self.params = params
        self._packed = packed
        self._packed.flags.writeable = False

    @property
    def packed(self):
        return self._packed

    @property
    def bits(self):
        """The unpacked 0/1 matrix"""
        return unpack_bits(self._packed, self.params.code_length)

    @property
    def code_length(self):
        return self.params.code_length

    @property
    def n_rows(self):
        return self.params.n_rows

    def row_index(self, sensor, message, subcodeword=0):
        p = self.params
        if not (0 <= sensor < p.n_sensors and 0 <= message < p.n_messages and 0 <= subcodeword < p.n_subcodewords):
            raise ParameterError('row_out_of_range: (%d, %d, %d)' % (sensor, message, subcodeword))
        return (sensor * p.n_messages + message) * p.n_subcodewords + subcodeword

    def entry_of(self, row):
        """Inverse of :meth:`row_index`.

        :returns: (sensor, message, subcodeword)
        """
        p = self.params
        pair, subcodeword = divmod(int(row), p.n_subcodewords)
        sensor, message = divmod(pair, p.n_messages)
        return sensor, message, subcodeword

    def row_bits(self, row):
        return unpack_bits(self._packed[row], self.params.code_length)

    def rows_bits(self, rows):
        """0/1 matrix of the given row indices"""
        return unpack_bits(self._packed[list(rows)], self.params.code_length)

    def bin(self, sensor):
        """The C * F rows a single sensor holds"""
        size = self.params.bin_size
        start = sensor * size
        return SensorBin(sensor, self._packed[start:start + size], self.params.n_messages,
                         self.params.n_subcodewords, self.params.code_length)

    def regenerate_row(self, row):
        """Draw a single row again from the keyed generator, without the rest
        of the matrix.
        """
        p = self.params
        stride = _stride(p.code_length)
        bit_generator = np.random.Philox(key=p.seed)
        bit_generator.advance(row * stride // 4)
        draws = np.random.Generator(bit_generator).random(stride)
        return (draws[:p.code_length] < p.bit_prob).astype(np.uint8)

    def __eq__(self, other):
        if not isinstance(other, Codebook):
            return NotImplemented
        return self.params == other.params and np.array_equal(self._packed, other._packed)

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self):
        p = self.params
        return 'Codebook(N=%d, K=%d, C=%d, F=%d, T=%d, seed=%d)' % (
            p.n_sensors, p.k_active, p.n_messages, p.n_subcodewords, p.code_length, p.seed)


def generate_codebook(params, memory_cap_bits=_DEFAULT_MEMORY_CAP_BITS):
    """Draw every bit as an independent Bernoulli(bit_prob).

    Bits come from a Philox generator keyed by ``params.seed``; row ``r``
    uses counter blocks starting at ``r * stride / 4``, so the same row is
    obtained from :meth:`Codebook.regenerate_row` alone.

    :param params: the code parameters
    :param memory_cap_bits: refuse matrices with more bits than this
    :rtype: Codebook
    """
    if not isinstance(params, CodeParams):
        raise ParameterError('not_code_params: %r' % type(params))
    n_rows = params.n_rows
    length = params.code_length
    if n_rows * length > memory_cap_bits:
        raise CapacityError('codebook_exceeds_memory_cap: %d bits > %d' % (n_rows * length, memory_cap_bits))
    stride = _stride(length)
    generator = np.random.Generator(np.random.Philox(key=params.seed))
    packed = np.empty((n_rows, (length + 7) // 8), dtype=np.uint8)
    for start in range(0, n_rows, _GENERATION_CHUNK_ROWS):
        stop = min(n_rows, start + _GENERATION_CHUNK_ROWS)
        draws = generator.random((stop - start, stride))
        packed[start:stop] = np.packbits(draws[:, :length] < params.bit_prob, axis=1)
    log.debug('generated %r', params)
    return Codebook(params, packed)


########################################
# File format
########################################

def dumps(codebook):
    """Serialize to the text format: a header line followed by one row of
    ``0``/``1`` characters per codeword, in row order.
    """
    p = codebook.params
    header = ' '.join([
        CODEBOOK_MAGIC, CODEBOOK_VERSION, str(p.n_sensors), str(p.k_active), str(p.n_messages),
        str(p.n_subcodewords), str(p.code_length), str(p.seed), repr(p.bit_prob / _LN2),
    ])
    bits = codebook.bits + ord('0')
    lines = [header]
    lines.extend(row.tobytes().decode('ascii') for row in bits)
    return '\n'.join(lines) + '\n'


def loads(text):
    """The reversal of :meth:`dumps`"""
    lines = text.splitlines()
    if not lines:
        raise ParameterError('empty_codebook_file')
    fields = lines[0].split()
    if len(fields) != 9 or fields[0] != CODEBOOK_MAGIC or fields[1] != CODEBOOK_VERSION:
        raise ParameterError('bad_codebook_header: %s' % lines[0])
    n, k, c, f, t, seed = (int(x) for x in fields[2:8])
    ratio = float(fields[8])
    # the default ln(2)/K is restored exactly rather than through a float product
    bit_prob = None if abs(ratio * k - 1.0) < 1e-12 else ratio * _LN2
    params = CodeParams(n_sensors=n, k_active=k, n_messages=c, code_length=t, n_subcodewords=f,
                        bit_prob=bit_prob, seed=seed)
    rows = [line.strip() for line in lines[1:] if line.strip()]
    if len(rows) != params.n_rows:
        raise ShapeError('codebook_row_count_mismatch: %d != %d' % (len(rows), params.n_rows))
    if any(len(row) != t for row in rows):
        raise ShapeError('codebook_row_length_mismatch: expected %d' % t)
    bits = np.frombuffer(''.join(rows).encode('ascii'), dtype=np.uint8).reshape(len(rows), t) - ord('0')
    if bits.max(initial=0) > 1:
        raise ParameterError('codebook_row_not_binary')
    return Codebook(params, pack_bits(bits))


def dump(codebook, fp):
    fp.write(dumps(codebook))


def load(fp):
    return loads(fp.read())
