""" Group-testing based data collection over a Boolean multiple access channel
"""
import math

import numpy as np

_LN2 = math.log(2)

_DEFAULT_TRIALS = 4000
_DEFAULT_ENUMERATION_CAP = 2000000
_DEFAULT_EXPONENT_CAP_K = 20
_DEFAULT_SUBBIN_BITS_CAP = 8
_DEFAULT_MEMORY_CAP_BITS = 1 << 31

# rows generated per Philox call, keeps the float buffer bounded for large F
_GENERATION_CHUNK_ROWS = 1 << 14

CODEBOOK_MAGIC = 'BOOLMAC'
CODEBOOK_VERSION = 'v1'


class BoolMacError(Exception):
    """Base class of every error raised by this package"""


class ParameterError(BoolMacError, ValueError):
    """Invalid parameters or inconsistent configuration"""


class ShapeError(BoolMacError, ValueError):
    """Vectors or rows of mismatching length"""


class CapacityError(BoolMacError):
    """An enumeration or allocation exceeds its configured cap"""


class InfeasibleError(BoolMacError):
    """The requested quantity does not exist for these parameters"""


def derive_seed(seed, *key):
    """A SeedSequence for the sub-stream ``key`` of ``seed``.

    Unlike ``SeedSequence.spawn`` this keeps no state, so deriving the same
    key twice gives the same stream.

    :param seed: int or :class:`numpy.random.SeedSequence`
    :param key: non-negative ints
    """
    if isinstance(seed, np.random.SeedSequence):
        return np.random.SeedSequence(seed.entropy, spawn_key=tuple(seed.spawn_key) + key)
    return np.random.SeedSequence(seed, spawn_key=key)


def seed_to_int(seed):
    """64-bit integer drawn from a seed, e.g. for a codebook key"""
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return int(seed.generate_state(1, dtype=np.uint64)[0])


from .codebook import CodeParams, Codebook, SensorBin, generate_codebook  # noqa: E402
from .bounds import (  # noqa: E402
    BoundParams,
    bound_T_lemma1,
    bound_T_lemma2,
    closed_form_T,
    error_exponent_bound,
    ml_rival_count,
    ofdma_minislots,
)
from .channel import (  # noqa: E402
    AnalogParams,
    NoiseParams,
    EveParams,
    or_superpose,
    analog_superpose_detect,
    apply_flip_noise,
    eavesdrop,
)
from .decoders import (  # noqa: E402
    Entry,
    ActiveSet,
    DecodeResult,
    create_decoder,
    decode_coma,
    decode_noisy_coma,
    decode_noisy_ml,
    decode_ml,
    decode_secure,
    decode_dissemination,
)
