import os

import numpy as np
import pytest
from hypothesis import HealthCheck
from hypothesis import settings

from boolmac.codebook import CodeParams
from boolmac.codebook import Codebook
from boolmac.codebook import generate_codebook
from boolmac.codebook import pack_bits

settings.register_profile('default', deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('fast', deadline=None, max_examples=10)
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))


def codebook_from_bits(bits, k_active=1, n_messages=1, n_subcodewords=1):
    """Codebook holding exactly the given 0/1 rows"""
    bits = np.asarray(bits, dtype=np.uint8)
    n_rows, length = bits.shape
    params = CodeParams(n_rows // (n_messages * n_subcodewords), k_active, n_messages, length, n_subcodewords)
    return Codebook(params, pack_bits(bits))


def support_row(length, ones):
    row = np.zeros(length, dtype=np.uint8)
    row[list(ones)] = 1
    return row


@pytest.fixture
def small_codebook():
    return generate_codebook(CodeParams(n_sensors=20, k_active=2, n_messages=2, code_length=30, seed=7))


@pytest.fixture
def seven_sensor_codebook():
    """Seven sensors, T = 11. Sensors 1 and 6 are the ones sent: their
    supports are {1, 7, 10} and {0, 5, 10}; every other row has a one at
    a minislot left idle by them.
    """
    supports = [
        (0, 2),
        (1, 7, 10),
        (4, 10),
        (3, 1),
        (3, 7),
        (0, 3),
        (0, 5, 10),
    ]
    return codebook_from_bits([support_row(11, s) for s in supports], k_active=2)
