""" Base class for the result stores
"""
import json

import numpy as np

from . import _DEFAULT_TIMEOUT
from .. import ParameterError


def _plain(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError('not a json value: %r' % (value,))


def encode_row(row):
    """A sweep row as compact JSON text. numpy scalars become Python numbers."""
    try:
        return json.dumps(row, sort_keys=True, separators=(',', ':'), default=_plain)
    except (TypeError, ValueError) as e:
        raise ParameterError('row_not_storable: %s' % e)


def decode_row(text):
    if text is None:
        return None
    if isinstance(text, bytes):
        text = text.decode('utf-8')
    try:
        return json.loads(text)
    except ValueError:
        return None


class Base(object):
    """A store of finished grid points. Keys are :func:`~boolmac.experiments.point_key`
    strings, values are the row dicts of a sweep. Every lookup hands out a
    fresh copy, so callers may add columns to the rows they get.

    :param timeout: lifetime of a stored row in seconds, 0 for ever
    """

    id = None

    def __init__(self, timeout=None):
        self._client = None
        self.timeout = _DEFAULT_TIMEOUT if timeout is None else timeout

    def get(self, key):
        """The row stored under `key`, ``None`` when missing or unreadable"""
        return self.get_key_to_value(key).get(key)

    def get_key_to_value(self, *keys):
        """Rows of the keys found; missing keys are missing from the dict"""
        return {}

    def set(self, key, value, timeout=None):
        """Store the row `value` under `key`, replacing what was there.

        :param timeout: lifetime in seconds, the store default when ``None``
        :returns: whether the row has been stored
        """
        encode_row(value)
        return True

    def delete(self, key):
        return True

    def clear(self):
        """Drop every row of this store"""
        return True

    @property
    def raw_client(self):
        """The underlying client object"""
        return self._client
