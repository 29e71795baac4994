import logging
import time

from collections import namedtuple

from . import _to_native
from .base import Base
from .base import decode_row
from .base import encode_row

log = logging.getLogger(__name__)

_Entry = namedtuple('_Entry', ['expires_at', 'text'])


class Memory(Base):
    """In-process store, lost when the process exits. Rows are kept as
    encoded text; expired ones are dropped on access and by a sweep of the
    whole dict at most every ``trim_interval`` seconds.
    """

    _TRIM_INTERVAL = 60

    def __init__(self, timeout=None, trim_interval=None):
        Base.__init__(self, timeout)
        self._trim_interval = trim_interval or self._TRIM_INTERVAL
        self._rows = {}
        self._trimmed_at = time.time()

    @property
    def raw_client(self):
        return self._rows

    def _live(self, key, now):
        entry = self._rows.get(key)
        if entry is None:
            return None
        if entry.expires_at is not None and entry.expires_at < now:
            del self._rows[key]
            return None
        return entry

    def get_key_to_value(self, *keys):
        now = time.time()
        found = {}
        for key in keys:
            entry = self._live(_to_native(key), now)
            if entry is not None:
                found[key] = decode_row(entry.text)
        return found

    def set(self, key, value, timeout=None):
        now = time.time()
        self._trim(now)
        if timeout is None:
            timeout = self.timeout
        expires_at = now + timeout if timeout else None
        self._rows[_to_native(key)] = _Entry(expires_at, encode_row(value))
        return True

    def delete(self, key):
        self._rows.pop(_to_native(key), None)
        return True

    def clear(self):
        self._rows = {}
        return True

    def _trim(self, now):
        if self._trimmed_at + self._trim_interval >= now:
            return
        expired = [k for k, e in self._rows.items() if e.expires_at is not None and e.expires_at < now]
        for key in expired:
            del self._rows[key]
        if expired:
            log.debug('dropped %d expired rows', len(expired))
        self._trimmed_at = now
