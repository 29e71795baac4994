import logging

from .base import Base
from .base import decode_row
from .base import encode_row
from . import _to_native
from . import _DEFAULT_SOCKET_TIMEOUT
from . import _TCP_KEEP_ALIVE_OPTIONS
from .. import ParameterError

log = logging.getLogger(__name__)


class Redis(Base):
    """Keeps grid points in a Redis server, shared by every machine running
    sweeps against it. Rows are stored as JSON strings under ``prefix + key``.

    :param host: address of Redis server
    :param port: port number of Redis server
    :param unix_socket_path: unix socket file path
    :param password: password authentication for the Redis server
    :param db: db (zero-based numeric index) on Redis server to connect
    :param timeout: lifetime of a row in seconds, 0 for ever
    :param prefix: added to every key; :meth:`clear` only drops keys under it
    :param client: an existing ``redis.Redis``, the connection arguments are
        ignored then

    Any additional keyword arguments will be passed to ``redis.Redis``
    """

    def __init__(self, host='localhost', port=6379, unix_socket_path=None, password=None, db=0, timeout=None,
                 prefix='', scan_count=1000, client=None, **kw):
        Base.__init__(self, timeout)
        self.prefix = prefix
        self._scan_count = scan_count
        if client is not None:
            self._client = client
            return
        try:
            import redis
        except ImportError:
            raise ParameterError('no redis module found, install boolmac[redis]')
        kwargs = dict(host=host, port=port, unix_socket_path=unix_socket_path, password=password, db=db)
        kwargs.update(kw)
        kwargs.setdefault('socket_timeout', _DEFAULT_SOCKET_TIMEOUT)
        kwargs.setdefault('socket_connect_timeout', _DEFAULT_SOCKET_TIMEOUT)
        kwargs.setdefault('socket_keepalive', 1)
        kwargs.setdefault('socket_keepalive_options', _TCP_KEEP_ALIVE_OPTIONS)
        self._client = redis.Redis(**kwargs)

    def _full_key(self, key):
        return self.prefix + _to_native(key)

    def get_key_to_value(self, *keys):
        if not keys:
            return {}
        texts = self._client.mget([self._full_key(key) for key in keys])
        found = {}
        for key, text in zip(keys, texts):
            row = decode_row(text)
            if row is not None:
                found[key] = row
            elif text is not None:
                log.warning('unreadable row under %s', self._full_key(key))
        return found

    def set(self, key, value, timeout=None):
        if timeout is None:
            timeout = self.timeout
        text = encode_row(value)
        if timeout:
            return bool(self._client.setex(name=self._full_key(key), value=text, time=int(timeout)))
        return bool(self._client.set(name=self._full_key(key), value=text))

    def delete(self, key):
        self._client.delete(self._full_key(key))
        return True

    def clear(self):
        """Deletes the keys under :attr:`prefix`, or the whole db without a prefix"""
        if not self.prefix:
            return bool(self._client.flushdb())
        batch = []
        for key in self._client.scan_iter(match=self.prefix + '*', count=self._scan_count):
            batch.append(key)
            if len(batch) >= self._scan_count:
                self._client.delete(*batch)
                batch = []
        if batch:
            self._client.delete(*batch)
        return True
