""" Stores for finished Monte Carlo grid points

A sweep asks the store for each grid point before simulating it, so repeated
or overlapping sweeps only simulate what is new. Values are plain dicts.
"""
import platform

from .. import ParameterError

_DEFAULT_SOCKET_TIMEOUT = 3

# grid points never go stale, 0 keeps a key forever
_DEFAULT_TIMEOUT = 0


if platform.system().lower() == 'linux':
    import socket
    _TCP_KEEP_ALIVE_OPTIONS = {
        socket.TCP_KEEPIDLE: 30,
        socket.TCP_KEEPINTVL: 5,
        socket.TCP_KEEPCNT: 5,
    }
else:
    _TCP_KEEP_ALIVE_OPTIONS = {}


def _to_native(x, charset='utf-8', errors='strict'):
    if x is None or isinstance(x, str):
        return x
    return x.decode(charset, errors)


from .base import Base  # noqa: E402
from .dummy import Dummy  # noqa: E402
from .memory import Memory  # noqa: E402
from .redis_cache import Redis  # noqa: E402


_cache_classes = {
    'null': Dummy,
    'memory': Memory,
    'redis': Redis,
}


def create_cache_client(cache_id, config):
    """Build a store from a config dict::

        create_cache_client('results', {'type': 'redis', 'host': 'localhost', 'port': 6379})

    :param cache_id: name of the store, used as key prefix when the config has none
    :param config: dict with a ``type`` key, other keys go to the constructor
    """
    config = dict(config)
    cache_type = config.pop('type', None)
    if cache_type not in _cache_classes:
        raise ParameterError('unknown_cache_type: %s' % cache_type)
    if cache_type == 'redis':
        config.setdefault('prefix', '%s:' % cache_id)
    try:
        client = _cache_classes[cache_type](**config)
    except TypeError as e:
        raise ParameterError('bad_cache_config: %s' % e)
    client.id = cache_id
    return client


def parse_cache_url(url):
    """``memory``, ``null`` or ``redis://host:port/db`` to a config dict"""
    if url in _cache_classes and url != 'redis':
        return {'type': url}
    if url.startswith('redis://'):
        rest = url[len('redis://'):]
        address, _, db = rest.partition('/')
        host, _, port = address.partition(':')
        try:
            return {'type': 'redis', 'host': host or 'localhost', 'port': int(port or 6379), 'db': int(db or 0)}
        except ValueError:
            raise ParameterError('bad_cache_url: %s' % url)
    raise ParameterError('bad_cache_url: %s' % url)
