import json
import time

import numpy as np
import pytest

from boolmac import ParameterError
from boolmac.caches import Dummy
from boolmac.caches import Memory
from boolmac.caches import Redis
from boolmac.caches import create_cache_client
from boolmac.caches import parse_cache_url
from boolmac.caches.base import decode_row
from boolmac.caches.base import encode_row


class FakeRedisClient(object):
    """Just enough of ``redis.Redis`` for the store"""

    def __init__(self):
        self.data = {}
        self.expires = {}

    def set(self, name, value):
        self.data[name] = value.encode('utf-8')
        return True

    def setex(self, name, value, time):
        self.expires[name] = time
        return self.set(name, value)

    def mget(self, keys):
        return [self.data.get(k) for k in keys]

    def delete(self, *names):
        for name in names:
            self.data.pop(name, None)
        return len(names)

    def scan_iter(self, match, count):
        prefix = match.rstrip('*')
        return [k for k in list(self.data) if k.startswith(prefix)]


ROW = {'code_length': 60, 'success_rate': 0.975, 'subbin_capped': False, 'decoder': 'coma'}


def test_row_codec():
    text = encode_row(dict(ROW, trials=np.int64(40), rate=np.float64(0.5)))
    assert json.loads(text)['trials'] == 40
    assert decode_row(text.encode('utf-8'))['rate'] == 0.5
    assert decode_row(None) is None
    assert decode_row('{broken') is None
    with pytest.raises(ParameterError):
        encode_row({'codebook': object()})


def test_memory_set_get():
    store = Memory()
    assert store.get('a') is None
    assert store.set('a', ROW)
    assert store.get('a') == ROW
    assert store.get(b'a') == ROW
    store.set('b', {'successes': 1})
    assert store.get_key_to_value('a', 'b', 'missing') == {'a': ROW, 'b': {'successes': 1}}
    store.delete('a')
    assert store.get('a') is None
    assert list(store.raw_client) == ['b']


def test_memory_hands_out_copies():
    store = Memory()
    store.set('a', ROW)
    row = store.get('a')
    row['success_monotone'] = 1.0
    assert store.get('a') == ROW


def test_memory_timeout():
    store = Memory(timeout=0.05)
    store.set('short', {'n': 1})
    store.set('forever', {'n': 2}, timeout=0)
    time.sleep(0.1)
    assert store.get('short') is None
    assert store.get_key_to_value('short', 'forever') == {'forever': {'n': 2}}


def test_memory_trim():
    store = Memory(trim_interval=0.01)
    store.set('a', {'n': 1}, timeout=0.01)
    time.sleep(0.05)
    store.set('b', {'n': 2})
    assert list(store.raw_client) == ['b']
    assert store.clear()
    assert store.raw_client == {}


def test_dummy_keeps_nothing():
    store = Dummy()
    assert store.set('a', ROW)
    assert store.get('a') is None
    assert store.get_key_to_value('a') == {}
    with pytest.raises(ParameterError):
        store.set('a', {'x': object()})


def test_redis_store():
    client = FakeRedisClient()
    store = Redis(prefix='grid:', client=client, timeout=60)
    assert store.raw_client is client
    store.set('p1', ROW)
    store.set('p2', {'successes': 7}, timeout=0)
    assert client.expires == {'grid:p1': 60}
    assert json.loads(client.data['grid:p2'].decode('utf-8')) == {'successes': 7}
    assert store.get('p1') == ROW
    assert store.get_key_to_value('p2', 'nope') == {'p2': {'successes': 7}}
    assert store.get_key_to_value() == {}
    store.delete('p1')
    assert sorted(client.data) == ['grid:p2']


def test_redis_unreadable_row():
    client = FakeRedisClient()
    client.data['bad'] = b'not json'
    assert Redis(client=client).get('bad') is None


def test_redis_clear_keeps_other_prefixes():
    client = FakeRedisClient()
    client.data['other:x'] = b'{}'
    store = Redis(prefix='grid:', client=client, scan_count=2)
    for i in range(5):
        store.set('p%d' % i, {'i': i})
    assert store.clear()
    assert list(client.data) == ['other:x']


def test_create_cache_client():
    store = create_cache_client('results', {'type': 'memory', 'timeout': 10})
    assert isinstance(store, Memory)
    assert store.id == 'results'
    assert store.timeout == 10
    redis_store = create_cache_client('results', {'type': 'redis', 'client': FakeRedisClient()})
    assert redis_store.prefix == 'results:'
    with pytest.raises(ParameterError):
        create_cache_client('x', {'type': 'memcached'})
    with pytest.raises(ParameterError):
        create_cache_client('x', {'type': 'memory', 'bogus': 1})


@pytest.mark.parametrize('url,expected', [
    ('memory', {'type': 'memory'}),
    ('null', {'type': 'null'}),
    ('redis://', {'type': 'redis', 'host': 'localhost', 'port': 6379, 'db': 0}),
    ('redis://cache.lan:6380/2', {'type': 'redis', 'host': 'cache.lan', 'port': 6380, 'db': 2}),
])
def test_parse_cache_url(url, expected):
    assert parse_cache_url(url) == expected


@pytest.mark.parametrize('url', ['redis', 'redis://host:port', 'file:///tmp/x'])
def test_parse_cache_url_errors(url):
    with pytest.raises(ParameterError):
        parse_cache_url(url)
