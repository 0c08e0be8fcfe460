"""A tiny LRU cache with instrumentation hooks."""

from collections import OrderedDict
from functools import wraps


class CacheMiss(Exception):
    pass


class LRUCache:
    """Bounded mapping that evicts the least recently used entry."""

    def __init__(self, capacity=128):
        self._data = OrderedDict()
        self.capacity = capacity
        self.hits = 0
        self.misses = 0

    def get(self, key):
        try:
            value = self._data.pop(key)
        except KeyError:
            self.misses += 1
            raise CacheMiss(key) from None
        self._data[key] = value
        self.hits += 1
        return value

    def put(self, key, value):
        if key in self._data:
            self._data.pop(key)
        elif len(self._data) >= self.capacity:
            self._data.popitem(last=False)
        self._data[key] = value

    def __len__(self):
        return len(self._data)

    @property
    def hit_ratio(self):
        total = self.hits + self.misses
        if total == 0:
            return 0.0
        return self.hits / total


def memoized(func):
    """Memoize ``func`` by positional arguments."""
    cache = {}

    @wraps(func)
    def wrapper(*args):
        if args in cache:
            return cache[args]
        result = func(*args)
        cache[args] = result
        return result

    wrapper.cache = cache
    return wrapper


def clear_all(caches):
    for cache in caches:
        cache.clear()
