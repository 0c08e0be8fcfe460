"""Streaming and batch descriptive statistics."""

import math


def mean(values):
    data = list(values)
    if not data:
        raise ValueError("mean of empty sequence")
    return sum(data) / len(data)


def variance(values, ddof=0):
    data = list(values)
    if len(data) <= ddof:
        raise ValueError("not enough data points")
    center = mean(data)
    return sum((x - center) ** 2 for x in data) / (len(data) - ddof)


def stddev(values, ddof=0):
    return math.sqrt(variance(values, ddof=ddof))


def median(values):
    data = sorted(values)
    if not data:
        raise ValueError("median of empty sequence")
    mid = len(data) // 2
    if len(data) % 2 == 1:
        return data[mid]
    return (data[mid - 1] + data[mid]) / 2


def percentile(values, q):
    """Linear-interpolation percentile, q in [0, 100]."""
    if not 0 <= q <= 100:
        raise ValueError("q out of range")
    data = sorted(values)
    if not data:
        raise ValueError("percentile of empty sequence")
    rank = (len(data) - 1) * q / 100
    low = math.floor(rank)
    high = math.ceil(rank)
    if low == high:
        return data[low]
    return data[low] + (data[high] - data[low]) * (rank - low)


class RunningStats:
    """Welford accumulator for mean and variance."""

    def __init__(self):
        self.count = 0
        self._mean = 0.0
        self._m2 = 0.0

    def add(self, value):
        self.count += 1
        delta = value - self._mean
        self._mean += delta / self.count
        self._m2 += delta * (value - self._mean)

    def mean(self):
        if self.count == 0:
            raise ValueError("no samples")
        return self._mean

    def variance(self):
        if self.count < 2:
            return 0.0
        return self._m2 / (self.count - 1)

    def merge(self, other):
        combined = RunningStats()
        combined.count = self.count + other.count
        if combined.count == 0:
            return combined
        delta = other._mean - self._mean
        combined._mean = self._mean + delta * other.count / combined.count
        combined._m2 = (
            self._m2
            + other._m2
            + delta * delta * self.count * other.count / combined.count
        )
        return combined
