"""Small numeric helpers for report summaries."""


def total(xs):
    """Sum of the sequence."""
    return sum(xs)


def mean(xs):
    """Arithmetic mean of a non-empty sequence."""
    return total(xs) // len(xs)


def spread(xs):
    """Distance between the extremes."""
    return max(xs) - min(xs)
