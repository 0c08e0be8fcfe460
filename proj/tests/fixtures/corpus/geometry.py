"""Plane geometry primitives used by the layout engine."""

import math

EPSILON = 1e-9


class Point:
    """A point in the plane."""

    def __init__(self, x, y):
        self.x = x
        self.y = y

    def translated(self, dx, dy):
        return Point(self.x + dx, self.y + dy)

    def distance_to(self, other):
        """Euclidean distance to ``other``."""
        return math.hypot(self.x - other.x, self.y - other.y)

    @property
    def magnitude(self):
        return math.hypot(self.x, self.y)

    def __repr__(self):
        return f"Point({self.x!r}, {self.y!r})"


class Rect:
    def __init__(self, origin, width, height):
        if width < 0 or height < 0:
            raise ValueError("negative extent")
        self.origin = origin
        self.width = width
        self.height = height

    def area(self):
        return self.width * self.height

    def contains(self, point):
        return (
            self.origin.x - EPSILON <= point.x <= self.origin.x + self.width + EPSILON
            and self.origin.y - EPSILON <= point.y <= self.origin.y + self.height + EPSILON
        )

    def intersects(self, other):
        if self.origin.x > other.origin.x + other.width:
            return False
        if other.origin.x > self.origin.x + self.width:
            return False
        if self.origin.y > other.origin.y + other.height:
            return False
        return other.origin.y <= self.origin.y + self.height


def bounding_box(points):
    """Smallest Rect containing every point."""
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    origin = Point(min(xs), min(ys))
    return Rect(origin, max(xs) - origin.x, max(ys) - origin.y)


def collinear(a, b, c, tolerance=EPSILON):
    cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return abs(cross) <= tolerance
