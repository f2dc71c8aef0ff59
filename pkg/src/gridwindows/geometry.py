"""Points, rectangles and lattices on the integer grid.

Points are plain ``(x, y)`` tuples throughout; all distances are taxicab.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INFINITY = math.inf


def taxicab_norm(g):
    return abs(g[0]) + abs(g[1])


def dist_to_set(g, points):
    """Taxicab distance from ``g`` to a set of points; INFINITY when empty."""
    if not points:
        return INFINITY
    gx, gy = g
    return min(abs(gx - x) + abs(gy - y) for (x, y) in points)


@dataclass(frozen=True)
class Rect:
    """Closed integer rectangle [lo.x, hi.x] x [lo.y, hi.y]."""

    lo: tuple
    hi: tuple

    @classmethod
    def from_bounds(cls, a, b, c, d):
        if a > b or c > d:
            raise ValueError(f"inverted rectangle bounds ({a},{b},{c},{d})")
        return cls((a, c), (b, d))

    @property
    def width(self):
        return self.hi[0] - self.lo[0] + 1

    @property
    def height(self):
        return self.hi[1] - self.lo[1] + 1

    @property
    def area(self):
        return self.width * self.height

    def bounds(self):
        return (self.lo[0], self.hi[0], self.lo[1], self.hi[1])

    def contains(self, g):
        return self.lo[0] <= g[0] <= self.hi[0] and self.lo[1] <= g[1] <= self.hi[1]

    def contains_rect(self, other):
        return self.contains(other.lo) and self.contains(other.hi)

    def intersect(self, other):
        a = max(self.lo[0], other.lo[0])
        b = min(self.hi[0], other.hi[0])
        c = max(self.lo[1], other.lo[1])
        d = min(self.hi[1], other.hi[1])
        if a > b or c > d:
            return None
        return Rect((a, c), (b, d))

    def translate(self, d):
        dx, dy = d
        return Rect((self.lo[0] + dx, self.lo[1] + dy), (self.hi[0] + dx, self.hi[1] + dy))

    def points(self):
        """All cells, lexicographic (x first, then y)."""
        return [
            (x, y)
            for x in range(self.lo[0], self.hi[0] + 1)
            for y in range(self.lo[1], self.hi[1] + 1)
        ]

    def to_json(self):
        return [self.lo[0], self.hi[0], self.lo[1], self.hi[1]]

    @classmethod
    def from_json(cls, data):
        a, b, c, d = (int(v) for v in data)
        return cls.from_bounds(a, b, c, d)


@dataclass(frozen=True)
class Lattice:
    """anchor + spacings[0]*Z x spacings[1]*Z"""

    anchor: tuple
    spacings: tuple

    def __post_init__(self):
        if self.spacings[0] < 1 or self.spacings[1] < 1:
            raise ValueError(f"lattice spacings must be >= 1, got {self.spacings}")
        object.__setattr__(self, "anchor", (int(self.anchor[0]), int(self.anchor[1])))
        object.__setattr__(self, "spacings", (int(self.spacings[0]), int(self.spacings[1])))

    def contains(self, g):
        return (g[0] - self.anchor[0]) % self.spacings[0] == 0 and (
            g[1] - self.anchor[1]
        ) % self.spacings[1] == 0

    def to_json(self):
        return {"anchor": list(self.anchor), "spacings": list(self.spacings)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(data["anchor"]), tuple(data["spacings"]))


def lattice_points_in(lat, rect):
    """Lattice points inside ``rect``, lexicographic."""
    sx, sy = lat.spacings
    ax, ay = lat.anchor
    x0 = rect.lo[0] + (ax - rect.lo[0]) % sx
    y0 = rect.lo[1] + (ay - rect.lo[1]) % sy
    return [
        (x, y)
        for x in range(x0, rect.hi[0] + 1, sx)
        for y in range(y0, rect.hi[1] + 1, sy)
    ]
