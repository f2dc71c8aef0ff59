"""Finite binary windows with optional holes.

A ``Config`` assigns 0/1 to the cells of a rectangle, except at hole cells
where it is undefined. Values are stored in a numpy array indexed
``[y - lo.y, x - lo.x]`` with 255 marking holes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Rect
from .serialize import pgm_dumps

HOLE = 255

_CHAR_TO_BIT = {"0": 0, "1": 1, ".": HOLE}
_BIT_TO_CHAR = {0: "0", 1: "1", HOLE: "."}


class Config:
    """Immutable rectangular 0/1 window, possibly with holes."""

    __slots__ = ("rect", "_bits")

    def __init__(self, rect, bits):
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.shape != (rect.height, rect.width):
            raise ValueError(
                f"bit array shape {arr.shape} does not match rect {rect.width}x{rect.height}"
            )
        bad = ~np.isin(arr, (0, 1, HOLE))
        if bad.any():
            raise ValueError("cell values must be 0, 1 or hole")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "rect", rect)
        object.__setattr__(self, "_bits", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Config is immutable")

    @property
    def array(self):
        return self._bits

    @classmethod
    def from_rows(cls, rect, rows):
        """Rows are listed low-y first; characters 0, 1 and '.' (hole)."""
        if len(rows) != rect.height:
            raise ValueError(f"expected {rect.height} rows, got {len(rows)}")
        data = np.empty((rect.height, rect.width), dtype=np.uint8)
        for j, row in enumerate(rows):
            if len(row) != rect.width:
                raise ValueError(f"row {j} has length {len(row)}, expected {rect.width}")
            for i, ch in enumerate(row):
                if ch not in _CHAR_TO_BIT:
                    raise ValueError(f"bad cell character {ch!r}")
                data[j, i] = _CHAR_TO_BIT[ch]
        return cls(rect, data)

    def rows(self):
        """Low-y row first, as strings over 0/1/'.'."""
        return [
            "".join(_BIT_TO_CHAR[int(v)] for v in self._bits[j])
            for j in range(self.rect.height)
        ]

    def value(self, g):
        """0/1 at a defined cell, None at holes and outside the window."""
        if not self.rect.contains(g):
            return None
        v = int(self._bits[g[1] - self.rect.lo[1], g[0] - self.rect.lo[0]])
        return None if v == HOLE else v

    @property
    def holes(self):
        ys, xs = np.nonzero(self._bits == HOLE)
        lo = self.rect.lo
        return frozenset((int(x) + lo[0], int(y) + lo[1]) for x, y in zip(xs, ys))

    def hole_free(self):
        return not (self._bits == HOLE).any()

    def restrict(self, rect):
        if not self.rect.contains_rect(rect):
            raise ValueError("restriction rectangle not inside the window")
        x0 = rect.lo[0] - self.rect.lo[0]
        y0 = rect.lo[1] - self.rect.lo[1]
        return Config(rect, self._bits[y0 : y0 + rect.height, x0 : x0 + rect.width])

    def translate(self, d):
        return Config(self.rect.translate(d), self._bits)

    def to_json(self):
        return {
            "rect": self.rect.to_json(),
            "rows": self.rows(),
            "holes": sorted([x, y] for (x, y) in self.holes),
        }

    @classmethod
    def from_json(cls, data):
        rect = Rect.from_json(data["rect"])
        cfg = cls.from_rows(rect, list(data["rows"]))
        declared = {(int(x), int(y)) for x, y in data.get("holes", [])}
        if declared != set(cfg.holes):
            raise ValueError("declared holes do not match row data")
        return cfg

    def to_pgm(self):
        """P2 image, top row of text = highest-y row; 0/1 cells map to 0/2,
        holes to the middle gray 1."""
        rows = []
        for j in range(self.rect.height - 1, -1, -1):
            rows.append([1 if v == HOLE else 2 * int(v) for v in self._bits[j]])
        return pgm_dumps(rows, 2)

    def to_ascii(self):
        """Top-down text rendering over 0/1/'.', one line per row."""
        lines = self.rows()[::-1]
        return "".join(line + "\n" for line in lines)

    def __eq__(self, other):
        if not isinstance(other, Config):
            return NotImplemented
        return self.rect == other.rect and np.array_equal(self._bits, other._bits)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash((self.rect, self._bits.tobytes()))

    def __repr__(self):
        a, b, c, d = self.rect.bounds()
        return f"Config([{a},{b}]x[{c},{d}], {self.rows()!r})"


def flip(p):
    """Exchange 0 and 1 everywhere; holes stay holes."""
    arr = p.array
    out = np.where(arr == HOLE, HOLE, 1 - arr).astype(np.uint8)
    return Config(p.rect, out)


def tile(q, counts, flip_mask, anchor):
    """Tile ``counts = (nx, ny)`` copies of ``q`` into one window anchored at
    ``anchor`` (low corner), flipping the copy at block index (i, j) whenever
    ``flip_mask(i, j)`` is true.

    The index law: out(anchor + (i*w + i', j*h + j')) equals
    q(lo + (i', j')), flipped on masked blocks.
    """
    nx, ny = counts
    if nx < 1 or ny < 1:
        raise ValueError(f"tile counts must be >= 1, got {counts}")
    if not q.hole_free():
        raise ValueError("cannot tile a window with holes")
    w, h = q.rect.width, q.rect.height
    qa = q.array
    qf = (1 - qa).astype(np.uint8)
    out = np.empty((ny * h, nx * w), dtype=np.uint8)
    for j in range(ny):
        for i in range(nx):
            out[j * h : (j + 1) * h, i * w : (i + 1) * w] = qf if flip_mask(i, j) else qa
    rect = Rect(anchor, (anchor[0] + nx * w - 1, anchor[1] + ny * h - 1))
    return Config(rect, out)


def _match_offsets(p, f, flipped):
    """All offsets s with s + rect(f) in the hole-free part of p and every
    cell matching (complemented when ``flipped``)."""
    if not f.hole_free():
        raise ValueError("pattern must be hole-free")
    pa = p.array
    plo, phi = p.rect.lo, p.rect.hi
    flo, fhi = f.rect.lo, f.rect.hi
    sx0, sx1 = plo[0] - flo[0], phi[0] - fhi[0]
    sy0, sy1 = plo[1] - flo[1], phi[1] - fhi[1]
    if sx0 > sx1 or sy0 > sy1:
        return set()
    nsx, nsy = sx1 - sx0 + 1, sy1 - sy0 + 1
    fa = f.array
    if flipped:
        fa = (1 - fa).astype(np.uint8)
    fh, fw = fa.shape
    acc = np.ones((nsy, nsx), dtype=bool)
    # row/col in pa of offset (sx0, sy0) placing f's low corner:
    bx = sx0 + flo[0] - plo[0]
    by = sy0 + flo[1] - plo[1]
    for v in range(fh):
        for u in range(fw):
            sub = pa[by + v : by + v + nsy, bx + u : bx + u + nsx]
            acc &= sub == fa[v, u]
    ys, xs = np.nonzero(acc)
    return {(int(x) + sx0, int(y) + sy0) for x, y in zip(xs, ys)}


def find_occurrences(p, f, flipped):
    """Offsets s such that s + rect(f) lies in the hole-free part of p and
    p(s + u) = f(u) for every cell u of f (values complemented when
    ``flipped``). Cell coordinates of ``f`` are absolute: its own rect.
    Offsets are searched over [lo(p) - hi(f), hi(p)] per axis."""
    hx, hy = p.rect.hi
    return {s for s in _match_offsets(p, f, flipped) if s[0] <= hx and s[1] <= hy}


def boundary(points):
    """Cells of the set having a 4-neighbor outside the set."""
    pts = set(points)
    out = set()
    for (x, y) in pts:
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb not in pts:
                out.add((x, y))
                break
    return out


@dataclass(frozen=True)
class PatternSet:
    """A nonempty tuple of hole-free patterns (a finite cylinder base)."""

    patterns: tuple

    def __post_init__(self):
        object.__setattr__(self, "patterns", tuple(self.patterns))
        if not self.patterns:
            raise ValueError("pattern set must be nonempty")
        for f in self.patterns:
            if not f.hole_free():
                raise ValueError("patterns must be hole-free")

    def to_json(self):
        return {"patterns": [f.to_json() for f in self.patterns]}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(Config.from_json(d) for d in data["patterns"]))
