"""Marker constructions on windows: shifted stacks of a centered pattern,
segment cover checks, rectangle partitions and toasts.

The shifted stack places copies of one (2a+1)-square pattern on a column
grid where column block c is dropped by c mod (2a+1) rows. Every cell of
the window belongs to exactly one copy, and the copy centers at a fixed
height sit (2a+1)^2 apart, which drives the segment cover threshold.

A toast is a family of leveled cell classes meant to nest strictly; the
checks here report which nesting clause fails and where.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .geometry import Rect, dist_to_set
from .grid import boundary, Config


# ---------------------------------------------------------------- shifted stack

def build_shifted_stack(p, b):
    """Tile [0,b]^2 with shifted copies of the centered pattern ``p``.

    ``p`` must be hole-free on [-a,a]^2. Copy centers go at x = c*m + a
    (m = 2a+1), and column block c is shifted down by c mod m, so the copies
    partition the plane. Returns the window [0,b]^2 of that tiling.
    """
    a = p.rect.hi[0]
    if p.rect.lo != (-a, -a) or p.rect.hi != (a, a):
        raise ValueError(f"pattern must live on a centered square, got {p.rect}")
    if not p.hole_free():
        raise ValueError("pattern must be hole-free")
    m = 2 * a + 1
    if b < m:
        raise ValueError(f"window bound {b} too small for {m}x{m} copies")
    xs, ys = np.meshgrid(np.arange(b + 1), np.arange(b + 1))
    cols = xs // m
    # copy at column block c is dropped by c mod m rows
    out = p.array[(ys + cols) % m, xs % m]
    return Config(Rect.from_bounds(0, b, 0, b), out)


def copy_centers(a, win):
    """Centers of stack copies that fit entirely inside ``win``."""
    m = 2 * a + 1
    lo_x, lo_y = win.lo
    hi_x, hi_y = win.hi
    out = set()
    for cx in range(lo_x + a, hi_x - a + 1):
        if (cx - a) % m != 0:
            continue
        c = (cx - a) // m
        r = (a - c) % m
        for cy in range(lo_y + a, hi_y - a + 1):
            if (cy - r) % m == 0:
                out.add((cx, cy))
    return out


def check_segment_center_cover(a, win, length):
    """Does every horizontal segment of ``length`` cells, placed anywhere in
    the window at least 2a away from the top and bottom edges, contain a copy
    center?

    Returns (True, None) or (False, ((x0, y0), length)) with a failing
    segment. Raises ValueError when no segment fits at all.
    """
    if length < 1:
        raise ValueError(f"segment length must be >= 1, got {length}")
    lo_x, lo_y = win.lo
    hi_x, hi_y = win.hi
    y_first, y_last = lo_y + 2 * a, hi_y - 2 * a
    x_last = hi_x - length + 1
    if x_last < lo_x or y_first > y_last:
        raise ValueError("window holds no admissible segment of this length")
    centers = copy_centers(a, win)
    for y in range(y_first, y_last + 1):
        row = sorted(x for (x, cy) in centers if cy == y)
        for x0 in range(lo_x, x_last + 1):
            k = bisect.bisect_left(row, x0)
            if k >= len(row) or row[k] > x0 + length - 1:
                return False, ((x0, y), length)
    return True, None


# ------------------------------------------------------------------ partitions

@dataclass(frozen=True)
class RectPartition:
    """One level of a partition of ``window`` into rectangles."""

    level: int
    rects: tuple
    window: Rect

    def to_json(self):
        return {
            "level": self.level,
            "rects": [r.to_json() for r in self.rects],
            "window": self.window.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            level=int(data["level"]),
            rects=tuple(Rect.from_json(r) for r in data["rects"]),
            window=Rect.from_json(data["window"]),
        )


def _validate_partition(part):
    win = part.window
    paint = np.zeros((win.height, win.width), dtype=np.int32)
    for r in part.rects:
        if not win.contains_rect(r):
            raise ValueError(f"rect {r} leaves the window {win}")
        x0 = r.lo[0] - win.lo[0]
        y0 = r.lo[1] - win.lo[1]
        paint[y0 : y0 + r.height, x0 : x0 + r.width] += 1
    if not (paint == 1).all():
        raise ValueError("rects must cover the window exactly once")


def _containing_rect(part, g):
    for r in part.rects:
        if r.contains(g):
            return r
    raise ValueError(f"probe {g} outside the partition window")


def check_partition_props(parts, probes):
    """Per-level size and probe-distance profiles of a partition sequence.

    v[k]/w[k] are the smallest/largest rectangle sides at level k. For each
    probe, phi lists its taxicab distance to the boundary ring of the
    containing rectangle, level by level. The increasing flags say whether
    those profiles grow strictly.
    """
    parts = list(parts)
    if parts:
        win = parts[0].window
        for part in parts:
            if part.window != win:
                raise ValueError("all partition levels must share one window")
            _validate_partition(part)
    v = [min(min(r.width, r.height) for r in part.rects) for part in parts]
    w = [max(max(r.width, r.height) for r in part.rects) for part in parts]
    phi = []
    for g in probes:
        col = []
        for part in parts:
            a, b, c, d = _containing_rect(part, g).bounds()
            col.append(min(g[0] - a, b - g[0], g[1] - c, d - g[1]))
        phi.append(col)
    return {
        "v": v,
        "w": w,
        "phi": phi,
        "v_strictly_increasing": all(y > x for x, y in zip(v, v[1:])),
        "phi_strictly_increasing": [
            all(y > x for x, y in zip(col, col[1:])) for col in phi
        ],
    }


# ----------------------------------------------------------------------- toast

@dataclass(frozen=True)
class ToastViolation:
    clause: str
    level: object
    where: object


@dataclass(frozen=True)
class Toast:
    """Leveled cell classes inside a window.

    ``levels[n]`` is a tuple of disjoint classes (frozensets of cells). In a
    layered toast a class at level n must nest into a single class one level
    up; unlayered toasts may skip levels.
    """

    levels: tuple
    layered: bool
    window: Rect

    def __post_init__(self):
        norm = tuple(
            tuple(
                sorted(
                    (frozenset((int(x), int(y)) for (x, y) in cl) for cl in level),
                    key=lambda cl: sorted(cl)[:1],
                )
            )
            for level in self.levels
        )
        object.__setattr__(self, "levels", norm)

    def to_json(self):
        return {
            "layered": self.layered,
            "window": self.window.to_json(),
            "levels": [
                [sorted([x, y] for (x, y) in cl) for cl in level]
                for level in self.levels
            ],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            levels=tuple(
                tuple(frozenset((int(x), int(y)) for (x, y) in cl) for cl in level)
                for level in data["levels"]
            ),
            layered=bool(data["layered"]),
            window=Rect.from_json(data["window"]),
        )


def _with_neighbors(cl):
    out = set(cl)
    for (x, y) in cl:
        out.update(((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)))
    return out


def _taxicab_diameter(cl):
    s = [x + y for (x, y) in cl]
    d = [x - y for (x, y) in cl]
    return max(max(s) - min(s), max(d) - min(d))


def _rim_exempt(t, cl):
    # A class that cannot dilate inside the window is excused from nesting.
    return not all(t.window.contains(g) for g in _with_neighbors(cl))


def check_toast(t):
    """All clause violations of the toast, as ToastViolation records.

    Clauses: "structure" (overlap within a level, empty class, or cells
    outside the window), "0" (a cell far enough from the window rim is in no
    class), "1" (a class has no superclass higher up), and "2'"/"2"
    (layered/unlayered: no superclass containing it strictly inside, away
    from the superclass boundary ring).
    """
    vs = []
    covered = set()
    for n, level in enumerate(t.levels):
        seen = set()
        for cl in level:
            if not cl:
                vs.append(ToastViolation("structure", n, None))
                continue
            outside = [g for g in cl if not t.window.contains(g)]
            if outside:
                vs.append(ToastViolation("structure", n, min(outside)))
            overlap = seen & cl
            if overlap:
                vs.append(ToastViolation("structure", n, min(overlap)))
            seen |= cl
            covered |= cl

    margin = 0
    for level in t.levels:
        for cl in level:
            if cl:
                margin = max(margin, _taxicab_diameter(cl))
    a, b, c, d = t.window.bounds()
    for g in t.window.points():
        rim = min(g[0] - a, b - g[0], g[1] - c, d - g[1])
        if rim >= margin and g not in covered:
            vs.append(ToastViolation("0", None, g))
            break

    top = len(t.levels) - 1
    for n, level in enumerate(t.levels):
        for cl in level:
            if not cl or _rim_exempt(t, cl):
                continue
            if t.layered:
                above = t.levels[n + 1] if n < top else ()
                strict = "2'"
            else:
                above = [sup for m in range(n + 1, top + 1) for sup in t.levels[m]]
                strict = "2"
            if not any(cl <= sup for sup in above):
                vs.append(ToastViolation("1", n, min(cl)))
            if not any(cl <= (sup - boundary(sup)) for sup in above):
                vs.append(ToastViolation(strict, n, min(cl)))
    return vs


def toast_report(t):
    vs = check_toast(t)
    exempt = sum(
        1 for level in t.levels for cl in level if cl and _rim_exempt(t, cl)
    )
    return {
        "ok": not vs,
        "violations": [
            {
                "clause": v.clause,
                "level": v.level,
                "where": list(v.where) if isinstance(v.where, tuple) else v.where,
            }
            for v in vs
        ],
        "rim_exempt": exempt,
        "levels": len(t.levels),
    }


def fx_profile(t, g):
    """Per level: 0 when ``g`` is in no class there, else the taxicab
    distance from ``g`` to the union of that level's class boundaries."""
    g = (int(g[0]), int(g[1]))
    prof = []
    for level in t.levels:
        if not any(g in cl for cl in level):
            prof.append(0)
            continue
        ring = set()
        for cl in level:
            ring |= boundary(cl)
        prof.append(int(dist_to_set(g, ring)))
    return prof


@dataclass(frozen=True)
class FxReport:
    ok: bool
    failures: tuple = ()
    uncovered: tuple = ()


def check_fx_strict_growth(t, probes):
    """From the first level covering each probe upward, the fx profile must
    grow strictly. Failures record (probe, level) for the lower level of each
    non-increasing step; probes covered nowhere are reported separately."""
    if not t.layered:
        raise ValueError("strict growth is defined for layered toasts only")
    failures = []
    uncovered = []
    for probe in probes:
        g = (int(probe[0]), int(probe[1]))
        in_level = [any(g in cl for cl in level) for level in t.levels]
        if not any(in_level):
            uncovered.append(g)
            continue
        prof = fx_profile(t, g)
        k0 = in_level.index(True)
        for n in range(k0, len(prof) - 1):
            if prof[n + 1] <= prof[n]:
                failures.append((g, n))
    return FxReport(ok=not failures, failures=tuple(failures), uncovered=tuple(uncovered))
