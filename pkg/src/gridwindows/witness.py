"""Finite-window witness checks.

The checks here quantify over window positions only; probes that would
leave the window make a position inadmissible rather than failing it, and
probes landing on holes never witness anything.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Lattice, Rect, lattice_points_in
from .grid import HOLE, Config, _match_offsets


def _slices(rect, sub):
    """numpy index for ``sub`` inside an array laid out over ``rect``."""
    return (
        slice(sub.lo[1] - rect.lo[1], sub.hi[1] - rect.lo[1] + 1),
        slice(sub.lo[0] - rect.lo[0], sub.hi[0] - rect.lo[0] + 1),
    )


def _shift_ok_grid(p, t, T):
    """Boolean grid over p's window: True where some tau in T exhibits a
    defined, differing pair (g+tau, g+tau+t) inside the window."""
    rect = p.rect
    arr = p.array
    ok = np.zeros(arr.shape, dtype=bool)
    for tau in T:
        r = rect.intersect(rect.translate((-tau[0], -tau[1])))
        if r is not None:
            r = r.intersect(rect.translate((-t[0] - tau[0], -t[1] - tau[1])))
        if r is None:
            continue
        au = arr[_slices(rect, r.translate(tau))]
        av = arr[_slices(rect, r.translate((tau[0] + t[0], tau[1] + t[1])))]
        ok[_slices(rect, r)] |= (au != HOLE) & (av != HOLE) & (au != av)
    return ok


def _occurrence_grid(p, f, flipped):
    """(offset rect, boolean array of occurrence offsets) or (None, None)
    when f cannot fit inside p at all."""
    rect, fr = p.rect, f.rect
    sx0, sx1 = rect.lo[0] - fr.lo[0], rect.hi[0] - fr.hi[0]
    sy0, sy1 = rect.lo[1] - fr.lo[1], rect.hi[1] - fr.hi[1]
    if sx0 > sx1 or sy0 > sy1:
        return None, None
    srect = Rect((sx0, sy0), (sx1, sy1))
    occ = np.zeros((srect.height, srect.width), dtype=bool)
    for (x, y) in _match_offsets(p, f, flipped):
        occ[y - sy0, x - sx0] = True
    return srect, occ


def _pattern_ok_grid(p, f, F, flipped):
    """Boolean grid over p's window: True where some sigma in F lands on an
    occurrence offset of f (flipped or not)."""
    rect = p.rect
    ok = np.zeros(p.array.shape, dtype=bool)
    srect, occ = _occurrence_grid(p, f, flipped)
    if srect is None or not occ.any():
        return ok
    for sig in F:
        r = rect.intersect(srect.translate((-sig[0], -sig[1])))
        if r is None:
            continue
        ok[_slices(rect, r)] |= occ[_slices(srect, r.translate(sig))]
    return ok


def check_shift_witness(p, t, T):
    """Every defined cell g admits tau in T with g+tau and g+tau+t defined
    in the window and carrying different values."""
    if tuple(t) == (0, 0):
        raise ValueError("shift must be nonzero")
    ok = _shift_ok_grid(p, t, T)
    defined = p.array != HOLE
    return bool(ok[defined].all())


def check_pattern_witness(p, f, F, flipped):
    """Every defined cell g admits sigma in F with g+sigma an occurrence
    offset of f in p (complemented when ``flipped``)."""
    ok = _pattern_ok_grid(p, f, F, flipped)
    defined = p.array != HOLE
    return bool(ok[defined].all())


def window_two_coloring_check(x, s, T):
    """Windowed two-coloring discriminator.

    A position g is admissible when every probe g+tau and g+s+tau (tau in T)
    stays inside the window rectangle. The check passes when every
    admissible position has some tau whose two probes are defined and
    differ. With no admissible positions the check is vacuously true; with
    an empty T it fails whenever any position is admissible.
    """
    if tuple(s) == (0, 0):
        raise ValueError("shift must be nonzero")
    rect = x.rect
    if not T:
        return False
    region = None
    for tau in T:
        r = rect.translate((-tau[0], -tau[1])).intersect(
            rect.translate((-s[0] - tau[0], -s[1] - tau[1]))
        )
        if r is None:
            return True
        region = r if region is None else region.intersect(r)
        if region is None:
            return True
    arr = x.array
    ok = np.zeros((region.height, region.width), dtype=bool)
    for tau in T:
        au = arr[_slices(rect, region.translate(tau))]
        av = arr[_slices(rect, region.translate((tau[0] + s[0], tau[1] + s[1])))]
        ok |= (au != HOLE) & (av != HOLE) & (au != av)
    return bool(ok.all())


@dataclass(frozen=True)
class RecurrenceReport:
    ok: bool
    failing: tuple
    admissible_count: int
    rim_excluded: int

    def __bool__(self):
        return self.ok


def recurrence_check(x, B, T):
    """Check that from every admissible position, some step tau in T lands
    on a B-position (an offset where some pattern of B occurs in x).

    Admissibility again means all probes g+tau+u stay inside the window,
    for every tau in T and cell u of every pattern. ``rim_excluded`` counts
    window positions dropped by that rule."""
    rect = x.rect
    T = [tuple(t) for t in T]
    if not T:
        return RecurrenceReport(False, (), 0, rect.area)
    umin_x = min(f.rect.lo[0] for f in B.patterns)
    umax_x = max(f.rect.hi[0] for f in B.patterns)
    umin_y = min(f.rect.lo[1] for f in B.patterns)
    umax_y = max(f.rect.hi[1] for f in B.patterns)
    ax = rect.lo[0] - umin_x - min(t[0] for t in T)
    bx = rect.hi[0] - umax_x - max(t[0] for t in T)
    ay = rect.lo[1] - umin_y - min(t[1] for t in T)
    by = rect.hi[1] - umax_y - max(t[1] for t in T)
    if ax > bx or ay > by:
        return RecurrenceReport(True, (), 0, rect.area)
    region = Rect((ax, ay), (bx, by))
    bpos = set()
    for f in B.patterns:
        bpos |= _match_offsets(x, f, False)
    failing = tuple(
        g
        for g in region.points()
        if not any((g[0] + t[0], g[1] + t[1]) in bpos for t in T)
    )
    inside = region.intersect(rect)
    rim = rect.area - (inside.area if inside is not None else 0)
    return RecurrenceReport(not failing, failing, region.area, rim)


@dataclass(frozen=True)
class OddSet:
    """All points of odd taxicab norm at most ``radius``."""

    radius: int

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError("radius must be >= 1")

    def points(self):
        r = self.radius
        return [
            (x, y)
            for x in range(-r, r + 1)
            for y in range(-r, r + 1)
            if abs(x) + abs(y) <= r and (abs(x) + abs(y)) % 2 == 1
        ]

    def to_json(self):
        return {"radius": self.radius}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["radius"]))


def find_odd_recurrence(x, B, max_radius):
    """Smallest radius whose odd step set passes recurrence_check with at
    least one admissible position, or None."""
    for r in range(1, max_radius + 1):
        rep = recurrence_check(x, B, OddSet(r).points())
        if rep.ok and rep.admissible_count > 0:
            return OddSet(r)
    return None


def find_lattice_in(x, B, max_spacing, min_points=9):
    """First lattice (spacings ascending, anchors lexicographic) whose
    testable window points are all B-positions, with at least
    ``min_points`` of them. A point is testable when some pattern's cells
    fit inside the window there."""
    rect = x.rect
    bpos = set()
    for f in B.patterns:
        bpos |= _match_offsets(x, f, False)
    fit_rects = []
    for f in B.patterns:
        fr = f.rect
        sx0, sx1 = rect.lo[0] - fr.lo[0], rect.hi[0] - fr.hi[0]
        sy0, sy1 = rect.lo[1] - fr.lo[1], rect.hi[1] - fr.hi[1]
        if sx0 <= sx1 and sy0 <= sy1:
            fit_rects.append(Rect((sx0, sy0), (sx1, sy1)))
    for w in range(1, max_spacing + 1):
        for h in range(1, max_spacing + 1):
            for ax in range(rect.lo[0], rect.lo[0] + w):
                for ay in range(rect.lo[1], rect.lo[1] + h):
                    lat = Lattice((ax, ay), (w, h))
                    testable = [
                        g
                        for g in lattice_points_in(lat, rect)
                        if any(r.contains(g) for r in fit_rects)
                    ]
                    if len(testable) < min_points:
                        continue
                    if all(g in bpos for g in testable):
                        return lat
    return None


@dataclass(frozen=True)
class ColorGrid:
    """Rectangular window of small integer colors, rows listed low-y first."""

    rect: Rect
    colors: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.colors)
        if len(rows) != self.rect.height or any(len(r) != self.rect.width for r in rows):
            raise ValueError("color rows do not match the window size")
        object.__setattr__(self, "colors", rows)

    def color(self, g):
        return self.colors[g[1] - self.rect.lo[1]][g[0] - self.rect.lo[0]]

    def to_json(self):
        return {"rect": self.rect.to_json(), "colors": [list(r) for r in self.colors]}

    @classmethod
    def from_json(cls, data):
        return cls(Rect.from_json(data["rect"]), tuple(tuple(r) for r in data["colors"]))


def chromatic_check(c, k):
    """Proper k-coloring check: colors lie in range and 4-adjacent cells
    always differ."""
    arr = np.asarray(c.colors, dtype=np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= k):
        raise ValueError(f"colors out of range for k={k}")
    if arr.shape[1] > 1 and (arr[:, 1:] == arr[:, :-1]).any():
        return False
    if arr.shape[0] > 1 and (arr[1:, :] == arr[:-1, :]).any():
        return False
    return True


def largest_two_colored_rect(c):
    """Largest sub-window that is properly colored with at most two colors,
    ranked by (shorter side, area); ties prefer the lowest corner."""
    rect = c.rect
    arr = np.asarray(c.colors, dtype=np.int64)
    best = None
    best_key = None
    for a in range(rect.lo[0], rect.hi[0] + 1):
        for b in range(a, rect.hi[0] + 1):
            for cc in range(rect.lo[1], rect.hi[1] + 1):
                for d in range(cc, rect.hi[1] + 1):
                    sub = arr[
                        cc - rect.lo[1] : d - rect.lo[1] + 1,
                        a - rect.lo[0] : b - rect.lo[0] + 1,
                    ]
                    if len(np.unique(sub)) > 2:
                        continue
                    if sub.shape[1] > 1 and (sub[:, 1:] == sub[:, :-1]).any():
                        continue
                    if sub.shape[0] > 1 and (sub[1:, :] == sub[:-1, :]).any():
                        continue
                    w, h = b - a + 1, d - cc + 1
                    key = (min(w, h), w * h, (-a, -cc, -b, -d))
                    if best_key is None or key > best_key:
                        best_key = key
                        best = Rect.from_bounds(a, b, cc, d)
    return best
