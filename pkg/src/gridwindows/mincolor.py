"""Window conditions carrying shift and pattern witnesses, and the builder
that grows them by block tilings.

A condition is a hole-free window p together with a list of shifts, each
holding a witness set T for the two-coloring clause, and a list of
patterns, each holding a witness set F for both polarities. Every grow
operation tiles whole copies of the current window (some complemented), so
previously installed witness sets keep working: for any position, the probe
cells land inside that position's own block, where values are an exact
(possibly complemented) copy of the window the witness was built for.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError
from .geometry import Rect
from .grid import HOLE, Config, tile
from .witness import (
    _pattern_ok_grid,
    _shift_ok_grid,
    _slices,
    check_pattern_witness,
    check_shift_witness,
    window_two_coloring_check,
)


@dataclass(frozen=True)
class Violation:
    clause: str
    index: object
    g: object


@dataclass(frozen=True)
class MtCondition:
    """p with shift witnesses ((t, T), ...) and pattern witnesses
    ((f, F), ...); odd_mode forces odd side lengths throughout."""

    p: Config
    shifts: tuple
    patterns: tuple
    odd_mode: bool

    def to_json(self):
        return {
            "p": self.p.to_json(),
            "odd": self.odd_mode,
            "shifts": [
                {"t": [t[0], t[1]], "T": sorted([x, y] for (x, y) in T)}
                for (t, T) in self.shifts
            ],
            "patterns": [
                {"f": f.to_json(), "F": sorted([x, y] for (x, y) in F)}
                for (f, F) in self.patterns
            ],
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            p=Config.from_json(data["p"]),
            shifts=tuple(
                (
                    (int(e["t"][0]), int(e["t"][1])),
                    frozenset((int(x), int(y)) for x, y in e["T"]),
                )
                for e in data["shifts"]
            ),
            patterns=tuple(
                (
                    Config.from_json(e["f"]),
                    frozenset((int(x), int(y)) for x, y in e["F"]),
                )
                for e in data["patterns"]
            ),
            odd_mode=bool(data["odd"]),
        )


def _first_bad(rect, mask):
    if not mask.any():
        return None
    ys, xs = np.nonzero(mask)
    return min((int(x) + rect.lo[0], int(y) + rect.lo[1]) for x, y in zip(xs, ys))


def validate(c):
    """All violations of the condition's clauses. Structural problems are
    reported alone, since the witness clauses assume a well-formed input."""
    vs = []
    if not c.p.hole_free():
        vs.append(Violation("structure", None, None))
    if c.odd_mode and (c.p.rect.width % 2 == 0 or c.p.rect.height % 2 == 0):
        vs.append(Violation("structure", None, None))
    for i, (t, _T) in enumerate(c.shifts):
        if tuple(t) == (0, 0):
            vs.append(Violation("structure", i, None))
    for j, (f, _F) in enumerate(c.patterns):
        if not f.hole_free():
            vs.append(Violation("structure", j, None))
    if vs:
        return vs
    defined = c.p.array != HOLE
    for i, (t, T) in enumerate(c.shifts):
        g = _first_bad(c.p.rect, defined & ~_shift_ok_grid(c.p, t, T))
        if g is not None:
            vs.append(Violation("a", i, g))
    for j, (f, F) in enumerate(c.patterns):
        for clause, flipped in (("b1", False), ("b2", True)):
            g = _first_bad(c.p.rect, defined & ~_pattern_ok_grid(c.p, f, F, flipped))
            if g is not None:
                vs.append(Violation(clause, j, g))
    return vs


def is_extension(c1, c2):
    """c1 extends c2: same mode, c2's witnesses are a prefix of c1's, and
    the windows agree where c2 is defined."""
    if c1.odd_mode != c2.odd_mode:
        return False
    if len(c1.shifts) < len(c2.shifts) or c1.shifts[: len(c2.shifts)] != c2.shifts:
        return False
    if len(c1.patterns) < len(c2.patterns) or c1.patterns[: len(c2.patterns)] != c2.patterns:
        return False
    if not c1.p.rect.contains_rect(c2.p.rect):
        return False
    return c1.p.restrict(c2.p.rect) == c2.p


def _reflect_config(cfg, fx, fy, about=None):
    """Mirror a window along the chosen axes, about the center of ``about``
    (default: its own center, which keeps the rect in place)."""
    if not fx and not fy:
        return cfg
    arr = cfg.array
    if fx:
        arr = arr[:, ::-1]
    if fy:
        arr = arr[::-1, :]
    base = cfg.rect if about is None else about
    sx = base.lo[0] + base.hi[0]
    sy = base.lo[1] + base.hi[1]
    r = cfg.rect
    lo = (sx - r.hi[0] if fx else r.lo[0], sy - r.hi[1] if fy else r.lo[1])
    hi = (sx - r.lo[0] if fx else r.hi[0], sy - r.lo[1] if fy else r.hi[1])
    return Config(Rect(lo, hi), arr)


def _lex_least_differing(p, t):
    """Least position u (by x, then y) with u and u+t defined in the window
    and carrying different values, or None."""
    rect = p.rect
    r = rect.intersect(rect.translate((-t[0], -t[1])))
    if r is None:
        return None
    arr = p.array
    au = arr[_slices(rect, r)]
    av = arr[_slices(rect, r.translate(t))]
    m = (au != HOLE) & (av != HOLE) & (au != av)
    if not m.any():
        return None
    ys, xs = np.nonzero(m)
    return min((int(x) + r.lo[0], int(y) + r.lo[1]) for x, y in zip(xs, ys))


def extend_cover(c, g):
    """Grow the window by whole unflipped copies until it contains g."""
    if c.p.rect.contains(g):
        return c
    a, b, cc, d = c.p.rect.bounds()
    cnt_x, lo_x = _cover_axis(g[0], a, b, c.p.rect.width, c.odd_mode)
    cnt_y, lo_y = _cover_axis(g[1], cc, d, c.p.rect.height, c.odd_mode)
    newp = tile(c.p, (cnt_x, cnt_y), lambda i, j: False, (lo_x, lo_y))
    return MtCondition(newp, c.shifts, c.patterns, c.odd_mode)


def _cover_axis(gx, a, b, w, odd):
    if gx > b:
        cnt = (gx - a) // w + 1
        if odd and cnt % 2 == 0:
            cnt += 1
        return cnt, a
    if gx < a:
        cnt = (b - gx) // w + 1
        if odd and cnt % 2 == 0:
            cnt += 1
        return cnt, b - cnt * w + 1
    return 1, a


def extend_shift(c, t):
    """Install shift t with a valid witness set.

    When the current window already shows a differing pair at offset t, the
    witness set points every position at that pair and the window is left
    alone. Otherwise the window is tiled out so that its high corner can be
    compared against its image under t, flipping the block the image lands
    in when the unflipped tiling would make the two values agree.
    """
    t = (int(t[0]), int(t[1]))
    if t == (0, 0):
        raise ValueError("shift must be nonzero")
    for (s, _T) in c.shifts:
        if s == t:
            return c
    u = _lex_least_differing(c.p, t)
    if u is not None:
        T = frozenset((u[0] - gx, u[1] - gy) for (gx, gy) in c.p.rect.points())
        return MtCondition(c.p, c.shifts + ((t, T),), c.patterns, c.odd_mode)
    fx, fy = t[0] < 0, t[1] < 0
    q = _reflect_config(c.p, fx, fy)
    tt = (abs(t[0]), abs(t[1]))
    a, b, cc, d = q.rect.bounds()
    w, h = q.rect.width, q.rect.height
    i0 = (w - 1 + tt[0]) // w
    j0 = (h - 1 + tt[1]) // h
    if c.odd_mode:
        i0 += i0 % 2
        j0 += j0 % 2
    bi = (b + tt[0] - a) // w
    bj = (d + tt[1] - cc) // h
    grown = tile(q, (i0 + 1, j0 + 1), lambda i, j: False, (a, cc))
    if grown.value((b, d)) == grown.value((b + tt[0], d + tt[1])):
        grown = tile(q, (i0 + 1, j0 + 1), lambda i, j: (i, j) == (bi, bj), (a, cc))
    T = frozenset(Rect.from_bounds(-i0 * w, b - a, -j0 * h, d - cc).points())
    newp = _reflect_config(grown, fx, fy, about=c.p.rect)
    T = frozenset(((-x if fx else x), (-y if fy else y)) for (x, y) in T)
    return MtCondition(newp, c.shifts + ((t, T),), c.patterns, c.odd_mode)


def extend_pattern(c):
    """Append the current window as a pattern of the condition, doubling the
    window with a complemented copy (plus a plain third copy in odd mode)
    so both polarities occur. The witness box covers a full block period,
    so it keeps working under all later tilings."""
    q = c.p
    a, b, cc, d = q.rect.bounds()
    copies = 3 if c.odd_mode else 2
    newp = tile(q, (copies, 1), lambda i, j: i == 1, (a, cc))
    # Offsets reaching both polarities from every cell of any window built
    # from whole copies of the doubled block, flips included.
    F = frozenset(Rect.from_bounds(a - 2 * b - 1, b - 2 * a + 1, -d, -cc).points())
    return MtCondition(newp, c.shifts, c.patterns + ((q, F),), c.odd_mode)


def duplicate_odd(c):
    """Three plain copies side by side (keeping the width odd). Returns the
    new condition and the offset between consecutive copies."""
    if not c.odd_mode:
        raise ValueError("duplicate_odd requires an odd-mode condition")
    q = c.p
    newp = tile(q, (3, 1), lambda i, j: False, q.rect.lo)
    return MtCondition(newp, c.shifts, c.patterns, c.odd_mode), (q.rect.width, 0)


@dataclass(frozen=True)
class Shift:
    t: tuple


@dataclass(frozen=True)
class Cover:
    g: tuple


@dataclass(frozen=True)
class SelfPattern:
    pass


@dataclass(frozen=True)
class DuplicateOdd:
    pass


@dataclass
class Certificate:
    seed: MtCondition
    final: MtCondition
    steps: list
    limits: dict
    chain: tuple = field(default=(), compare=False, repr=False)

    def to_json(self):
        return {
            "kind": "mt",
            "seed": self.seed.to_json(),
            "final": self.final.to_json(),
            "steps": self.steps,
            "limits": self.limits,
        }

    @classmethod
    def from_json(cls, data):
        if data.get("kind") != "mt":
            raise ValueError("not an mt certificate")
        return cls(
            seed=MtCondition.from_json(data["seed"]),
            final=MtCondition.from_json(data["final"]),
            steps=list(data["steps"]),
            limits=dict(data["limits"]),
        )


def build_generic(start, sched, limits):
    """Run a schedule of grow requests, recording each step. Deterministic:
    the same start and schedule always give the same certificate."""
    max_side = int(limits["max_side"])
    max_steps = int(limits["max_steps"])
    vs = validate(start)
    if vs:
        raise ValueError(f"invalid start condition (clause {vs[0].clause})")
    if len(sched) > max_steps:
        raise ResourceLimitError(
            f"schedule has {len(sched)} steps, limit is {max_steps}"
        )
    cur = start
    chain = [start]
    steps = []
    for req in sched:
        if isinstance(req, Cover):
            g = (int(req.g[0]), int(req.g[1]))
            cur = extend_cover(cur, g)
            rec = {"req": {"op": "cover", "g": [g[0], g[1]]}}
        elif isinstance(req, Shift):
            t = (int(req.t[0]), int(req.t[1]))
            before = len(cur.shifts)
            cur = extend_shift(cur, t)
            rec = {
                "req": {"op": "shift", "t": [t[0], t[1]]},
                "mode": "noop" if len(cur.shifts) == before else "extend",
            }
        elif isinstance(req, SelfPattern):
            cur = extend_pattern(cur)
            rec = {"req": {"op": "self_pattern"}, "pattern_index": len(cur.patterns) - 1}
        elif isinstance(req, DuplicateOdd):
            if not cur.odd_mode:
                raise ValueError("duplicate_odd outside odd mode")
            w = cur.p.rect.width
            cur, off = duplicate_odd(cur)
            rec = {
                "req": {"op": "duplicate_odd"},
                "offset": [off[0], off[1]],
                "placements": [[0, 0], [w, 0]],
            }
        else:
            raise ValueError(f"unknown build step {req!r}")
        if max(cur.p.rect.width, cur.p.rect.height) > max_side:
            raise ResourceLimitError(
                f"window side {max(cur.p.rect.width, cur.p.rect.height)} exceeds "
                f"max_side={max_side}"
            )
        chain.append(cur)
        steps.append(rec)
    return Certificate(
        seed=start,
        final=cur,
        steps=steps,
        limits={"max_side": max_side, "max_steps": max_steps},
        chain=tuple(chain),
    )


def verify_certificate(cert):
    """Recompute every witness clause on the final window."""
    seed, final = cert.seed, cert.final
    checks = [
        {"name": "seed validate", "ok": validate(seed) == []},
        {"name": "final validate", "ok": validate(final) == []},
        {"name": "final extends seed", "ok": is_extension(final, seed)},
    ]
    for i, (t, T) in enumerate(final.shifts):
        checks.append(
            {
                "name": f"shift[{i}] t=({t[0]},{t[1]}) clause a",
                "ok": check_shift_witness(final.p, t, T),
            }
        )
        checks.append(
            {
                "name": f"shift[{i}] t=({t[0]},{t[1]}) window two-coloring",
                "ok": window_two_coloring_check(final.p, t, T),
            }
        )
    for j, (f, F) in enumerate(final.patterns):
        checks.append(
            {"name": f"pattern[{j}] clause b1", "ok": check_pattern_witness(final.p, f, F, False)}
        )
        checks.append(
            {"name": f"pattern[{j}] clause b2", "ok": check_pattern_witness(final.p, f, F, True)}
        )
    if final.odd_mode:
        checks.append(
            {
                "name": "odd sides",
                "ok": final.p.rect.width % 2 == 1 and final.p.rect.height % 2 == 1,
            }
        )
    return {"ok": all(ch["ok"] for ch in checks), "checks": checks}
