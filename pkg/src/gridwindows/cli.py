"""Command line front end.

Subcommands run a build schedule from a JSON spec (build-mt, build-gp),
re-check a saved certificate (verify), or evaluate the standalone checkers
(toast, markers). Build artifacts are written with canonical JSON so reruns
are byte-identical.

Exit codes: 0 the command ran (for toast/markers the verdict is in the
report), 2 bad spec or invalid request, 3 a resource limit was hit,
4 verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import gridperiod, mincolor
from .errors import ResourceLimitError
from .geometry import Rect
from .grid import Config
from .markers import (
    RectPartition,
    Toast,
    build_shifted_stack,
    check_fx_strict_growth,
    check_partition_props,
    check_segment_center_cover,
    fx_profile,
    toast_report,
)
from .serialize import canon_dumps, pgm_dumps

DEFAULT_LIMITS = {"max_side": 512, "max_steps": 256}


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _limits(spec, args):
    limits = dict(DEFAULT_LIMITS)
    limits.update(spec.get("limits") or {})
    if args.max_side is not None:
        limits["max_side"] = args.max_side
    if args.max_steps is not None:
        limits["max_steps"] = args.max_steps
    return limits


def _mt_schedule(entries):
    steps = []
    for entry in entries:
        op = entry.get("op")
        if op == "shift":
            steps.append(mincolor.Shift(tuple(int(v) for v in entry["t"])))
        elif op == "cover":
            steps.append(mincolor.Cover(tuple(int(v) for v in entry["g"])))
        elif op == "self_pattern":
            steps.append(mincolor.SelfPattern())
        elif op == "duplicate_odd":
            steps.append(mincolor.DuplicateOdd())
        else:
            raise ValueError(f"unknown mt op {op!r}")
    return steps


def _gp_schedule(entries):
    steps = []
    for entry in entries:
        op = entry.get("op")
        if op == "shift":
            steps.append(gridperiod.Shift(tuple(int(v) for v in entry["s"])))
        elif op == "line_clear":
            steps.append(gridperiod.LineClear(str(entry["axis"]), int(entry["index"])))
        elif op == "cover":
            steps.append(gridperiod.Cover(tuple(int(v) for v in entry["g"])))
        else:
            raise ValueError(f"unknown gp op {op!r}")
    return steps


def _emit_window(args, window, cert):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "window.json").write_text(canon_dumps(window.to_json()) + "\n")
    (out / "certificate.json").write_text(canon_dumps(cert.to_json()) + "\n")
    if args.format == "pgm":
        (out / "window.pgm").write_text(window.to_pgm())
    elif args.format == "ascii":
        (out / "window.txt").write_text(window.to_ascii())
    return out


def cmd_build_mt(args):
    spec = _load_json(args.spec)
    seed = mincolor.MtCondition(
        p=Config.from_json(spec["seed"]),
        shifts=(),
        patterns=(),
        odd_mode=bool(spec.get("odd", False)),
    )
    sched = _mt_schedule(spec.get("schedule", []))
    cert = mincolor.build_generic(seed, sched, _limits(spec, args))
    report = mincolor.verify_certificate(cert)
    _emit_window(args, cert.final.p, cert)
    print(canon_dumps(report))
    return 0 if report["ok"] else 4


def _hole_lattice_pgm(final, seed):
    """Mask of the residue class carrying the hole, in the seed block size."""
    rect = final.p.rect
    ux, uy = final.u
    w, h = seed.p.rect.width, seed.p.rect.height
    rows = []
    for y in range(rect.hi[1], rect.lo[1] - 1, -1):
        rows.append(
            [
                1 if (x - ux) % w == 0 and (y - uy) % h == 0 else 0
                for x in range(rect.lo[0], rect.hi[0] + 1)
            ]
        )
    return pgm_dumps(rows, 1)


def cmd_build_gp(args):
    spec = _load_json(args.spec)
    seed_data = spec["seed"]
    seed = gridperiod.GpCondition(
        n=int(seed_data["n"]), p=Config.from_json(seed_data["p"])
    )
    sched = _gp_schedule(spec.get("schedule", []))
    cert = gridperiod.build_generic_gp(seed, sched, _limits(spec, args))
    report = gridperiod.verify_gp_certificate(cert)
    out = _emit_window(args, cert.final.p, cert)
    if args.format == "pgm":
        (out / "hole_lattice.pgm").write_text(_hole_lattice_pgm(cert.final, seed))
    print(canon_dumps(report))
    return 0 if report["ok"] else 4


def cmd_verify(args):
    data = _load_json(args.spec)
    kind = data.get("kind")
    if kind == "mt":
        report = mincolor.verify_certificate(mincolor.Certificate.from_json(data))
    elif kind == "gp":
        report = gridperiod.verify_gp_certificate(gridperiod.GpCertificate.from_json(data))
    else:
        raise ValueError(f"unknown certificate kind {kind!r}")
    print(canon_dumps(report))
    return 0 if report["ok"] else 4


def _toast_pgm(t):
    win = t.window
    depth = {}
    for n, level in enumerate(t.levels):
        for cl in level:
            for g in cl:
                if win.contains(g):
                    depth[g] = max(depth.get(g, 0), n + 1)
    rows = []
    for y in range(win.hi[1], win.lo[1] - 1, -1):
        rows.append([depth.get((x, y), 0) for x in range(win.lo[0], win.hi[0] + 1)])
    return pgm_dumps(rows, max(1, len(t.levels)))


def cmd_toast(args):
    spec = _load_json(args.spec)
    t = Toast.from_json(spec["toast"])
    probes = [(int(g[0]), int(g[1])) for g in spec.get("probes", [])]
    report = toast_report(t)
    report["fx"] = [
        {"probe": [gx, gy], "profile": fx_profile(t, (gx, gy))} for (gx, gy) in probes
    ]
    if t.layered:
        growth = check_fx_strict_growth(t, probes)
        report["growth"] = {
            "ok": growth.ok,
            "failures": [[[gx, gy], n] for ((gx, gy), n) in growth.failures],
            "uncovered": [[gx, gy] for (gx, gy) in growth.uncovered],
        }
    else:
        report["growth"] = None
    if args.out is not None and args.format == "pgm":
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "toast.pgm").write_text(_toast_pgm(t))
    print(canon_dumps(report))
    return 0


def _markers_stack(args, spec):
    a = int(spec["a"])
    m = 2 * a + 1
    side = int(spec.get("side", 5 * m * m))
    win = Rect.from_bounds(0, side - 1, 0, side - 1)
    long_ok, _ = check_segment_center_cover(a, win, 2 * m * m + 1)
    short_ok, _ = check_segment_center_cover(a, win, m)
    report = {
        "a": a,
        "window": win.to_json(),
        "threshold": 2 * m * m,
        "segment_pass": {"len": 2 * m * m + 1, "ok": long_ok},
        "segment_short": {"len": m, "ok": short_ok},
    }
    if args.out is not None and args.format == "pgm":
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        bits = np.zeros((m, m), dtype=np.uint8)
        bits[a, a] = 1
        marker = Config(Rect.from_bounds(-a, a, -a, a), bits)
        (out / "stack.pgm").write_text(build_shifted_stack(marker, side - 1).to_pgm())
    print(canon_dumps(report))
    return 0


def _markers_partitions(args, spec):
    window = Rect.from_json(spec["window"])
    parts = [
        RectPartition(
            level=int(entry["level"]),
            rects=tuple(Rect.from_json(r) for r in entry["rects"]),
            window=window,
        )
        for entry in spec["levels"]
    ]
    probes = [(int(g[0]), int(g[1])) for g in spec.get("probes", [])]
    print(canon_dumps(check_partition_props(parts, probes)))
    return 0


def cmd_markers(args):
    spec = _load_json(args.spec)
    demo = spec.get("demo")
    if demo == "shifted_stack":
        return _markers_stack(args, spec)
    if demo == "partitions":
        return _markers_partitions(args, spec)
    raise ValueError(f"unknown markers demo {demo!r}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gridwin",
        description="Build, check and render certified window extensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_required):
        p.add_argument("--spec", required=True, help="path to a JSON spec")
        p.add_argument("--out", required=out_required, default=None,
                       help="directory for artifacts")
        p.add_argument("--format", choices=("json", "pgm", "ascii"),
                       default="json", help="extra window rendering")

    for name, func, helptext in (
        ("build-mt", cmd_build_mt, "run a two-coloring build schedule"),
        ("build-gp", cmd_build_gp, "run a grid-periodicity build schedule"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p, True)
        p.add_argument("--max-side", type=int, default=None,
                       help="override the spec's window side limit")
        p.add_argument("--max-steps", type=int, default=None,
                       help="override the spec's schedule length limit")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="re-check a saved certificate")
    p.add_argument("--spec", required=True, help="path to certificate.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("toast", help="check a toast spec")
    common(p, False)
    p.set_defaults(func=cmd_toast)

    p = sub.add_parser("markers", help="run a marker demo")
    common(p, False)
    p.set_defaults(func=cmd_markers)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
