"""Canonical serialization helpers.

Everything written to disk goes through ``canon_dumps`` so that reruns of
the same build produce byte-identical artifacts.
"""

import json


def canon_dumps(data):
    """Deterministic JSON: sorted keys, no whitespace."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def canon_loads(text):
    return json.loads(text)


def pgm_dumps(rows, maxval):
    """Plain-text PGM (P2). ``rows`` is a list of rows of ints, the first row
    being the TOP line of the image."""
    if not rows:
        raise ValueError("empty image")
    width = len(rows[0])
    lines = ["P2", f"{width} {len(rows)}", str(maxval)]
    for row in rows:
        if len(row) != width:
            raise ValueError("ragged image rows")
        lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"
