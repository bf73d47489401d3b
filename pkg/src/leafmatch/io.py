"""Contour text files and binary-mask boundary tracing.

Contour files hold one ``x,y`` pair per line, optionally preceded by a
``# closed`` or ``# open`` header. Files without a header are read as closed.
"""

import numpy as np

from .geometry import Contour, Curve, OpenCurve, signed_area

_MOORE = ((0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1))


def read_points(path):
    """Points and the ``closed`` flag of a contour text file."""
    closed = True
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                tag = s[1:].strip().lower()
                if tag in ("closed", "open"):
                    closed = tag == "closed"
                continue
            parts = s.replace(";", ",").split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'x,y', got {s!r}")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number pair: {s!r}") from None
    if not rows:
        raise ValueError(f"{path}: no points")
    return np.array(rows, dtype=np.float64), closed


def _dedupe(pts, closed):
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(pts[1:] != pts[:-1], axis=1)
    pts = pts[keep]
    if closed and len(pts) > 1 and np.all(pts[0] == pts[-1]):
        pts = pts[:-1]
    return pts


def as_curve(pts, closed):
    """Wrap raw points as a Contour (made CCW) or OpenCurve, dropping repeats."""
    pts = _dedupe(np.asarray(pts, dtype=np.float64), closed)
    if closed:
        if signed_area(pts) < 0:
            pts = pts[::-1]
        return Contour(pts)
    return OpenCurve(pts)


def read_curve(path):
    pts, closed = read_points(path)
    return as_curve(pts, closed)


def format_curve(curve):
    pts = curve.points if isinstance(curve, Curve) else np.asarray(curve)
    head = "# closed" if getattr(curve, "closed", True) else "# open"
    lines = [head] + [f"{x!r},{y!r}" for x, y in pts.tolist()]
    return "\n".join(lines) + "\n"


def write_curve(path, curve):
    with open(path, "w") as fh:
        fh.write(format_curve(curve))


def trace_boundary(mask):
    """Outer boundary of the first foreground blob (raster order), Moore 8-connected.

    Returns pixel centres as ``(x, y)`` with ``y`` pointing up.
    """
    m = np.pad(np.asarray(mask, dtype=bool), 1)
    fg = np.argwhere(m)
    if len(fg) == 0:
        raise ValueError("mask has no foreground pixels")
    start = tuple(int(v) for v in fg[0])
    back = (start[0], start[1] - 1)
    cur = start
    second = None
    path = [start]
    limit = 4 * m.size
    for _ in range(limit):
        idx = _MOORE.index((back[0] - cur[0], back[1] - cur[1]))
        found = None
        for k in range(1, 9):
            dr, dc = _MOORE[(idx + k) % 8]
            p = (cur[0] + dr, cur[1] + dc)
            if m[p]:
                found = p
                break
            back = p
        if found is None:
            break  # isolated pixel
        if second is None:
            second = found
        elif cur == start and found == second:
            break
        path.append(found)
        cur = found
    if len(path) > 1 and path[-1] == start:
        path.pop()
    rc = np.array(path, dtype=np.float64) - 1.0
    return np.column_stack([rc[:, 1], -rc[:, 0]])


def read_mask(path):
    """Boundary contour of a binary image (PGM or any format Pillow reads)."""
    from PIL import Image

    with Image.open(path) as im:
        arr = np.asarray(im.convert("L"), dtype=np.float64)
    lo, hi = arr.min(), arr.max()
    if hi <= lo:
        raise ValueError(f"{path}: image is blank")
    pts = trace_boundary(arr > 0.5 * (lo + hi))
    if len(pts) < Contour.min_points:
        raise ValueError(f"{path}: traced boundary too small ({len(pts)} pixels)")
    return as_curve(pts, True)


MASK_SUFFIXES = (".pgm", ".pbm", ".png", ".bmp")


def read_any(path):
    """Contour text file or binary mask, chosen by suffix."""
    if str(path).lower().endswith(MASK_SUFFIXES):
        return read_mask(path)
    return read_curve(path)
