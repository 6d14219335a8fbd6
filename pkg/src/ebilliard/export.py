"""CSV tables and static SVG figures."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .billiard import Billiard, orbit
from .centers import center

LOCUS_HEADER = ("t_deg", "x", "y", "flag")
PROFILE_HEADER = ("t_deg", "tprime_deg_unwrapped", "flag")
BALLET_HEADER = ("t_deg", "gap_deg", "gap_euclid")


def fmt(v: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return format(float(v), ".17g")


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


class LocusTable(NamedTuple):
    t_deg: np.ndarray
    points: np.ndarray
    flags: np.ndarray


def locus_table(L) -> LocusTable:
    return LocusTable(np.degrees(L.t), L.points, np.asarray(L.flags, dtype=str))


def locus_csv(L) -> str:
    tab = L if isinstance(L, LocusTable) else locus_table(L)
    rows = ((fmt(t), fmt(x), fmt(y), f) for t, (x, y), f in zip(tab.t_deg, tab.points, tab.flags))
    return _table(LOCUS_HEADER, rows)


def read_locus_csv(text: str) -> LocusTable:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != LOCUS_HEADER:
        raise ValueError(f"locus CSV must start with header {','.join(LOCUS_HEADER)}")
    body = rows[1:]
    t = np.array([float(r[0]) for r in body])
    pts = np.array([[float(r[1]), float(r[2])] for r in body]).reshape(-1, 2)
    flags = np.array([r[3] for r in body], dtype=str)
    bad = set(flags) - {"ok", "gap", "divergent"}
    if bad:
        raise ValueError(f"unknown locus flags {sorted(bad)}")
    return LocusTable(t, pts, flags)


def profile_csv(P) -> str:
    rows = ((fmt(math.degrees(t)), fmt(math.degrees(u)), f) for t, u, f in zip(P.t, P.unwrapped, P.flags))
    return _table(PROFILE_HEADER, rows)


def ballet_csv(b) -> str:
    rows = ((fmt(math.degrees(t)), fmt(g), fmt(e)) for t, g, e in zip(b.t, b.gap_deg, b.gap_euclid))
    return _table(BALLET_HEADER, rows)


# --- SVG ----------------------------------------------------------------


def _n(v: float) -> str:
    return f"{v:.6f}"


class _Svg:
    def __init__(self, B: Billiard, pad: float = 0.10):
        self.B = B
        w, h = 2 * B.a, 2 * B.b
        self.box = (-B.a - pad * w, -B.b - pad * h, w * (1 + 2 * pad), h * (1 + 2 * pad))
        self.stroke = 0.004 * max(w, h)
        self.parts: list[str] = []

    def ellipse(self, rx, ry, color, cls, dash=False):
        extra = f' stroke-dasharray="{_n(3 * self.stroke)},{_n(2 * self.stroke)}"' if dash else ""
        self.parts.append(
            f'<ellipse class="{cls}" cx="0" cy="0" rx="{_n(rx)}" ry="{_n(ry)}" fill="none" '
            f'stroke="{color}" stroke-width="{_n(self.stroke)}"{extra}/>'
        )

    def polyline(self, pts, color, cls, closed=False):
        tag = "polygon" if closed else "polyline"
        coords = " ".join(f"{_n(x)},{_n(y)}" for x, y in pts)
        self.parts.append(
            f'<{tag} class="{cls}" points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{_n(self.stroke)}" stroke-linejoin="round"/>'
        )

    def dot(self, p, color, cls, r=None):
        r = r or 3 * self.stroke
        self.parts.append(f'<circle class="{cls}" cx="{_n(p[0])}" cy="{_n(p[1])}" r="{_n(r)}" fill="{color}"/>')

    def reference_curves(self):
        ac, bc = self.B.caustic_axes
        self.ellipse(self.B.a, self.B.b, "black", "billiard")
        self.ellipse(ac, bc, "gray", "caustic", dash=True)

    def render(self, title: str = "") -> str:
        x, y, w, h = self.box
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{_n(x)} {_n(y)} {_n(w)} {_n(h)}">\n'
        )
        body = f"<title>{title}</title>\n" if title else ""
        # math y-up inside the group
        body += '<g transform="scale(1,-1)">\n' + "\n".join(self.parts) + "\n</g>\n"
        return head + body + "</svg>\n"


def _runs(points, ok):
    """Consecutive runs of valid samples, the last joined to the first when the locus is closed."""
    runs, cur = [], []
    for p, good in zip(points, ok):
        if good:
            cur.append(p)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        if runs and ok[0]:
            runs[0] = cur + runs[0]
        else:
            runs.append(cur)
    if len(runs) == 1 and all(ok):
        runs[0] = runs[0] + [runs[0][0]]
    return runs


def locus_svg(L, crossings=None, title: str = "") -> str:
    svg = _Svg(L.billiard)
    svg.reference_curves()
    for run in _runs(L.points, np.asarray(L.ok)):
        svg.polyline(run, "#7b2cbf", "locus")
    for c in crossings or ():
        svg.dot(c.point, "#d62828", "crossing")
    return svg.render(title)


def ballet_frame_svg(B: Billiard, t: float, ida=88, idb=162) -> str:
    svg = _Svg(B)
    svg.reference_curves()
    o = orbit(B, t)
    svg.polyline(o.vertices, "#1d4ed8", "orbit", closed=True)
    svg.dot(center(o.vertices, ida), "#d62828", "center-a")
    svg.dot(center(o.vertices, idb), "#2a9d8f", "center-b")
    return svg.render(f"t = {math.degrees(t):.3f} deg")


def write_frames(B: Billiard, out_dir, frames: int, ida=88, idb=162) -> list[Path]:
    """``frames`` numbered SVGs over one t-circuit."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(frames)))
    paths = []
    for k in range(frames):
        p = out / f"frame_{k:0{width}d}.svg"
        p.write_text(ballet_frame_svg(B, 2 * math.pi * k / frames, ida, idb))
        paths.append(p)
    return paths


