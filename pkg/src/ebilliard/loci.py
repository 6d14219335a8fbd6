"""Loci of triangle centers over the 3-periodic family and their classification."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import triangle as tri
from ._backend import STATUS_INFINITY, STATUS_OK, STATUS_UNDEFINED
from ._numerics import golden_section
from .billiard import TWO_PI, Billiard, orbit, orbit_family, right_triangle_params, shape_class
from .centers import center_batch, entry, normalize_id
from .conics import Ellipse, fit_conic
from .errors import DomainError

DEFAULT_N = 2048
EXPORT_N = 360
BLOWUP = 1e6
LIMIT_STEP = 1e-5
GAP_WARN_FRACTION = 0.10


def center_on_family(B: Billiard, cid, t) -> tuple[np.ndarray, np.ndarray]:
    """Center ``cid`` of the orbits at each ``t``: ``(points, status)``."""
    return center_batch(orbit_family(B, t), cid)


def _one_sided_limit(B, cid, t, h=LIMIT_STEP, tol=1e-8):
    """Limit of the center at ``t`` from both sides, or None if they disagree."""
    ts = np.array([t + h, t + 2 * h, t - h, t - 2 * h])
    p, st = center_on_family(B, cid, ts)
    if np.any(st != STATUS_OK):
        return None
    right = 2 * p[0] - p[1]
    left = 2 * p[2] - p[3]
    if np.hypot(*(right - left)) > tol * max(1.0, np.hypot(*right)):
        return None
    return (right + left) / 2


def locus_period(B: Billiard, t0: float = 0.0) -> float:
    """Advance in ``t`` after which the orbit repeats with relabelled vertices.

    Every center locus is traced once per period and three times per
    circuit of ``t``.
    """
    P = orbit_family(B, [t0])[0]
    return float((B.param(P[1]) - t0) % TWO_PI)


@dataclass(frozen=True, eq=False)
class Locus:
    """Center positions sampled at increasing ``t`` in ``[0, 2pi)``.

    ``flags`` holds 'ok', 'gap' (undefined center) or 'divergent' (beyond
    the blow-up radius or at infinity); non-ok points are NaN.
    """

    center: int | str
    billiard: Billiard
    t: np.ndarray
    points: np.ndarray
    flags: np.ndarray
    closed: bool = True
    blowup: float = BLOWUP

    @property
    def ok(self):
        return self.flags == "ok"

    @property
    def gap_fraction(self):
        return float(np.mean(self.flags == "gap"))

    @property
    def warning(self):
        return self.gap_fraction > GAP_WARN_FRACTION

    @property
    def period(self):
        return locus_period(self.billiard)

    def evaluate(self, t):
        """Re-evaluate the center at arbitrary ``t`` (NaN where undefined)."""
        p, _ = center_on_family(self.billiard, self.center, np.atleast_1d(t))
        return p

    def divergent_t(self):
        return self.t[self.flags == "divergent"]


def sample_locus(B: Billiard, cid, n: int = DEFAULT_N, blowup: float = BLOWUP) -> Locus:
    """Sample center ``cid`` at ``n`` uniform ``t`` in ``[0, 2pi)``."""
    if n < 8:
        raise DomainError("sample_locus needs n >= 8")
    cid = normalize_id(cid)
    entry(cid)
    t = np.arange(n) * TWO_PI / n
    pts, st = center_on_family(B, cid, t)
    pts = pts.copy()
    flags = np.full(n, "ok", dtype=object)
    for i in np.flatnonzero(st == STATUS_UNDEFINED):
        lim = _one_sided_limit(B, cid, t[i])
        if lim is None:
            flags[i] = "gap"
        else:
            pts[i] = lim
    with np.errstate(invalid="ignore"):
        far = np.hypot(pts[:, 0], pts[:, 1]) > blowup
    flags[(st == STATUS_INFINITY) | far] = "divergent"
    pts[flags != "ok"] = np.nan
    return Locus(cid, B, t, pts, flags.astype(str), True, blowup)


def fit_locus(L: Locus):
    """Conic fit to the finite samples of a locus: ``(conic, residual)``."""
    return fit_conic(L.points[L.ok])


def x4_locus_axes(B: Billiard) -> tuple[float, float]:
    """Semi-axes ``(k4/a, k4/b)`` of the orthocenter locus."""
    a, b = B.a, B.b
    k4 = ((a * a + b * b) * B.delta - 2 * a * a * b * b) / B.c2
    return k4 / a, k4 / b


def x40_locus_axes(B: Billiard) -> tuple[float, float]:
    """Semi-axes ``(c^2/a, c^2/b)`` of the Bevan-point locus."""
    return B.c2 / B.a, B.c2 / B.b


# --- self-intersections -------------------------------------------------


class Crossing(NamedTuple):
    point: np.ndarray
    t_pair: tuple[float, float]  # radians
    t_pair_deg: tuple[float, float]
    transversal: bool
    residual: float


def _segments_intersect(p0, p1, q0, q1):
    """Vectorised proper intersection of segment p0p1 with segments q0[k]q1[k]."""
    d = p1 - p0
    e = q1 - q0
    den = d[0] * e[:, 1] - d[1] * e[:, 0]
    w = q0 - p0
    with np.errstate(divide="ignore", invalid="ignore"):
        u = (w[:, 0] * e[:, 1] - w[:, 1] * e[:, 0]) / den
        v = (w[:, 0] * d[1] - w[:, 1] * d[0]) / den
    hit = (den != 0) & (u >= 0) & (u < 1) & (v >= 0) & (v < 1)
    return hit, u, v


def _refine_crossing(fn, u, v, iters=50, h=1e-7):
    x = np.array([u, v], dtype=float)
    J = np.eye(2)
    for _ in range(iters):
        F = fn(x[0]) - fn(x[1])
        if not np.all(np.isfinite(F)):
            return None
        if np.max(np.abs(F)) < 1e-14:
            break
        J = np.column_stack(
            [(fn(x[0] + h) - fn(x[0] - h)) / (2 * h), -(fn(x[1] + h) - fn(x[1] - h)) / (2 * h)]
        )
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return x, F, J
        x = x + step
    F = fn(x[0]) - fn(x[1])
    return x, F, J


def self_intersections(L: Locus, min_samples: int = 200, tangential_tol: float = 1e-6) -> list[Crossing]:
    """Transversal self-crossings over one traversal of the locus.

    Candidates come from segment-pair tests on the sampled polyline (the
    samples in ``[0, period)``, closed at ``period``) and are refined by
    Newton on ``X(u) - X(v) = 0``. Near-parallel contacts are reported with
    ``transversal=False`` and left unrefined.
    """
    period = L.period
    keep = L.t < period
    if keep.sum() < min_samples:
        raise DomainError(f"need >= {min_samples} samples per traversal, got {int(keep.sum())}")
    t = np.append(L.t[keep], period)
    pts = np.vstack([L.points[keep], L.evaluate(period)])
    fn = lambda s: L.evaluate(s)[0]
    m = len(t) - 1
    good = np.isfinite(pts).all(axis=1)
    seg_ok = good[:-1] & good[1:]
    found = []
    for i in range(m):
        if not seg_ok[i]:
            continue
        js = np.arange(i + 2, m)
        if i == 0:
            js = js[js != m - 1]
        js = js[seg_ok[js]]
        if js.size == 0:
            continue
        hit, u, v = _segments_intersect(pts[i], pts[i + 1], pts[js], pts[js + 1])
        for k in np.flatnonzero(hit):
            j = js[k]
            tu = t[i] + u[k] * (t[i + 1] - t[i])
            tv = t[j] + v[k] * (t[j + 1] - t[j])
            d = pts[i + 1] - pts[i]
            e = pts[j + 1] - pts[j]
            sin_angle = abs(d[0] * e[1] - d[1] * e[0]) / (np.hypot(*d) * np.hypot(*e))
            if sin_angle < tangential_tol:
                p = pts[i] + u[k] * d
                found.append(Crossing(p, (tu, tv), (math.degrees(tu), math.degrees(tv)), False, math.nan))
                continue
            sol = _refine_crossing(fn, tu, tv)
            if sol is None:
                continue
            x, F, _ = sol
            x = np.sort(x % TWO_PI)
            p = fn(x[0])
            found.append(
                Crossing(p, (float(x[0]), float(x[1])), (math.degrees(x[0]), math.degrees(x[1])), True,
                         float(np.max(np.abs(F))))
            )
    # a crossing seen from two adjacent segment pairs is reported once
    out: list[Crossing] = []
    for c in found:
        if all(np.hypot(*(c.point - o.point)) > 1e-7 for o in out):
            out.append(c)
    out.sort(key=lambda c: (c.point[1], c.point[0]))
    return out


# --- compactness --------------------------------------------------------


@dataclass(frozen=True)
class Compactness:
    bounded: bool
    max_radius: float
    divergence_t: tuple[float, ...] = ()  # over the full t circuit, radians
    divergence_t_traversal: tuple[float, ...] = ()  # those in [0, period)


def compactness(L: Locus, blowup: float | None = None) -> Compactness:
    """Bounded or not, with the parameters where the center escapes to infinity.

    The inverted point ``X / |X|^2`` passes through the origin exactly when
    ``X`` goes through infinity; local minima of its norm over the samples
    are refined by golden-section search.
    """
    blowup = L.blowup if blowup is None else blowup
    B, cid = L.billiard, L.center

    def inv_norm(s):
        p, st = center_on_family(B, cid, np.array([s]))
        if st[0] == STATUS_INFINITY:
            return 0.0
        r = float(np.hypot(*p[0]))
        return 1.0 / r if np.isfinite(r) and r > 0 else math.inf

    q = np.array(
        [0.0 if f == "divergent" else (1.0 / np.hypot(*p) if f == "ok" else math.inf) for p, f in zip(L.points, L.flags)]
    )
    n = len(q)
    h = TWO_PI / n
    roots = []
    for i in range(n):
        if q[i] <= q[i - 1] and q[i] <= q[(i + 1) % n] and q[i] < math.inf:
            x, fx = golden_section(inv_norm, L.t[i] - h, L.t[i] + h, tol=1e-13)
            if fx < 1.0 / blowup:
                roots.append(x % TWO_PI)
    roots = sorted(roots)
    dedup = []
    for r in roots:
        if not dedup or min(abs(r - dedup[-1]), TWO_PI - abs(r - dedup[-1])) > 1e-9:
            dedup.append(r)
    if len(dedup) > 1 and TWO_PI - (dedup[-1] - dedup[0]) < 1e-9:
        dedup.pop()
    finite = L.points[L.ok]
    rmax = float(np.hypot(finite[:, 0], finite[:, 1]).max()) if len(finite) else math.inf
    if not dedup:
        return Compactness(True, rmax)
    period = L.period
    return Compactness(False, rmax, tuple(dedup), tuple(r for r in dedup if r < period))


# --- orthic incenter ----------------------------------------------------


class Arc(NamedTuple):
    on: str  # 'x4' (orthocenter locus) or 'billiard'
    t_start: float
    t_end: float
    max_residual: float


@dataclass(frozen=True, eq=False)
class OrthicIncenterReport:
    locus: Locus
    transitions: tuple[float, ...]  # right-triangle t in [0, period)
    arcs: tuple[Arc, ...]  # one traversal of the locus
    x4_axes: tuple[float, float]

    @property
    def single_ellipse(self):
        return len(self.arcs) == 1


def orthic_incenter_locus(B: Billiard, n: int = DEFAULT_N) -> OrthicIncenterReport:
    """Locus of the orthic incenter split into elliptic arcs.

    Below the first right-triangle aspect ratio it is the orthocenter's
    ellipse; above it, arcs of that ellipse alternate with billiard arcs,
    switching where the orbit is a right triangle.
    """
    L = sample_locus(B, "orthic-incenter", n)
    a4, b4 = x4_locus_axes(B)
    x4_ell = Ellipse(a4, b4)
    period = L.period
    trans = tuple(r for r in right_triangle_params(B) if r < period)
    bounds = [0.0, *trans, period]
    arcs = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        sel = (L.t > lo) & (L.t < hi) & L.ok
        mid = orbit(B, 0.5 * (lo + hi))
        on = "billiard" if shape_class(mid).kind == "obtuse" else "x4"
        p = L.points[sel]
        f = B.f(p[:, 0], p[:, 1]) if on == "billiard" else x4_ell.f(p[:, 0], p[:, 1])
        res = float(np.abs(f - 1).max()) if len(p) else math.nan
        arcs.append(Arc(on, lo, hi, res))
    # the pieces on either side of t = 0 are one arc
    if len(arcs) > 1 and arcs[0].on == arcs[-1].on:
        first, last = arcs[0], arcs.pop()
        arcs[0] = Arc(first.on, last.t_start - period, first.t_end, max(first.max_residual, last.max_residual))
    return OrthicIncenterReport(L, trans, tuple(arcs), (a4, b4))


# --- envelopes ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Envelope:
    """Instantaneous centers of rotation ``E(t)`` of a line family."""

    label: str
    t: np.ndarray
    points: np.ndarray
    flags: np.ndarray
    line_residual: np.ndarray = field(repr=False)


LineFamily = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


def _intersect_lines(p, d, q, e):
    return tri.line_intersection(p, d, q, e)


def envelope_of(label: str, lines: LineFamily, t, eps=(1e-4, 5e-5)) -> Envelope:
    """Envelope of ``lines(t) -> (points, directions)`` by neighbouring-line intersection.

    ``E_eps(t) = line(t) ∩ line(t + eps)`` is Richardson-extrapolated from
    the two step sizes (the second must be half the first).
    """
    t = np.asarray(t, dtype=float)
    p0, d0 = lines(t)
    ests = []
    for e in eps:
        p1, d1 = lines(t + e)
        ests.append(_intersect_lines(p0, d0, p1, d1))
    E = 2 * ests[1] - ests[0]
    finite = np.isfinite(E).all(axis=1) & np.isfinite(d0).all(axis=1)
    flags = np.where(finite, "ok", "gap")
    with np.errstate(invalid="ignore"):
        dn = d0 / np.hypot(d0[:, 0], d0[:, 1])[:, None]
        w = E - p0
        res = np.abs(w[:, 0] * dn[:, 1] - w[:, 1] * dn[:, 0])
    E[~finite] = np.nan
    return Envelope(label, t, E, flags, res)


def _x1x100_lines(B):
    def lines(t):
        P = orbit_family(B, t)
        x1, _ = center_batch(P, 1)
        x100, st = center_batch(P, 100)
        d = x100 - x1
        bad = (st != STATUS_OK) | (np.hypot(d[:, 0], d[:, 1]) < 1e-12)
        d[bad] = np.nan
        return x1, d

    return lines


LINE_FAMILIES = {"X1X100": _x1x100_lines}


def envelope(B: Billiard, family: str = "X1X100", n: int = DEFAULT_N) -> Envelope:
    if family not in LINE_FAMILIES:
        raise DomainError(f"unknown line family {family!r}; known: {sorted(LINE_FAMILIES)}")
    t = np.arange(n) * TWO_PI / n
    return envelope_of(family, LINE_FAMILIES[family](B), t)


def envelope_max_f(B: Billiard, family: str = "X1X100", n: int = 720) -> tuple[float, float]:
    """``max_t f(E(t))`` for the billiard's implicit ``f``, refined: ``(value, t)``."""
    env = envelope(B, family, n)
    f = B.f(env.points[:, 0], env.points[:, 1])
    i = int(np.nanargmax(f))
    h = TWO_PI / n
    lines = LINE_FAMILIES[family](B)
    fval = lambda s: float(np.nan_to_num(B.f(*envelope_of(family, lines, [s]).points[0]), nan=-np.inf))
    x, fx = golden_section(fval, env.t[i] - h, env.t[i] + h, tol=1e-10, maximize=True)
    return max(fx, float(f[i])), x % TWO_PI
