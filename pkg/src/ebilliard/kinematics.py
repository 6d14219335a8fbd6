"""Motion of billiard- and caustic-railed centers along their rail."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import triangle as tri
from ._backend import STATUS_OK
from ._numerics import bisect_sign, golden_section
from .billiard import TWO_PI, Billiard, caustic, orbit, orbit_family
from .centers import center, center_batch, entry, normalize_id, rho
from .errors import DomainError, RailError
from .loci import DEFAULT_N, _one_sided_limit

RAIL_TOL = 1e-8
PROFILE_RAIL_TOL = 1e-9


def _rail_ellipse(B: Billiard, rail: str):
    if rail == "billiard":
        return B.ellipse
    if rail == "caustic":
        return caustic(B)
    raise DomainError(f"rail must be 'billiard' or 'caustic', got {rail!r}")


def boundary_param(B: Billiard, p, rail: str = "billiard", tol: float = RAIL_TOL) -> float:
    """Parameter ``t'`` in ``[0, 2pi)`` with ``p = (A cos t', B sin t')`` on the rail."""
    ell = _rail_ellipse(B, rail)
    p = np.asarray(p, dtype=float)
    res = abs(float(ell.f(p[0], p[1])) - 1)
    if res > tol:
        raise RailError(f"point {p.tolist()} is off the {rail}", res)
    return float(ell.param(p)) % TWO_PI


def _rail_params(B, cid, t, rail, tol=PROFILE_RAIL_TOL, filled=None):
    """Raw rail parameters of center ``cid`` at each ``t``, filling isolated undefined values.

    Indices of filled samples are appended to ``filled`` when given.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    pts, st = center_batch(orbit_family(B, t), cid)
    pts = pts.copy()
    for i in np.flatnonzero(st != STATUS_OK):
        lim = _one_sided_limit(B, cid, t[i])
        if lim is None:
            raise RailError(f"{entry(cid).label} undefined at t={t[i]!r}", math.inf)
        pts[i] = lim
        if filled is not None:
            filled.append(int(i))
    ell = _rail_ellipse(B, rail)
    res = np.abs(ell.f(pts[:, 0], pts[:, 1]) - 1)
    if res.max() > tol:
        k = int(np.argmax(res))
        raise RailError(f"{entry(cid).label} leaves the {rail} at t={t[k]!r}", float(res[k]))
    return np.mod(ell.param(pts), TWO_PI), pts


def _wrap(x):
    return (x + math.pi) % TWO_PI - math.pi


def _velocity(B, cid, rail, t, h=1e-5):
    """``dt'/dt`` by central differences, unwrapped locally."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    up, _ = _rail_params(B, cid, t + h, rail)
    dn, _ = _rail_params(B, cid, t - h, rail)
    return _wrap(up - dn) / (2 * h)


def rail_of(cid) -> str:
    e = entry(cid)
    if e.rail is None:
        raise DomainError(f"{e.label} is not railed on the billiard or the caustic")
    return e.rail


@dataclass(frozen=True, eq=False)
class MotionProfile:
    """Rail parameter ``t'`` of a railed center against ``t``."""

    center: int | str
    billiard: Billiard
    rail: str
    t: np.ndarray
    tprime: np.ndarray  # raw, in [0, 2pi)
    unwrapped: np.ndarray
    velocity: np.ndarray  # dt'/dt
    winding: int
    reversals: tuple[float, ...]
    flags: np.ndarray  # "ok", or "limit" where a one-sided limit filled the sample

    @property
    def monotonic(self):
        return not self.reversals

    @property
    def direction(self):
        return "ccw" if self.winding > 0 else "cw" if self.winding < 0 else "none"


def motion_profile(B: Billiard, cid, n: int = DEFAULT_N) -> MotionProfile:
    """Unwrapped profile, winding number and refined velocity reversals.

    Velocities are central differences on the ``t`` grid; each sign change
    is refined by bisection on the sign of a fine-step difference quotient.
    """
    cid = normalize_id(cid)
    rail = rail_of(cid)
    t = np.arange(n) * TWO_PI / n
    filled: list[int] = []
    raw, _ = _rail_params(B, cid, t, rail, filled=filled)
    flags = np.full(n, "ok", dtype=object)
    flags[filled] = "limit"
    closed = np.append(raw, raw[0])
    un = np.unwrap(closed)
    total = un[-1] - un[0]
    winding = int(round(total / TWO_PI))
    if abs(total - winding * TWO_PI) > 1e-6:
        raise RailError(f"profile of {entry(cid).label} is not closed", abs(total - winding * TWO_PI))
    un = un[:-1]
    h = TWO_PI / n
    nxt = np.append(un[1:], un[0] + total)
    prv = np.insert(un[:-1], 0, un[-1] - total)
    vel = (nxt - prv) / (2 * h)
    sign = np.sign(vel)
    reversals = []
    vfun = lambda s: float(_velocity(B, cid, rail, [s])[0])
    for i in range(n):
        j = (i + 1) % n
        if sign[i] != 0 and sign[j] != 0 and sign[i] != sign[j]:
            lo, hi = t[i], t[i] + h
            reversals.append(bisect_sign(lambda s: vfun(s) > 0, lo, hi, tol=1e-12) % TWO_PI)
    return MotionProfile(cid, B, rail, t, raw, un, vel, winding, tuple(sorted(reversals)), flags)


def velocity_extreme(B: Billiard, cid, kind: str = "min", n: int = 720) -> tuple[float, float]:
    """Refined ``min`` (or ``max``) of ``dt'/dt`` over the circuit: ``(value, t)``."""
    cid = normalize_id(cid)
    rail = rail_of(cid)
    t = np.arange(n) * TWO_PI / n
    v = _velocity(B, cid, rail, t)
    i = int(np.argmin(v) if kind == "min" else np.argmax(v))
    h = TWO_PI / n
    vfun = lambda s: float(_velocity(B, cid, rail, [s])[0])
    x, fx = golden_section(vfun, t[i] - h, t[i] + h, tol=1e-10, maximize=(kind == "max"))
    best = min(fx, v[i]) if kind == "min" else max(fx, v[i])
    return float(best), x % TWO_PI


# --- extouchpoints ------------------------------------------------------


def extouch_relation(B: Billiard, t: float) -> float:
    """``|t' - (t + pi)|`` (mod 2pi) for the extouchpoint opposite P1."""
    e1 = center(orbit(B, t).vertices, "extouch-1")
    tp = boundary_param(B, e1, "caustic", tol=1e-9)
    return abs(_wrap(tp - t - math.pi))


def extouch_slope_identity(B: Billiard, t: float, i: int = 0) -> tuple[float, float]:
    """Both sides of ``(a/b)(y/x) = (a_c/b_c)(y'/x')`` for vertex ``i`` and its extouchpoint."""
    o = orbit(B, t)
    x, y = o.vertices[i]
    xe, ye = center(o.vertices, f"extouch-{i + 1}")
    ac, bc = B.caustic_axes
    return B.a / B.b * y / x, ac / bc * ye / xe


# --- ballet -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Ballet:
    centers: tuple
    billiard: Billiard
    t: np.ndarray
    gap_deg: np.ndarray  # geodesic separation of rail parameters
    gap_euclid: np.ndarray
    minima: tuple[tuple[float, float], ...]  # (t, gap) in degrees
    maxima: tuple[tuple[float, float], ...]
    min_gap: float  # degrees
    crossing_found: bool


def _gap_deg(B, ida, idb, rail, t):
    pa, A = _rail_params(B, ida, t, rail)
    pb, Bp = _rail_params(B, idb, t, rail)
    return np.degrees(np.abs(_wrap(pa - pb))), np.hypot(*(A - Bp).T)


def ballet(B: Billiard, ida=88, idb=162, n: int = DEFAULT_N, crossing_tol: float = 1e-7) -> Ballet:
    """Joint motion of two billiard-railed centers.

    The separation is the geodesic distance of their rail parameters on the
    circle, in degrees. Local extrema are refined by golden-section search.
    """
    ida, idb = normalize_id(ida), normalize_id(idb)
    rail = rail_of(ida)
    if rail_of(idb) != rail:
        raise DomainError("both centers must share a rail")
    t = np.arange(n) * TWO_PI / n
    gap, eu = _gap_deg(B, ida, idb, rail, t)
    g1 = lambda s: float(_gap_deg(B, ida, idb, rail, np.array([s]))[0][0])
    h = TWO_PI / n
    minima, maxima = [], []
    if np.max(gap) > 1e-12:
        for i in range(n):
            lo, hi = gap[i - 1], gap[(i + 1) % n]
            if gap[i] < lo and gap[i] <= hi:
                x, fx = golden_section(g1, t[i] - h, t[i] + h, tol=1e-11)
                minima.append((math.degrees(x % TWO_PI), fx))
            elif gap[i] > lo and gap[i] >= hi:
                x, fx = golden_section(g1, t[i] - h, t[i] + h, tol=1e-11, maximize=True)
                maxima.append((math.degrees(x % TWO_PI), fx))
        min_gap = min(m[1] for m in minima) if minima else float(gap.min())
    else:
        min_gap = 0.0
    return Ballet(
        (ida, idb), B, t, gap, eu, tuple(sorted(minima)), tuple(sorted(maxima)), min_gap, min_gap < crossing_tol
    )


# --- X88 on a vertex ----------------------------------------------------


@dataclass(frozen=True)
class VertexCoincidence:
    t: float
    rho: float
    vertex_distance: float  # |X88 - nearest vertex|
    side_ratios: tuple[float, float, float]  # sorted, scaled so the middle one is 4


def _middle_defect(B, t):
    s = np.sort(tri.sidelengths(orbit_family(B, t)), axis=-1)
    return s[:, 1] - (s[:, 0] + s[:, 2]) / 2


def vertex_coincidence_x88(B: Billiard, n: int = DEFAULT_N) -> list[VertexCoincidence]:
    """Parameters where X88 sits on an orbit vertex (middle side = mean of the others)."""
    t = np.linspace(0, TWO_PI, n + 1)
    g = _middle_defect(B, t)
    gf = lambda s: float(_middle_defect(B, [s])[0])
    out = []
    for i in range(n):
        if g[i] == 0 or g[i] * g[i + 1] < 0:
            r = t[i] if g[i] == 0 else brentq(gf, t[i], t[i + 1], xtol=1e-15)
            T = orbit(B, r).vertices
            x88 = center(T, 88)
            vd = float(np.min(np.hypot(*(T - x88).T)))
            s = np.sort(tri.sidelengths(T))
            out.append(VertexCoincidence(float(r % TWO_PI), rho(T), vd, tuple(float(v) for v in 4 * s / s[1])))
    return out
