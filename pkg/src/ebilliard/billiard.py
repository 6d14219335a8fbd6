"""The elliptic billiard, its confocal caustic and the 3-periodic family."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from . import triangle as tri
from ._backend import kernels
from .conics import Ellipse, Line
from .errors import ClosureError, ConvergenceError, DomainError

CLOSURE_TOL = 1e-9
RIGHT_BAND = 1e-8
QUAD_TOL = 1e-10
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class Billiard:
    """Ellipse ``(x/a)^2 + (y/b)^2 = 1`` with ``a > b > 0``."""

    a: float
    b: float = 1.0

    def __post_init__(self):
        if not (self.a > self.b > 0):
            raise DomainError(f"billiard needs a > b > 0, got a={self.a!r}, b={self.b!r}")

    @classmethod
    def from_aspect(cls, ab: float, b: float = 1.0) -> Billiard:
        return cls(ab * b, b)

    @property
    def aspect(self):
        return self.a / self.b

    @property
    def c2(self):
        return (self.a - self.b) * (self.a + self.b)

    @property
    def delta(self):
        a2, b2 = self.a**2, self.b**2
        # a^4 - a^2 b^2 + b^4 = (a^2 - b^2)^2 + a^2 b^2, both terms >= 0
        return math.sqrt(self.c2**2 + a2 * b2)

    @cached_property
    def caustic_axes(self):
        c2, d = self.c2, self.delta
        return (d - self.b**2) * self.a / c2, (self.a**2 - d) * self.b / c2

    @property
    def ellipse(self) -> Ellipse:
        return Ellipse(self.a, self.b)

    def f(self, x, y):
        return (np.asarray(x) / self.a) ** 2 + (np.asarray(y) / self.b) ** 2

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([self.a * np.cos(t), self.b * np.sin(t)], axis=-1)

    def param(self, p):
        p = np.asarray(p, dtype=float)
        return np.arctan2(p[..., 1] / self.b, p[..., 0] / self.a)


def caustic(B: Billiard) -> Ellipse:
    """Confocal caustic of the 3-periodic family."""
    return Ellipse(*B.caustic_axes)


@dataclass(frozen=True, eq=False)
class Orbit:
    """One 3-periodic: counterclockwise vertices with ``P1 = (a cos t, b sin t)``."""

    billiard: Billiard
    t: float
    vertices: np.ndarray

    @property
    def P1(self):
        return self.vertices[0]

    @property
    def P2(self):
        return self.vertices[1]

    @property
    def P3(self):
        return self.vertices[2]

    @cached_property
    def sides(self):
        return tri.sidelengths(self.vertices)

    @property
    def perimeter(self):
        return float(self.sides.sum())

    @property
    def inradius(self):
        return float(tri.inradius(self.vertices))

    @property
    def circumradius(self):
        return float(tri.circumradius(self.vertices))

    @property
    def angles(self):
        return tri.angles(self.vertices)

    @property
    def params(self):
        """Boundary parameters of the three vertices."""
        return self.billiard.param(self.vertices)


def orbit_family(B: Billiard, t) -> np.ndarray:
    """Vertices of the orbits at every ``t``, shape ``(n, 3, 2)``."""
    ac, bc = B.caustic_axes
    return kernels.orbit_vertices(B.a, B.b, ac, bc, np.asarray(t, dtype=float))


def caustic_residuals(B: Billiard, P) -> np.ndarray:
    """Tangency residual of each side (opposite vertex ``i``) w.r.t. the caustic."""
    P = np.asarray(P, dtype=float)
    ac, bc = B.caustic_axes
    out = []
    for i in range(3):
        p, q = P[..., (i + 1) % 3, :], P[..., (i + 2) % 3, :]
        d = q - p
        n = np.stack([-d[..., 1], d[..., 0]], axis=-1) / np.hypot(d[..., 0], d[..., 1])[..., None]
        h = (n * p).sum(axis=-1)
        out.append(np.abs(np.abs(h) - np.hypot(ac * n[..., 0], bc * n[..., 1])))
    return np.stack(out, axis=-1)


def reflection_residuals(B: Billiard, P, signed: bool = False) -> np.ndarray:
    """Angle mismatch (radians) of incoming and outgoing sides about the normal."""
    P = np.asarray(P, dtype=float)
    out = []
    for i in range(3):
        v = P[..., i, :]
        n = np.stack([v[..., 0] / B.a**2, v[..., 1] / B.b**2], axis=-1)
        n = -n / np.hypot(n[..., 0], n[..., 1])[..., None]
        angs = []
        for j in ((i + 1) % 3, (i + 2) % 3):
            u = P[..., j, :] - v
            angs.append(np.arctan2(n[..., 0] * u[..., 1] - n[..., 1] * u[..., 0], (n * u).sum(axis=-1)))
        r = angs[0] + angs[1]
        out.append(r if signed else np.abs(r))
    return np.stack(out, axis=-1)


def orbit(B: Billiard, t: float, tol: float = CLOSURE_TOL) -> Orbit:
    """The 3-periodic whose leading vertex is ``(a cos t, b sin t)``.

    P2 and P3 are the second intersections with the billiard of the two
    tangents from P1 to the caustic. Raises ClosureError if side P2P3 misses
    the caustic by more than ``tol``.
    """
    P = orbit_family(B, [t])[0]
    res = caustic_residuals(B, P)[0]
    if res > tol * max(1.0, B.a):
        raise ClosureError(f"side P2P3 misses the caustic by {res:.3e} at t={t!r}")
    return Orbit(B, float(t), P)


def _oracle_residual(B, t, u):
    P = B.point(np.array([t, u[0], u[1]]))
    r = reflection_residuals(B, P, signed=True)
    return r[1:], P


def _newton(B, t, u, iters=60, h=1e-7):
    u = np.array(u, dtype=float)
    for _ in range(iters):
        F, _ = _oracle_residual(B, t, u)
        if np.max(np.abs(F)) < 1e-14:
            break
        J = np.empty((2, 2))
        for k in range(2):
            e = np.zeros(2)
            e[k] = h
            J[:, k] = (_oracle_residual(B, t, u + e)[0] - _oracle_residual(B, t, u - e)[0]) / (2 * h)
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return None
        # damp large steps, parameters are angles
        m = np.max(np.abs(step))
        if m > 0.3:
            step *= 0.3 / m
        u = u + step
    F, P = _oracle_residual(B, t, u)
    return u, F, P


def _oracle_accept(B, t, sol, tol):
    if sol is None:
        return None
    u, F, P = sol
    if not np.all(np.isfinite(F)) or np.max(np.abs(F)) > tol:
        return None
    d2 = (u[0] - t) % TWO_PI
    d3 = (u[1] - t) % TWO_PI
    sep = min(d2, d3, abs(d3 - d2), TWO_PI - max(d2, d3))
    if sep < 1e-3:
        return None
    if reflection_residuals(B, P)[0] > 1e-9:
        return None
    if d2 > d3:
        P = P[[0, 2, 1]]
    return P


def orbit_oracle(B: Billiard, t: float, tol: float = 1e-12) -> Orbit:
    """3-periodic through P1(t) found by Newton on the reflection law.

    Unknowns are the boundary parameters of P2 and P3; residuals are the
    reflection mismatch at those vertices. Seeds, in order: the caustic
    construction of :func:`orbit`, the circular-billiard guess
    ``t + 2pi/3, t + 4pi/3``, then the best cells of a 24x24 grid. The
    solve itself only uses the reflection law, so agreement with
    :func:`orbit` is a genuine check of the construction.
    """
    P0 = orbit_family(B, [t])[0]
    seeds = [tuple(B.param(P0[1:])), (t + TWO_PI / 3, t + 2 * TWO_PI / 3)]
    for seed in seeds:
        P = _oracle_accept(B, t, _newton(B, t, seed), tol)
        if P is not None:
            return Orbit(B, float(t), P)
    g = t + np.linspace(0.05, TWO_PI - 0.05, 24)
    cand = []
    for i, u2 in enumerate(g):
        for u3 in g[i + 1 :]:
            F, _ = _oracle_residual(B, t, np.array([u2, u3]))
            cand.append((float(np.abs(F).sum()), u2, u3))
    cand.sort()
    for _, u2, u3 in cand[:8]:
        P = _oracle_accept(B, t, _newton(B, t, (u2, u3)), tol)
        if P is not None:
            return Orbit(B, float(t), P)
    raise ConvergenceError(f"reflection-law Newton failed at t={t!r} after {len(seeds) + 8} seeds")


class ShapeClass(NamedTuple):
    kind: str  # 'acute' | 'right' | 'obtuse'
    vertex: int | None  # index of the right/obtuse vertex


def shape_class(o: Orbit | np.ndarray, band: float = RIGHT_BAND) -> ShapeClass:
    """Acute, right (largest angle within ``band`` of pi/2) or obtuse."""
    P = o.vertices if isinstance(o, Orbit) else np.asarray(o, dtype=float)
    ang = tri.angles(P)
    k = int(np.argmax(ang))
    if abs(ang[k] - math.pi / 2) <= band:
        return ShapeClass("right", k)
    if ang[k] > math.pi / 2:
        return ShapeClass("obtuse", k)
    return ShapeClass("acute", None)


def x4_position(o: Orbit, tol: float = 1e-9) -> str:
    """Where the orthocenter sits relative to the billiard: inside, on or outside."""
    h = tri.orthocenter(o.vertices)
    f = float(o.billiard.f(h[0], h[1]))
    if abs(f - 1) <= tol:
        return "on"
    return "inside" if f < 1 else "outside"


def largest_angle(B: Billiard, t) -> np.ndarray:
    return tri.angles(orbit_family(B, t)).max(axis=-1)


def right_triangle_params(B: Billiard, n: int = 2048) -> list[float]:
    """Values of ``t`` in ``[0, 2pi)`` where the orbit is a right triangle."""
    ts = np.linspace(0, TWO_PI, n + 1)
    g = largest_angle(B, ts) - math.pi / 2
    g_fun = lambda x: float(largest_angle(B, [x])[0] - math.pi / 2)
    roots = []
    for i in range(n):
        if g[i] == 0:
            roots.append(ts[i])
        elif g[i] * g[i + 1] < 0:
            roots.append(brentq(g_fun, ts[i], ts[i + 1], xtol=1e-14, rtol=1e-15))
    return sorted(r % TWO_PI for r in roots)


@dataclass(frozen=True)
class InvariantReport:
    n: int
    perimeter: float
    perimeter_spread: float
    r_over_R: float
    r_over_R_spread: float
    cosine_sum: float
    cosine_sum_spread: float
    x9_max: float


def _spread(v):
    return float((v.max() - v.min()) / v.mean())


def invariant_report(B: Billiard, n: int = 1000) -> InvariantReport:
    """Relative spreads of the conserved quantities over ``n`` uniform ``t``."""
    if n < 16:
        raise DomainError("invariant_report needs n >= 16")
    P = orbit_family(B, np.arange(n) * TWO_PI / n)
    s = tri.sidelengths(P)
    per = s.sum(axis=-1)
    rR = tri.inradius(P) / tri.circumradius(P)
    cs = tri.cosines(s).sum(axis=-1)
    # Mittenpunkt: barycentrics s_i (s_j + s_k - s_i)
    x9 = tri.weighted(P, s * (s.sum(axis=-1, keepdims=True) - 2 * s))
    return InvariantReport(
        n=n,
        perimeter=float(per.mean()),
        perimeter_spread=_spread(per),
        r_over_R=float(rR.mean()),
        r_over_R_spread=_spread(rR),
        cosine_sum=float(cs.mean()),
        cosine_sum_spread=_spread(cs),
        x9_max=float(np.hypot(x9[:, 0], x9[:, 1]).max()),
    )


# --- Poritsky-Lazutkin parameter on the caustic -------------------------


def adaptive_simpson(f, lo: float, hi: float, tol: float = QUAD_TOL, max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature of a scalar function."""

    def simpson(a, fa, b, fb):
        m = 0.5 * (a + b)
        fm = f(m)
        return m, fm, (b - a) / 6 * (fa + 4 * fm + fb)

    def rec(a, fa, b, fb, m, fm, whole, eps, depth):
        lm, flm, left = simpson(a, fa, m, fm)
        rm, frm, right = simpson(m, fm, b, fb)
        delta = left + right - whole
        if abs(delta) <= 15 * eps:
            return left + right + delta / 15
        if depth <= 0:
            raise ConvergenceError(f"adaptive Simpson did not converge on [{a}, {b}]")
        return rec(a, fa, m, fm, lm, flm, left, eps / 2, depth - 1) + rec(
            m, fm, b, fb, rm, frm, right, eps / 2, depth - 1
        )

    if hi == lo:
        return 0.0
    fa, fb = f(lo), f(hi)
    m, fm, whole = simpson(lo, fa, hi, fb)
    return rec(lo, fa, hi, fb, m, fm, whole, tol, max_depth)


def _eta_density(ac, bc):
    k = (ac * bc) ** (2.0 / 3.0)
    # kappa^(2/3) ds in the angle parameter of (ac cos th, bc sin th)
    return lambda th: k / math.sqrt((ac * math.sin(th)) ** 2 + (bc * math.cos(th)) ** 2)


def _arc_density(ac, bc):
    return lambda th: math.sqrt((ac * math.sin(th)) ** 2 + (bc * math.cos(th)) ** 2)


@lru_cache(maxsize=64)
def _quarter_totals(ac, bc):
    return (
        adaptive_simpson(_eta_density(ac, bc), 0.0, math.pi / 2),
        adaptive_simpson(_arc_density(ac, bc), 0.0, math.pi / 2),
    )


def _integrate_from_vertex(density, quarter, theta):
    """Integral of an even, pi-periodic-in-|sin| density from 0 to theta in [0, 2pi)."""
    k, r = divmod(theta, math.pi / 2)
    k = int(k)
    # on odd quarters integrate backwards from the next axis vertex
    if k % 2 == 0:
        part = adaptive_simpson(density, 0.0, r) if r else 0.0
    else:
        part = quarter - (adaptive_simpson(density, 0.0, math.pi / 2 - r) if r else quarter)
    return k * quarter + part


class ArcParams(NamedTuple):
    theta: float  # angle parameter on the caustic
    s: float  # arclength from (a_c, 0)
    kappa: float
    eta: float  # Poritsky parameter, full circuit = 1


def caustic_arc_params(B: Billiard, theta: float) -> ArcParams:
    """Arclength, curvature and normalized Poritsky parameter at caustic angle ``theta``."""
    ac, bc = B.caustic_axes
    theta = float(theta) % TWO_PI
    qe, qs = _quarter_totals(ac, bc)
    eta = _integrate_from_vertex(_eta_density(ac, bc), qe, theta) / (4 * qe)
    s = _integrate_from_vertex(_arc_density(ac, bc), qs, theta)
    g = (ac * math.sin(theta)) ** 2 + (bc * math.cos(theta)) ** 2
    return ArcParams(theta, s, ac * bc / g**1.5, eta % 1.0)


def tangency_thetas(B: Billiard, o: Orbit) -> np.ndarray:
    """Caustic angles of the contact points of sides P1P2, P2P3, P3P1."""
    ell = caustic(B)
    P = o.vertices
    pts = [ell.touch_point(Line.through(P[i], P[(i + 1) % 3])) for i in range(3)]
    return np.array([float(ell.param(p)) % TWO_PI for p in pts])


def poritsky(B: Billiard, t: float, side: int = 0) -> ArcParams:
    """Poritsky parameters at the caustic contact of side P1P2 (``side=0``).

    ``side=1`` and ``side=2`` select sides P2P3 and P3P1.
    """
    return caustic_arc_params(B, tangency_thetas(B, orbit(B, t))[side])
