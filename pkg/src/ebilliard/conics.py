"""Plane conics, tangent lines, intersections and real polynomial roots."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateFitError, DomainError

CLASSIFY_TOL = 1e-10
ROOT_GRID = 4096


class Line(NamedTuple):
    """Line through ``point`` with direction ``direction``."""

    point: np.ndarray
    direction: np.ndarray

    @classmethod
    def through(cls, p, q):
        p = np.asarray(p, dtype=float)
        return cls(p, np.asarray(q, dtype=float) - p)

    def normal_form(self):
        """Return ``(n, h)`` with unit normal ``n`` and ``n . x = h`` on the line."""
        d = self.direction / np.hypot(*self.direction)
        n = np.array([-d[1], d[0]])
        return n, float(n @ self.point)


@dataclass(frozen=True)
class Ellipse:
    """Axis-aligned ellipse with x semi-axis ``a`` and y semi-axis ``b``.

    ``a >= b`` is not enforced: loci such as the orthocenter's are taller
    than wide. ``strict`` records whether ``a > b`` holds.
    """

    a: float
    b: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise DomainError(f"semi-axes must be positive, got a={self.a}, b={self.b}")

    @property
    def strict(self):
        return self.a > self.b

    @property
    def semi_major(self):
        return max(self.a, self.b)

    @property
    def semi_minor(self):
        return min(self.a, self.b)

    def f(self, x, y):
        """Implicit value ``((x-cx)/a)^2 + ((y-cy)/b)^2``; 1 on the boundary."""
        return ((np.asarray(x) - self.center[0]) / self.a) ** 2 + (
            (np.asarray(y) - self.center[1]) / self.b
        ) ** 2

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.stack(
            [self.center[0] + self.a * np.cos(theta), self.center[1] + self.b * np.sin(theta)],
            axis=-1,
        )

    def param(self, p):
        p = np.asarray(p, dtype=float)
        return np.arctan2((p[..., 1] - self.center[1]) / self.b, (p[..., 0] - self.center[0]) / self.a)

    def support(self, n):
        """Support function ``max_{x in E} n . (x - center)`` for direction ``n``."""
        n = np.asarray(n, dtype=float)
        return np.sqrt((self.a * n[..., 0]) ** 2 + (self.b * n[..., 1]) ** 2)

    def tangency_residual(self, line: Line):
        """Distance-like residual of ``line`` from tangency (0 when tangent)."""
        n, h = line.normal_form()
        h -= float(n @ np.asarray(self.center))
        return abs(abs(h) - float(self.support(n)))

    def touch_point(self, line: Line):
        """Pole of ``line``; equals the contact point when the line is tangent."""
        n, h = line.normal_form()
        c = np.asarray(self.center, dtype=float)
        h -= float(n @ c)
        return c + np.array([self.a**2 * n[0], self.b**2 * n[1]]) / h

    def to_conic(self) -> Conic:
        cx, cy = self.center
        A = 1 / self.a**2
        C = 1 / self.b**2
        return Conic.from_coefficients(A, 0.0, C, -2 * A * cx, -2 * C * cy, A * cx**2 + C * cy**2 - 1)


@dataclass(frozen=True)
class Conic:
    """``A x^2 + B xy + C y^2 + D x + E y + F = 0``, stored normalized.

    Use :meth:`from_coefficients`; the coefficient vector has unit norm and
    its first nonzero entry is positive.
    """

    coefficients: tuple[float, float, float, float, float, float]

    @classmethod
    def from_coefficients(cls, *coeffs) -> Conic:
        if len(coeffs) == 1:
            coeffs = tuple(coeffs[0])
        v = np.asarray(coeffs, dtype=float)
        if v.shape != (6,):
            raise ValueError("a conic needs six coefficients")
        norm = np.linalg.norm(v)
        if norm == 0:
            raise DomainError("all conic coefficients are zero")
        v = v / norm
        nz = np.flatnonzero(np.abs(v) > 0)
        if v[nz[0]] < 0:
            v = -v
        return cls(tuple(float(x) for x in v))

    def __call__(self, x, y):
        A, B, C, D, E, F = self.coefficients
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return A * x * x + B * x * y + C * y * y + D * x + E * y + F

    def matrix(self):
        A, B, C, D, E, F = self.coefficients
        return np.array([[A, B / 2, D / 2], [B / 2, C, E / 2], [D / 2, E / 2, F]])

    def center(self):
        A, B, C, D, E, _ = self.coefficients
        return np.linalg.solve([[2 * A, B], [B, 2 * C]], [-D, -E])

    def axes(self):
        """Semi-axes and orientation of a central conic.

        Returns ``(center, (r1, r2), (u1, u2))`` where ``r_k`` is the
        semi-axis along unit eigenvector ``u_k`` (ascending eigenvalue, so
        ``r1 >= r2`` for an ellipse).
        """
        A, B, C, *_ = self.coefficients
        c = self.center()
        k = -float(self(c[0], c[1]))
        w, V = np.linalg.eigh(np.array([[A, B / 2], [B / 2, C]]))
        r = np.sqrt(k / w)
        return c, (float(r[0]), float(r[1])), (V[:, 0], V[:, 1])

    def aspect(self):
        """``major / minor`` from the ratio of Hessian eigenvalues."""
        A, B, C, *_ = self.coefficients
        w = np.linalg.eigvalsh(np.array([[A, B / 2], [B / 2, C]]))
        return math.sqrt(abs(w[1] / w[0]))


def classify_conic(c: Conic, tol: float = CLASSIFY_TOL) -> str:
    """Return ``'ellipse'``, ``'parabola'``, ``'hyperbola'`` or ``'degenerate'``."""
    A, B, C, *_ = c.coefficients
    if abs(np.linalg.det(c.matrix())) < tol:
        return "degenerate"
    disc = B * B - 4 * A * C
    if abs(disc) < tol:
        return "parabola"
    if disc > 0:
        return "hyperbola"
    # imaginary ellipse has no real points
    if (A + C) * np.linalg.det(c.matrix()) > 0:
        return "degenerate"
    return "ellipse"


def fit_conic(points) -> tuple[Conic, float]:
    """Least-squares conic through ``points`` (>= 5, not collinear).

    The smallest right singular vector of the design matrix, computed on
    points centred and scaled to unit RMS radius, then mapped back. The
    residual is the RMS of the normalized conic over the input points.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 5:
        raise DegenerateFitError("need at least 5 points of shape (n, 2)")
    m = pts.mean(axis=0)
    q = pts - m
    scale = math.sqrt((q**2).sum(axis=1).mean())
    if scale == 0:
        raise DegenerateFitError("all points coincide")
    q = q / scale
    x, y = q[:, 0], q[:, 1]
    M = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    _, sv, Vt = np.linalg.svd(M, full_matrices=False)
    if sv[-2] < 1e-9 * sv[0]:
        raise DegenerateFitError("design matrix is rank deficient; points may be collinear")
    A, B, C, D, E, F = Vt[-1]
    # substitute x' = (x - mx)/s, y' = (y - my)/s
    s, mx, my = scale, m[0], m[1]
    A2, B2, C2 = A / s**2, B / s**2, C / s**2
    D2 = D / s - 2 * A2 * mx - B2 * my
    E2 = E / s - 2 * C2 * my - B2 * mx
    F2 = A2 * mx * mx + B2 * mx * my + C2 * my * my - D / s * mx - E / s * my + F
    conic = Conic.from_coefficients(A2, B2, C2, D2, E2, F2)
    resid = float(np.sqrt(np.mean(conic(pts[:, 0], pts[:, 1]) ** 2)))
    return conic, resid


def tangents_from_point(e: Ellipse, p) -> list[Line]:
    """Lines through ``p`` tangent to ``e``; each line's ``point`` is its touch point.

    Two lines when ``p`` is strictly outside, one on the boundary, none inside.
    """
    p = np.asarray(p, dtype=float)
    c = np.asarray(e.center, dtype=float)
    ca, cb = (p - c) / (e.a, e.b)
    rho = math.hypot(ca, cb)
    if abs(rho - 1) < 1e-12:
        th = math.atan2(cb, ca)
        return [Line(p.copy(), np.array([-e.a * math.sin(th), e.b * math.cos(th)]))]
    if rho < 1:
        return []
    phi = math.atan2(cb, ca)
    w = math.acos(1 / rho)
    lines = []
    for th in (phi + w, phi - w):
        touch = c + np.array([e.a * math.cos(th), e.b * math.sin(th)])
        lines.append(Line(touch, touch - p))
    return lines


def line_ellipse_intersect(e: Ellipse, line: Line, tol: float = 1e-12) -> list[np.ndarray]:
    """Intersections of ``line`` with ``e``; a tangency is returned twice."""
    c = np.asarray(e.center, dtype=float)
    p = (np.asarray(line.point, dtype=float) - c) / (e.a, e.b)
    d = np.asarray(line.direction, dtype=float) / (e.a, e.b)
    qa = d @ d
    qb = 2 * (p @ d)
    qc = p @ p - 1
    disc = qb * qb - 4 * qa * qc
    scale = max(qb * qb, abs(4 * qa * qc), 1.0)
    if disc < -tol * scale:
        return []
    pt = lambda lam: np.asarray(line.point, dtype=float) + lam * np.asarray(line.direction, dtype=float)
    if abs(disc) <= tol * scale:
        x = pt(-qb / (2 * qa))
        return [x, x.copy()]
    sq = math.sqrt(disc)
    # stable quadratic roots
    qq = -0.5 * (qb + math.copysign(sq, qb))
    lams = sorted([qq / qa, qc / qq] if qq != 0 else [sq / (2 * qa), -sq / (2 * qa)])
    return [pt(lam) for lam in lams]


@dataclass(frozen=True)
class RealPolynomial:
    """Real polynomial with coefficients in ascending degree."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(x) for x in self.coefficients)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c or c[-1] == 0:
            raise DomainError("polynomial must have a nonzero leading coefficient")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def from_descending(cls, *coeffs):
        return cls(tuple(reversed(coeffs)))

    @property
    def degree(self):
        return len(self.coefficients) - 1

    def __call__(self, x):
        return npoly.polyval(x, self.coefficients)

    def deriv(self):
        """Derivative as a :class:`numpy.polynomial.Polynomial`."""
        return np.polynomial.Polynomial(self.coefficients).deriv()


def real_roots(p: RealPolynomial, bracket, tol: float = 1e-14, grid: int = ROOT_GRID) -> list[float]:
    """Simple real roots of ``p`` inside ``bracket``, ascending.

    Sign changes on a uniform grid of ``grid`` points are bisected down to
    ``tol`` and polished with Newton steps that stay inside the bracket.
    Roots without a sign change (even multiplicity) are not reported.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    lo, hi = map(float, bracket)
    xs = np.linspace(lo, hi, grid + 1)
    vs = p(xs)
    dp = p.deriv()
    roots = []
    for i in range(grid):
        v0, v1 = vs[i], vs[i + 1]
        if v0 == 0:
            roots.append(xs[i])
            continue
        if v0 * v1 >= 0:
            continue
        x0, x1 = xs[i], xs[i + 1]
        while x1 - x0 > tol * max(1.0, abs(x0)):
            xm = 0.5 * (x0 + x1)
            vm = p(xm)
            if vm == 0:
                x0 = x1 = xm
                break
            if (vm < 0) == (v0 < 0):
                x0, v0 = xm, vm
            else:
                x1 = xm
        x = 0.5 * (x0 + x1)
        for _ in range(3):
            d = dp(x)
            if d == 0:
                break
            xn = x - p(x) / d
            if not xs[i] <= xn <= xs[i + 1]:
                break
            x = xn
        roots.append(float(x))
    if vs[-1] == 0:
        roots.append(float(xs[-1]))
    return sorted(roots)
