"""Aspect-ratio thresholds: polynomial registry and behavioural rediscovery."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import triangle as tri
from ._numerics import bisect_sign, golden_section
from .billiard import TWO_PI, Billiard, largest_angle, orbit, orbit_family
from .centers import center, derived_vertices
from .conics import RealPolynomial, real_roots
from .errors import DomainError, NonMonotonePredicateError
from .kinematics import velocity_extreme, vertex_coincidence_x88
from .loci import fit_locus, sample_locus, self_intersections

SCAN = (1.01, 3.2)
SCAN_POINTS = 64
RESOLUTION = 1e-6
CLOSED_FORM_TOL = 1e-10


@dataclass(frozen=True)
class ThresholdSpec:
    name: str
    symbol: str
    polynomial: RealPolynomial | None  # in x = a/b
    bracket: tuple[float, float]
    degree: int | None  # as tabulated; None for numeric-only entries
    reference: float  # printed value
    closed_form: float | None = None
    closed_form_text: str = ""
    meaning: str = ""
    root: float = math.nan

    @property
    def closed_form_diff(self) -> float | None:
        if self.closed_form is None:
            return None
        return abs(self.root - self.closed_form)


_P = RealPolynomial.from_descending
_S5 = math.sqrt(5)

# name -> (symbol, polynomial, bracket, degree, reference, closed form, text, meaning)
_REGISTRY = {
    "alpha162": ("α162", _P(5, 0, 3, 0, -32, 0, 52, 0, -36), (1.0, 3.0), 8, 1.164, None, "",
                 "X162 motion turns non-monotonic"),
    "alpha_h": ("α_h", _P(97, 0, -52, 0, -122, 0, 12, 0, 1), (1.0, 3.0), 8, 1.174, None, "",
                "some orthic triangles are obtuse"),
    "alpha_h_prime": ("α_h'", _P(1, 0, 12, 0, -122, 0, -52, 0, 97), (2.0, 3.2), 8, 2.605, None, "",
                      "orthic of the upright isosceles orbit is right"),
    "alpha_act": ("α_act", _P(5, 0, -8), (1.0, 3.0), 2, 1.265, 2 * math.sqrt(2 / 5), "2*sqrt(2/5)",
                  "ACT intouchpoint motion turns non-monotonic"),
    "alpha4": ("α4", _P(1, 0, 2, 0, -7), (1.0, 3.0), 4, 1.352, math.sqrt(2 * math.sqrt(2) - 1),
               "sqrt(2*sqrt(2)-1)", "orthocenter locus touches the billiard; obtuse orbits appear"),
    "alpha88_perp": ("α88⊥", _P(121, 0, -297, 0, 121), (1.0, 1.45), 4, 1.392, (7 + _S5) * math.sqrt(11) / 22,
                     "(7+sqrt(5))*sqrt(11)/22", "X88 on a vertex gives a 3:4:5 orbit"),
    "alpha88": ("α88", _P(4, 0, -12, 0, 7), (1.2, 3.0), 4, 1.486, math.sqrt(6 + 2 * math.sqrt(2)) / 2,
                "sqrt(6+2*sqrt(2))/2", "X88 motion turns non-monotonic"),
    "alpha4_star": ("α4*", _P(1, 0, 1, -4, -1, 0, -1), (1.0, 3.0), 6, 1.510, None, "",
                    "orthocenter locus is the billiard turned 90 degrees"),
    "alpha59_perp": ("α59⊥", None, (1.45, 1.7), None, 1.580, None, "",
                     "orbit is right when X59 sits on the lower self-intersection"),
    "sqrt2": ("√2", _P(1, 0, -2), (1.0, 3.0), 2, 1.414, math.sqrt(2), "sqrt(2)",
              "Bevan-point locus touches the billiard's top and bottom vertices"),
    "phi": ("φ", _P(1, -1, -1), (1.0, 3.0), 2, 1.618, (1 + _S5) / 2, "(1+sqrt(5))/2",
            "Bevan-point locus is the billiard turned 90 degrees"),
}

ALIASES = {
    "a162": "alpha162", "ah": "alpha_h", "ah'": "alpha_h_prime", "alpha_h'": "alpha_h_prime",
    "aact": "alpha_act", "a4": "alpha4", "a88perp": "alpha88_perp", "a88": "alpha88",
    "a4*": "alpha4_star", "alpha4*": "alpha4_star", "a59perp": "alpha59_perp", "golden": "phi",
}

NAMES = tuple(_REGISTRY)


def canonical(name: str) -> str:
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    if key not in _REGISTRY:
        raise DomainError(f"unknown threshold {name!r}; known: {', '.join(NAMES)}")
    return key


@lru_cache(maxsize=None)
def threshold(name: str) -> ThresholdSpec:
    """Registry entry with its root computed (polynomial roots, or the numeric search for α59⊥)."""
    key = canonical(name)
    symbol, poly, bracket, degree, ref, cf, text, meaning = _REGISTRY[key]
    if poly is None:
        root = discover_threshold(key)
    else:
        roots = real_roots(poly, bracket)
        if not roots:
            raise DomainError(f"no root of {key} in {bracket}")
        root = max(roots)
    spec = ThresholdSpec(key, symbol, poly, bracket, degree, ref, cf, text, meaning, float(root))
    if cf is not None and abs(spec.root - cf) > CLOSED_FORM_TOL:
        raise DomainError(f"{key}: root {spec.root!r} disagrees with closed form {cf!r}")
    return spec


# --- behavioural predicates ---------------------------------------------
# Each returns True above the threshold (inside the default scan range).


def _family_max(B, fn, n=720):
    t = np.arange(n) * TWO_PI / n
    v = fn(t)
    i = int(np.nanargmax(v))
    h = TWO_PI / n
    _, fx = golden_section(lambda s: float(fn(np.array([s]))[0]), t[i] - h, t[i] + h, tol=1e-11, maximize=True)
    return max(fx, v[i])


def _has_obtuse(ab):
    B = Billiard(ab)
    return _family_max(B, lambda t: largest_angle(B, t)) > math.pi / 2


def _orthic_max_angle(T):
    V = derived_vertices(T, "orthic")
    with np.errstate(invalid="ignore"):
        ang = tri.angles(V)
    return np.max(ang, axis=-1)


def _has_obtuse_orthic(ab):
    B = Billiard(ab)
    return _family_max(B, lambda t: _orthic_max_angle(orbit_family(B, t))) > math.pi / 2


def _upright_orthic_obtuse(ab):
    B = Billiard(ab)
    return float(_orthic_max_angle(orbit_family(B, [math.pi / 2]))[0]) > math.pi / 2


def _reverses(cid):
    def pred(ab):
        v, _ = velocity_extreme(Billiard(ab), cid, "max")
        return v > 0
    return pred


def _act_reverses(ab):
    v, _ = velocity_extreme(Billiard(ab), "act-intouch-1", "min")
    return v < 0


def _x88_vertex_triangle_obtuse(ab):
    hits = vertex_coincidence_x88(Billiard(ab), n=512)
    if not hits:
        return False
    s = hits[0].side_ratios
    return s[2] ** 2 > s[0] ** 2 + s[1] ** 2


def _fitted_extents(B, cid, n=256):
    """x and y semi-axes of the conic fitted to a sampled, axis-aligned locus."""
    _, radii, dirs = fit_locus(sample_locus(B, cid, n))[0].axes()
    r = np.asarray(radii)
    horiz = np.abs(np.asarray(dirs)[:, 0]) > np.abs(np.asarray(dirs)[:, 1])
    return float(r[horiz][0]), float(r[~horiz][0])


def _x4_wider_than_billiard_height(ab):
    B = Billiard(ab)
    return _fitted_extents(B, 4)[0] >= B.b


def _x40_taller_than(attr):
    def pred(ab):
        B = Billiard(ab)
        return _fitted_extents(B, 40)[1] >= getattr(B, attr)
    return pred


def x59_lower_crossing(B: Billiard, n: int = 2048):
    """Lower self-intersection of the X59 locus; returns ``(point, t)`` with t the larger of its pair."""
    cs = self_intersections(sample_locus(B, 59, n))
    if not cs:
        raise DomainError("X59 locus has no self-intersection")
    c = cs[0]
    return c.point, c.t_pair[1]


def _x59_right_at_crossing(ab):
    B = Billiard(ab)
    _, t = x59_lower_crossing(B, n=1024)
    return float(largest_angle(B, [t])[0]) > math.pi / 2


def orthic_orthocenter(B: Billiard, t: float) -> np.ndarray:
    """X4' at ``t``: orthocenter of the orbit's orthic triangle."""
    V = derived_vertices(orbit(B, t).vertices, "orthic")
    return tri.orthocenter(V)


def _x4_orthic_reaches_vertex(ab):
    B = Billiard(ab)
    return abs(float(orthic_orthocenter(B, 0.0)[0])) >= B.a


BEHAVIOURS: dict[str, tuple[Callable[[float], bool], tuple[float, float]]] = {
    "alpha4": (_has_obtuse, SCAN),
    "alpha_act": (_act_reverses, SCAN),
    "alpha88": (_reverses(88), SCAN),
    "alpha162": (_reverses(162), SCAN),
    "alpha_h": (_has_obtuse_orthic, SCAN),
    "alpha_h_prime": (_upright_orthic_obtuse, SCAN),
    "alpha88_perp": (_x88_vertex_triangle_obtuse, SCAN),
    "alpha4_star": (_x4_wider_than_billiard_height, SCAN),
    "alpha59_perp": (_x59_right_at_crossing, (1.45, 1.7)),
    "sqrt2": (_x40_taller_than("b"), SCAN),
    "phi": (_x40_taller_than("a"), SCAN),
    "orthic_x4_touch": (_x4_orthic_reaches_vertex, (1.1, 1.5)),
}

ORTHIC_X4_TOUCH_REFERENCE = 1.325


def discover_threshold(name: str, scan=None, points: int = SCAN_POINTS, resolution: float = RESOLUTION) -> float:
    """Locate a threshold from behaviour alone.

    The predicate is scanned on ``points`` aspect ratios; it must flip
    exactly once, after which the flip is bisected to ``resolution``.
    ``orthic_x4_touch`` (X4' of the sideways orbit reaching the billiard's
    horizontal vertices) is accepted in addition to registry names.
    """
    key = name.strip().lower()
    if key != "orthic_x4_touch":
        key = canonical(key)
    pred, default = BEHAVIOURS[key]
    lo, hi = scan or default
    grid = np.linspace(lo, hi, points)
    vals = [bool(pred(x)) for x in grid]
    flips = [i for i in range(points - 1) if vals[i] != vals[i + 1]]
    if len(flips) != 1:
        brackets = ", ".join(f"[{grid[i]:.6g}, {grid[i + 1]:.6g}]" for i in flips) or "none"
        raise NonMonotonePredicateError(f"{key}: predicate flips {len(flips)} times on [{lo}, {hi}]; brackets: {brackets}")
    i = flips[0]
    return bisect_sign(pred, float(grid[i]), float(grid[i + 1]), tol=resolution)
