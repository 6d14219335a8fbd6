import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ebilliard.conics import (
    Conic,
    Ellipse,
    Line,
    RealPolynomial,
    classify_conic,
    fit_conic,
    line_ellipse_intersect,
    real_roots,
    tangents_from_point,
)
from ebilliard.errors import DegenerateFitError, DomainError

axes = st.floats(0.2, 5.0)
angle = st.floats(0, 2 * math.pi)


def test_ellipse_basics():
    e = Ellipse(2.0, 1.0)
    assert e.f(2.0, 0.0) == 1.0
    np.testing.assert_allclose(e.point(math.pi / 2), [0.0, 1.0], atol=1e-15)
    assert e.param(np.array([0.0, 1.0])) == pytest.approx(math.pi / 2)
    assert e.strict and not Ellipse(1.0, 2.0).strict
    assert (Ellipse(1.0, 2.0).semi_major, Ellipse(1.0, 2.0).semi_minor) == (2.0, 1.0)
    with pytest.raises(DomainError):
        Ellipse(0.0, 1.0)


@given(axes, axes, angle, st.floats(1.01, 4.0))
def test_tangents_touch_and_pass_through(a, b, th, scale):
    e = Ellipse(a, b, (0.3, -0.2))
    p = np.asarray(e.center) + scale * (np.asarray(e.point(th)) - np.asarray(e.center))
    lines = tangents_from_point(e, p)
    assert len(lines) == 2
    for ln in lines:
        assert e.tangency_residual(ln) < 1e-9 * max(a, b, 1)
        assert abs(e.f(*ln.point) - 1) < 1e-12
        # p lies on the line
        d = ln.direction / np.hypot(*ln.direction)
        w = p - ln.point
        assert abs(w[0] * d[1] - w[1] * d[0]) < 1e-9 * max(1, np.hypot(*w))
        np.testing.assert_allclose(e.touch_point(ln), ln.point, atol=1e-8 * max(a, b, 1))


def test_tangents_inside_and_on():
    e = Ellipse(2.0, 1.0)
    assert tangents_from_point(e, [0.1, 0.1]) == []
    (ln,) = tangents_from_point(e, [2.0, 0.0])
    assert abs(ln.direction[0]) < 1e-15


def test_line_intersections():
    e = Ellipse(2.0, 1.0)
    pts = line_ellipse_intersect(e, Line(np.array([-5.0, 0.0]), np.array([1.0, 0.0])))
    np.testing.assert_allclose(np.array(pts), [[-2.0, 0.0], [2.0, 0.0]])
    tang = line_ellipse_intersect(e, Line(np.array([0.0, 1.0]), np.array([1.0, 0.0])))
    assert len(tang) == 2 and np.allclose(tang[0], tang[1])
    assert line_ellipse_intersect(e, Line(np.array([0.0, 1.5]), np.array([1.0, 0.0]))) == []


def test_conic_normalisation_and_classes():
    c = Conic.from_coefficients(-2, 0, -8, 0, 0, 8)
    assert c.coefficients[0] > 0
    assert math.isclose(np.linalg.norm(c.coefficients), 1.0)
    assert classify_conic(c) == "ellipse"
    assert classify_conic(Conic.from_coefficients(1, 0, -1, 0, 0, -1)) == "hyperbola"
    assert classify_conic(Conic.from_coefficients(0, 0, 1, -1, 0, 0)) == "parabola"
    assert classify_conic(Conic.from_coefficients(1, 0, 1, 0, 0, 1)) == "degenerate"  # imaginary
    assert classify_conic(Conic.from_coefficients(1, 0, -1, 0, 0, 0)) == "degenerate"  # line pair
    with pytest.raises(DomainError):
        Conic.from_coefficients(0, 0, 0, 0, 0, 0)


@settings(max_examples=40)
@given(axes, axes, st.floats(-3, 3), st.floats(-3, 3), angle)
def test_fit_recovers_rotated_ellipse(a, b, cx, cy, rot):
    th = np.linspace(0, 2 * np.pi, 50, endpoint=False)
    R = np.array([[math.cos(rot), -math.sin(rot)], [math.sin(rot), math.cos(rot)]])
    pts = np.column_stack([a * np.cos(th), b * np.sin(th)]) @ R.T + [cx, cy]
    c, res = fit_conic(pts)
    assert res < 1e-9
    assert classify_conic(c, tol=1e-14) == "ellipse"
    center, radii, _ = c.axes()
    np.testing.assert_allclose(center, [cx, cy], atol=1e-7 * max(1, a, b))
    np.testing.assert_allclose(sorted(radii), sorted([a, b]), rtol=1e-7)
    assert c.aspect() == pytest.approx(max(a, b) / min(a, b), rel=1e-7)


def test_fit_rejects_degenerate_input():
    with pytest.raises(DegenerateFitError):
        fit_conic(np.zeros((3, 2)))
    with pytest.raises(DegenerateFitError):
        fit_conic(np.column_stack([np.arange(10.0), 2 * np.arange(10.0)]))


def test_ellipse_to_conic_roundtrip():
    e = Ellipse(3.0, 1.25, (1.0, -2.0))
    c = e.to_conic()
    assert abs(c(*e.point(0.7))) < 1e-15
    center, radii, _ = c.axes()
    np.testing.assert_allclose(center, e.center)
    np.testing.assert_allclose(radii, (3.0, 1.25))


@settings(max_examples=60)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=6, unique=True))
def test_real_roots_match_numpy(roots):
    roots = sorted(roots)
    if min(np.diff(roots), default=1) < 1e-3:
        return
    p = RealPolynomial(tuple(np.polynomial.polynomial.polyfromroots(roots)))
    got = real_roots(p, (-3.5, 3.5))
    ref = sorted(r.real for r in np.roots(p.coefficients[::-1]) if abs(r.imag) < 1e-9)
    np.testing.assert_allclose(got, ref, atol=1e-9)
    np.testing.assert_allclose(got, roots, atol=1e-9)


def test_real_polynomial_basics():
    p = RealPolynomial.from_descending(1, 0, -2)
    assert p.degree == 2 and p(3.0) == 7.0
    assert p.deriv()(2.0) == 4.0
    assert RealPolynomial((1.0, 2.0, 0.0)).degree == 1
    with pytest.raises(DomainError):
        RealPolynomial((0.0,))
    assert real_roots(RealPolynomial.from_descending(1, 0, 1), (-5, 5)) == []
