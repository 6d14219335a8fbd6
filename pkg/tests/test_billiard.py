import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from ebilliard import triangle as tri
from ebilliard.billiard import (
    Billiard,
    adaptive_simpson,
    caustic,
    caustic_arc_params,
    caustic_residuals,
    invariant_report,
    orbit,
    orbit_family,
    orbit_oracle,
    poritsky,
    reflection_residuals,
    right_triangle_params,
    shape_class,
    tangency_thetas,
    x4_position,
)
from ebilliard.errors import ClosureError, ConvergenceError, DomainError

aspect = st.floats(1.02, 3.0)
angle = st.floats(0, 2 * math.pi)


def isosceles_uv(a, b):
    """Sideways isosceles orbit P2 = (-u, v) in closed form."""
    c2 = a * a - b * b
    d = math.sqrt(a**4 - a * a * b * b + b**4)
    return a * (d - b * b) / c2, b * b * math.sqrt(2 * d - a * a - b * b) / c2


def test_domain():
    with pytest.raises(DomainError):
        Billiard(1.0)
    with pytest.raises(DomainError):
        Billiard(1.0, 2.0)
    B = Billiard.from_aspect(3.0, b=2.0)
    assert (B.a, B.b, B.aspect) == (6.0, 2.0, 3.0)


def test_caustic_axes_values():
    ac, bc = Billiard(1.5).caustic_axes
    assert ac == pytest.approx(1.1430749, abs=1e-7)
    assert bc == pytest.approx(0.23795006, abs=1e-8)
    assert Billiard(1.5).delta == pytest.approx(math.sqrt(1.5**4 - 1.5**2 + 1))


@pytest.mark.parametrize("ab", [1.1, 1.5, 2.7])
def test_isosceles_matches_closed_form(ab):
    B = Billiard(ab)
    u, v = isosceles_uv(B.a, B.b)
    o = orbit(B, 0.0)
    np.testing.assert_allclose(o.P2, [-u, v], atol=1e-14)
    np.testing.assert_allclose(o.P3, [-u, -v], atol=1e-14)


def test_orbit_t0_values(B15):
    o = orbit(B15, 0.0)
    np.testing.assert_allclose(o.P2, [-1.143074903, 0.647518259], atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(aspect, angle)
def test_orbit_is_a_billiard_trajectory(ab, t):
    B = Billiard(ab)
    o = orbit(B, t)
    assert np.abs(B.f(o.vertices[:, 0], o.vertices[:, 1]) - 1).max() < 1e-12
    assert caustic_residuals(B, o.vertices).max() < 1e-12 * B.a
    assert reflection_residuals(B, o.vertices).max() < 1e-10
    assert tri.signed_area(o.vertices) > 0


@settings(max_examples=25, deadline=None)
@given(st.floats(1.05, 2.5), angle)
def test_oracle_agrees(ab, t):
    B = Billiard(ab)
    assert np.abs(orbit(B, t).vertices - orbit_oracle(B, t).vertices).max() < 1e-9


def test_closure_error_on_foreign_caustic(monkeypatch):
    B = Billiard(1.5)
    ac, bc = B.caustic_axes
    monkeypatch.setattr(Billiard, "caustic_axes", property(lambda self: (ac * 1.01, bc)))
    with pytest.raises(ClosureError):
        orbit(B, 0.3)


def test_oracle_failure_raises(monkeypatch):
    import ebilliard.billiard as bmod

    monkeypatch.setattr(bmod, "_newton", lambda *a, **k: None)
    with pytest.raises(ConvergenceError):
        orbit_oracle(Billiard(1.5), 0.2)


@pytest.mark.parametrize("ab", [1.25, 1.5, 2.0, 3.0])
def test_invariants(ab):
    r = invariant_report(Billiard(ab), 1000)
    assert max(r.perimeter_spread, r.r_over_R_spread, r.cosine_sum_spread) < 1e-12
    assert r.x9_max < 1e-12
    assert r.cosine_sum == pytest.approx(1 + r.r_over_R, abs=1e-12)


def test_invariant_report_needs_samples():
    with pytest.raises(DomainError):
        invariant_report(Billiard(1.5), 3)


def test_family_is_vectorised():
    B = Billiard(1.8)
    t = np.linspace(0, 1, 7)
    P = orbit_family(B, t)
    for k in range(7):
        np.testing.assert_array_equal(P[k], orbit(B, t[k]).vertices)


def test_shape_classes():
    assert shape_class(orbit(Billiard(1.2), 0.4)).kind == "acute"
    B = Billiard(2.0)
    o = orbit(B, math.pi / 2)
    sc = shape_class(o)
    assert sc.kind == "obtuse" and sc.vertex == 0
    assert x4_position(o) == "outside"
    right = np.array([[0, 0], [1, 0], [0, 1.0]])
    assert shape_class(right) == ("right", 0)


def test_right_triangles_absent_below_threshold_and_x4_on_billiard():
    assert right_triangle_params(Billiard(1.3)) == []
    B = Billiard(1.6)
    ts = right_triangle_params(B)
    assert len(ts) == 12
    for t in ts:
        o = orbit(B, t)
        assert abs(o.angles.max() - math.pi / 2) < 1e-12
        assert x4_position(o) == "on"


def test_adaptive_simpson():
    assert adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-10)
    assert adaptive_simpson(math.exp, 1, 1) == 0.0
    with pytest.raises(ConvergenceError):
        adaptive_simpson(lambda x: math.sin(1 / x) if x else 0.0, 0.0, 1.0, tol=1e-15, max_depth=4)


def _quad_eta(ac, bc, theta):
    """Normalised integral of kappa^(2/3) ds along the caustic from (ac, 0)."""
    kappa = lambda th: ac * bc / ((ac * math.sin(th)) ** 2 + (bc * math.cos(th)) ** 2) ** 1.5
    ds = lambda th: math.hypot(ac * math.sin(th), bc * math.cos(th))
    g = lambda th: kappa(th) ** (2 / 3) * ds(th)
    total = quad(g, 0, 2 * math.pi, limit=200, epsabs=1e-13)[0]
    return quad(g, 0, theta, limit=200, epsabs=1e-13)[0] / total


@pytest.mark.parametrize("theta", [0.0, 0.4, 1.9, 3.3, 5.0])
def test_poritsky_matches_quad(theta):
    B = Billiard(1.5)
    ac, bc = B.caustic_axes
    p = caustic_arc_params(B, theta)
    assert p.eta == pytest.approx(_quad_eta(ac, bc, theta), abs=1e-9)
    s_ref = quad(lambda th: math.hypot(ac * math.sin(th), bc * math.cos(th)), 0, theta, epsabs=1e-13)[0]
    assert p.s == pytest.approx(s_ref, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.floats(1.05, 2.5), angle)
def test_poritsky_spacing_is_one_third(ab, t):
    B = Billiard(ab)
    etas = [poritsky(B, t, k).eta for k in range(3)]
    for k in range(3):
        gap = (etas[(k + 1) % 3] - etas[k]) % 1.0
        assert gap == pytest.approx(1 / 3, abs=1e-8)


def test_tangency_points_on_caustic(B15):
    o = orbit(B15, 0.9)
    ell = caustic(B15)
    for th in tangency_thetas(B15, o):
        p = ell.point(th)
        assert abs(ell.f(*p) - 1) < 1e-14


def test_oracle_recovers_from_bad_construction_seed(monkeypatch):
    import ebilliard.billiard as bmod

    B = Billiard(1.5)
    good = orbit(B, 0.3).vertices
    bogus = np.array([[[1.5, 0.0], [1.4, 0.1], [1.3, 0.2]]])
    monkeypatch.setattr(bmod, "orbit_family", lambda *_: bogus)
    assert np.abs(orbit_oracle(B, 0.3).vertices - good).max() < 1e-12
