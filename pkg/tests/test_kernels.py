"""Both kernel backends against each other and against direct formulas."""
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from ebilliard import _pykernels
from ebilliard._backend import BACKEND, STATUS_INFINITY, STATUS_OK, STATUS_UNDEFINED
from ebilliard.billiard import Billiard


def _args(B):
    ac, bc = B.caustic_axes
    return B.a, B.b, ac, bc


def test_orbit_vertices_on_billiard_and_ccw(kernels):
    B = Billiard(1.7)
    t = np.linspace(0, 2 * np.pi, 257)
    P = kernels.orbit_vertices(*_args(B), t)
    assert P.shape == (257, 3, 2)
    assert np.abs(B.f(P[..., 0], P[..., 1]) - 1).max() < 1e-13
    e1, e2 = P[:, 1] - P[:, 0], P[:, 2] - P[:, 0]
    assert np.all(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] > 0)
    np.testing.assert_allclose(P[:, 0], np.column_stack([B.a * np.cos(t), B.b * np.sin(t)]), atol=1e-15)


def test_backends_agree(kernels):
    B = Billiard(2.3)
    t = np.random.default_rng(3).uniform(0, 2 * np.pi, 500)
    ref = _pykernels.orbit_vertices(*_args(B), t)
    P = kernels.orbit_vertices(*_args(B), t)
    assert np.abs(P - ref).max() < 1e-13
    np.testing.assert_allclose(kernels.sidelengths(P), _pykernels.sidelengths(P), rtol=1e-15)


def test_sidelengths_opposite_convention(kernels):
    P = np.array([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]])
    np.testing.assert_allclose(kernels.sidelengths(P), [5.0, 3.0, 4.0])
    assert kernels.sidelengths(np.stack([P, P]))[..., 0].tolist() == [5.0, 5.0]


def test_trilinear_statuses(kernels):
    P = np.array([[0.0, 0.0], [4.0, 0.0], [0.0, 3.0]])
    s = kernels.sidelengths(P)
    pts, st = kernels.trilinear_to_cartesian(P, s, np.ones(3))
    assert st[()] == STATUS_OK
    np.testing.assert_allclose(pts, [1.0, 1.0])  # inradius 1
    # sum of s_i x_i = 0 puts the point at infinity
    _, st = kernels.trilinear_to_cartesian(P, s, np.array([1 / s[0], -1 / s[1], 0.0]))
    assert st[()] == STATUS_INFINITY
    pts, st = kernels.trilinear_to_cartesian(P, s, np.zeros(3))
    assert st[()] == STATUS_UNDEFINED and np.isnan(pts).all()
    _, st = kernels.trilinear_to_cartesian(P, s, np.array([np.nan, 1.0, 1.0]))
    assert st[()] == STATUS_UNDEFINED


def test_trilinear_vertex(kernels):
    P = np.array([[1.0, 2.0], [5.0, -1.0], [0.5, 4.0]])
    s = kernels.sidelengths(P)
    for i in range(3):
        tri = np.zeros(3)
        tri[i] = 1.0
        pts, _ = kernels.trilinear_to_cartesian(P, s, tri)
        np.testing.assert_allclose(pts, P[i], atol=1e-14)


def test_accepts_read_only_input(kernels):
    P = _pykernels.orbit_vertices(*_args(Billiard(1.5)), np.linspace(0, 1, 5))
    P.setflags(write=False)
    s = kernels.sidelengths(P)
    s.setflags(write=False)
    pts, st = kernels.trilinear_to_cartesian(P, s, s)
    assert (st == STATUS_OK).all()


def test_env_switch_selects_fallback():
    code = "from ebilliard._backend import BACKEND; print(BACKEND)"
    env = dict(os.environ, EBILLIARD_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert BACKEND in ("python", "cython")
