# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, acos, cos, sin, sqrt, fabs, isfinite

cnp.import_array()

STATUS_OK = 0
STATUS_INFINITY = 1
STATUS_UNDEFINED = 2


def orbit_vertices(double a, double b, double ac, double bc, t):
    cdef const double[::1] tv = np.ascontiguousarray(np.atleast_1d(t), dtype=np.float64)
    cdef Py_ssize_t n = tv.shape[0]
    out_arr = np.empty((n, 3, 2), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef Py_ssize_t i
    cdef int k
    cdef double x1, y1, ca, cb, phi, w, th, dx, dy, s, r, a2 = a * a, b2 = b * b
    cdef double ex1, ey1, ex2, ey2, tmp
    for i in range(n):
        x1 = a * cos(tv[i])
        y1 = b * sin(tv[i])
        ca = x1 / ac
        cb = y1 / bc
        phi = atan2(cb, ca)
        r = 1.0 / sqrt(ca * ca + cb * cb)
        if r > 1.0:
            r = 1.0
        w = acos(r)
        out[i, 0, 0] = x1
        out[i, 0, 1] = y1
        for k in range(1, 3):
            th = phi + w if k == 1 else phi - w
            dx = ac * cos(th) - x1
            dy = bc * sin(th) - y1
            s = -2.0 * (x1 * dx / a2 + y1 * dy / b2) / (dx * dx / a2 + dy * dy / b2)
            out[i, k, 0] = x1 + s * dx
            out[i, k, 1] = y1 + s * dy
        ex1 = out[i, 1, 0] - x1
        ey1 = out[i, 1, 1] - y1
        ex2 = out[i, 2, 0] - x1
        ey2 = out[i, 2, 1] - y1
        if ex1 * ey2 - ey1 * ex2 < 0:
            for k in range(2):
                tmp = out[i, 1, k]
                out[i, 1, k] = out[i, 2, k]
                out[i, 2, k] = tmp
    return out_arr


def sidelengths(P):
    arr = np.ascontiguousarray(P, dtype=np.float64)
    shape = arr.shape[:-2]
    cdef const double[:, :, ::1] v = arr.reshape(-1, 3, 2)
    cdef Py_ssize_t n = v.shape[0], i
    res = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] s = res
    cdef double dx, dy
    for i in range(n):
        dx = v[i, 2, 0] - v[i, 1, 0]
        dy = v[i, 2, 1] - v[i, 1, 1]
        s[i, 0] = sqrt(dx * dx + dy * dy)
        dx = v[i, 0, 0] - v[i, 2, 0]
        dy = v[i, 0, 1] - v[i, 2, 1]
        s[i, 1] = sqrt(dx * dx + dy * dy)
        dx = v[i, 1, 0] - v[i, 0, 0]
        dy = v[i, 1, 1] - v[i, 0, 1]
        s[i, 2] = sqrt(dx * dx + dy * dy)
    return res.reshape(shape + (3,))


def trilinear_to_cartesian(P, s, tri, double rel_eps=1e-12):
    Parr = np.ascontiguousarray(P, dtype=np.float64)
    shape = Parr.shape[:-2]
    cdef const double[:, :, ::1] v = Parr.reshape(-1, 3, 2)
    cdef const double[:, ::1] sv = np.ascontiguousarray(s, dtype=np.float64).reshape(-1, 3)
    cdef const double[:, ::1] tv = np.ascontiguousarray(
        np.broadcast_to(tri, Parr.shape[:-1]), dtype=np.float64).reshape(-1, 3)
    cdef Py_ssize_t n = v.shape[0], i
    cdef int j
    pts_arr = np.empty((n, 2), dtype=np.float64)
    st_arr = np.zeros(n, dtype=np.int8)
    cdef double[:, ::1] pts = pts_arr
    cdef signed char[::1] st = st_arr
    cdef double w0, w1, w2, D, scale
    cdef double nan = float("nan")
    for i in range(n):
        w0 = sv[i, 0] * tv[i, 0]
        w1 = sv[i, 1] * tv[i, 1]
        w2 = sv[i, 2] * tv[i, 2]
        D = w0 + w1 + w2
        scale = fabs(w0) + fabs(w1) + fabs(w2)
        if not (isfinite(w0) and isfinite(w1) and isfinite(w2)) or scale == 0:
            st[i] = 2
        elif fabs(D) < rel_eps * scale:
            st[i] = 1
        if st[i] != 0:
            pts[i, 0] = nan
            pts[i, 1] = nan
            continue
        for j in range(2):
            pts[i, j] = (w0 * v[i, 0, j] + w1 * v[i, 1, j] + w2 * v[i, 2, j]) / D
    return pts_arr.reshape(shape + (2,)), st_arr.reshape(shape)
