"""Vectorised triangle geometry.

Triangles are arrays of shape ``(..., 3, 2)``. Side ``s[i]`` is opposite
vertex ``i`` and angle ``A[i]`` sits at vertex ``i``.
"""
import numpy as np

from ._backend import kernels


def as_triangles(T):
    T = np.asarray(T, dtype=np.float64)
    if T.shape[-2:] != (3, 2):
        raise ValueError(f"expected (..., 3, 2) vertices, got shape {T.shape}")
    return T


def sidelengths(T):
    return kernels.sidelengths(as_triangles(T))


def _cross(u, v):
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def signed_area(T):
    T = as_triangles(T)
    return 0.5 * _cross(T[..., 1, :] - T[..., 0, :], T[..., 2, :] - T[..., 0, :])


def cosines(s):
    s1, s2, s3 = np.moveaxis(np.asarray(s), -1, 0)
    return np.stack(
        [
            (s2**2 + s3**2 - s1**2) / (2 * s2 * s3),
            (s3**2 + s1**2 - s2**2) / (2 * s3 * s1),
            (s1**2 + s2**2 - s3**2) / (2 * s1 * s2),
        ],
        axis=-1,
    )


def angles(T):
    """Interior angles; ``atan2`` form stays accurate near 0 and pi."""
    T = as_triangles(T)
    out = []
    for i in range(3):
        u = T[..., (i + 1) % 3, :] - T[..., i, :]
        v = T[..., (i + 2) % 3, :] - T[..., i, :]
        out.append(np.abs(np.arctan2(_cross(u, v), (u * v).sum(axis=-1))))
    return np.stack(out, axis=-1)


def weighted(T, w):
    """Point with barycentric weights ``w`` (need not be normalized)."""
    w = np.asarray(w, dtype=float)
    return np.einsum("...i,...ij->...j", w, as_triangles(T)) / w.sum(axis=-1)[..., None]


def centroid(T):
    return as_triangles(T).mean(axis=-2)


def incenter(T):
    return weighted(T, sidelengths(T))


def circumcenter(T):
    T = as_triangles(T)
    a, b, c = T[..., 0, :], T[..., 1, :], T[..., 2, :]
    d = 2 * _cross(b - a, c - a)
    bb = ((b - a) ** 2).sum(axis=-1)
    cc = ((c - a) ** 2).sum(axis=-1)
    ux = ((c - a)[..., 1] * bb - (b - a)[..., 1] * cc) / d
    uy = ((b - a)[..., 0] * cc - (c - a)[..., 0] * bb) / d
    return a + np.stack([ux, uy], axis=-1)


def orthocenter(T):
    T = as_triangles(T)
    return T.sum(axis=-2) - 2 * circumcenter(T)


def circumradius(T):
    s = sidelengths(T)
    return s.prod(axis=-1) / (4 * np.abs(signed_area(T)))


def inradius(T):
    s = sidelengths(T)
    return 2 * np.abs(signed_area(T)) / s.sum(axis=-1)


def excenters(T):
    """Excenter ``J[i]`` opposite vertex ``i``."""
    T = as_triangles(T)
    s = sidelengths(T)
    out = []
    for i in range(3):
        w = s.copy()
        w[..., i] *= -1
        out.append(weighted(T, w))
    return np.stack(out, axis=-2)


def exradii(T):
    s = sidelengths(T)
    area = np.abs(signed_area(T))
    sp = s.sum(axis=-1, keepdims=True) / 2
    return area[..., None] / (sp - s)


def line_intersection(p, d, q, e):
    """Intersection of ``p + u d`` and ``q + v e``; NaN when parallel."""
    den = _cross(d, e)
    with np.errstate(divide="ignore", invalid="ignore"):
        u = _cross(q - p, e) / den
    return p + u[..., None] * d


def foot(p, a, b):
    """Foot of the perpendicular from ``p`` onto line ``ab``."""
    d = b - a
    lam = ((p - a) * d).sum(axis=-1) / (d * d).sum(axis=-1)
    return a + lam[..., None] * d
