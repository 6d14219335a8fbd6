"""Numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable. Both modules
expose the same three functions with the same array contracts.
"""
import numpy as np

STATUS_OK = 0
STATUS_INFINITY = 1
STATUS_UNDEFINED = 2


def orbit_vertices(a, b, ac, bc, t):
    """Vertices of the 3-periodic through ``(a cos t, b sin t)``.

    Returns an ``(n, 3, 2)`` array, each triangle counterclockwise with the
    leading vertex first.
    """
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    x1 = a * np.cos(t)
    y1 = b * np.sin(t)
    # polar of P1 w.r.t. the caustic: (x1/ac) cos th + (y1/bc) sin th = 1
    ca = x1 / ac
    cb = y1 / bc
    phi = np.arctan2(cb, ca)
    w = np.arccos(np.clip(1.0 / np.hypot(ca, cb), -1.0, 1.0))
    out = np.empty(t.shape + (3, 2))
    out[:, 0, 0] = x1
    out[:, 0, 1] = y1
    for k, th in enumerate((phi + w, phi - w), start=1):
        dx = ac * np.cos(th) - x1
        dy = bc * np.sin(th) - y1
        s = -2.0 * (x1 * dx / a**2 + y1 * dy / b**2) / (dx**2 / a**2 + dy**2 / b**2)
        out[:, k, 0] = x1 + s * dx
        out[:, k, 1] = y1 + s * dy
    e1 = out[:, 1] - out[:, 0]
    e2 = out[:, 2] - out[:, 0]
    cw = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] < 0
    out[cw] = out[cw][:, [0, 2, 1]]
    return out


def sidelengths(P):
    """``(n, 3)`` sidelengths, ``s[i]`` opposite vertex ``i``."""
    P = np.asarray(P, dtype=np.float64)
    return np.stack(
        [
            np.hypot(*(P[..., 2, :] - P[..., 1, :]).T).T,
            np.hypot(*(P[..., 0, :] - P[..., 2, :]).T).T,
            np.hypot(*(P[..., 1, :] - P[..., 0, :]).T).T,
        ],
        axis=-1,
    )


def trilinear_to_cartesian(P, s, tri, rel_eps=1e-12):
    """Convert trilinears to points; returns ``(points, status)``.

    ``status`` is STATUS_INFINITY where ``|D|`` falls below ``rel_eps`` times
    the weight scale and STATUS_UNDEFINED where the triple is zero or
    non-finite. Affected rows of ``points`` are NaN.
    """
    w = np.asarray(s, dtype=np.float64) * np.asarray(tri, dtype=np.float64)
    D = w.sum(axis=-1)
    scale = np.abs(w).sum(axis=-1)
    finite = np.isfinite(w).all(axis=-1)
    status = np.full(D.shape, STATUS_OK, dtype=np.int8)
    undefined = ~finite | (scale == 0)
    infinite = ~undefined & (np.abs(D) < rel_eps * scale)
    status[undefined] = STATUS_UNDEFINED
    status[infinite] = STATUS_INFINITY
    with np.errstate(invalid="ignore", divide="ignore"):
        pts = np.einsum("...i,...ij->...j", w, P) / D[..., None]
    pts[status != STATUS_OK] = np.nan
    return pts, status
