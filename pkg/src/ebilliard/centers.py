"""Trilinear engine, the shipped center catalog and derived triangles."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from . import triangle as tri
from ._backend import STATUS_INFINITY, STATUS_OK, STATUS_UNDEFINED, kernels
from .conics import Conic
from .errors import (
    DegenerateTriangleError,
    DomainError,
    PointAtInfinityError,
    UndefinedCenterError,
)
from .formula import Formula

DERIVED_KINDS = (
    "orthic",
    "excentral",
    "medial",
    "anticomplementary",
    "tangential",
    "intouch",
    "extouch",
    "feuerbach",
)


# --- trilinears ---------------------------------------------------------


@dataclass(frozen=True)
class Trilinears:
    """Projective triple ``x : y : z``; equality is projective."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.x == 0 and self.y == 0 and self.z == 0:
            raise DomainError("trilinears 0:0:0 do not define a point")

    def normalized(self) -> tuple[float, float, float]:
        v = np.array([self.x, self.y, self.z], dtype=float)
        v /= np.linalg.norm(v)
        if v[np.flatnonzero(v)[0]] < 0:
            v = -v
        return tuple(float(c) for c in v)

    def __eq__(self, other):
        if not isinstance(other, Trilinears):
            return NotImplemented
        return bool(np.allclose(self.normalized(), other.normalized(), rtol=0, atol=1e-12))

    def __hash__(self):
        return hash(tuple(round(c, 12) for c in self.normalized()))

    def __iter__(self):
        return iter((self.x, self.y, self.z))


def trilinear_to_cartesian(T, t: Trilinears, rel_eps: float = 1e-12):
    """``(s1 x P1 + s2 y P2 + s3 z P3) / D`` with ``D = s1 x + s2 y + s3 z``."""
    T = tri.as_triangles(T)
    pts, status = kernels.trilinear_to_cartesian(
        T[None], tri.sidelengths(T)[None], np.array([tuple(t)], dtype=float), rel_eps
    )
    _raise_status(int(status[0]), "trilinear point")
    return pts[0]


def _raise_status(status, what):
    if status == STATUS_INFINITY:
        raise PointAtInfinityError(f"{what} is at infinity (D ~ 0)")
    if status == STATUS_UNDEFINED:
        raise UndefinedCenterError(f"{what} is undefined for this triangle")


# --- catalog ------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    id: int | str
    name: str
    kind: str  # trilinear | conjugate | construct
    definition: str
    rail: str | None
    source: str

    @property
    def label(self):
        return f"X{self.id}" if isinstance(self.id, int) else self.id


def normalize_id(cid) -> int | str:
    """Accept ``88``, ``'88'``, ``'X88'`` or a constructive name."""
    if isinstance(cid, (int, np.integer)):
        return int(cid)
    s = str(cid).strip()
    if s[:1] in "xX" and s[1:].isdigit():
        return int(s[1:])
    if s.isdigit():
        return int(s)
    return s


def parse_catalog(text: str) -> dict:
    entries = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 6:
            raise ValueError(f"catalog row needs 6 tab-separated fields: {line!r}")
        cid, name, kind, definition, rail, source = fields
        if kind not in ("trilinear", "conjugate", "construct"):
            raise ValueError(f"unknown catalog kind {kind!r}")
        cid = normalize_id(cid)
        entries[cid] = CatalogEntry(cid, name, kind, definition, None if rail == "-" else rail, source)
    for e in entries.values():
        if e.kind == "trilinear":
            Formula(e.definition)
        elif e.kind == "conjugate" and normalize_id(e.definition) not in entries:
            raise ValueError(f"{e.label}: conjugate of unknown id {e.definition!r}")
        elif e.kind == "construct" and e.definition.split(":")[0] not in _RECIPES:
            raise ValueError(f"{e.label}: unknown recipe {e.definition!r}")
    return entries


@lru_cache(maxsize=1)
def catalog() -> dict:
    """The shipped catalog, keyed by center id."""
    text = resources.files("ebilliard").joinpath("data/catalog.tsv").read_text()
    return parse_catalog(text)


def catalog_version() -> str:
    text = resources.files("ebilliard").joinpath("data/catalog.tsv").read_text()
    for line in text.splitlines():
        if line.startswith("# version"):
            return line.split("\t")[1].strip()
    return "unknown"


def entry(cid) -> CatalogEntry:
    cid = normalize_id(cid)
    try:
        return catalog()[cid]
    except KeyError:
        raise KeyError(f"center {cid!r} is not in the catalog") from None


@lru_cache(maxsize=None)
def _formula(text):
    return Formula(text)


# --- derived triangles --------------------------------------------------


def _degenerate(V, T):
    scale = np.abs(tri.sidelengths(T)).max(axis=-1) ** 2
    with np.errstate(invalid="ignore"):
        return ~np.isfinite(V).all(axis=(-1, -2)) | (np.abs(tri.signed_area(V)) < 1e-12 * scale)


def derived_vertices(T, kind: str) -> np.ndarray:
    """Vectorised derived triangle; vertex ``i`` corresponds to reference vertex ``i``.

    orthic: foot of the altitude from ``P_i``. excentral: excenter opposite
    ``P_i``. medial: midpoint of the side opposite ``P_i``.
    anticomplementary: ``P_j + P_k - P_i``. tangential: meet of the
    circumcircle tangents at ``P_j`` and ``P_k``. intouch / extouch: contact
    of the incircle / ``P_i``-excircle with the side opposite ``P_i``.
    feuerbach: contact of the nine-point circle with the ``P_i``-excircle.
    Degenerate rows are NaN.
    """
    T = tri.as_triangles(T)
    P = [T[..., i, :] for i in range(3)]
    s = tri.sidelengths(T)
    out = []
    if kind == "orthic":
        out = [tri.foot(P[i], P[(i + 1) % 3], P[(i + 2) % 3]) for i in range(3)]
    elif kind == "excentral":
        return tri.excenters(T)
    elif kind == "medial":
        out = [(P[(i + 1) % 3] + P[(i + 2) % 3]) / 2 for i in range(3)]
    elif kind == "anticomplementary":
        out = [P[(i + 1) % 3] + P[(i + 2) % 3] - P[i] for i in range(3)]
    elif kind == "tangential":
        O = tri.circumcenter(T)
        tangent = lambda p: np.stack([-(p - O)[..., 1], (p - O)[..., 0]], axis=-1)
        out = [
            tri.line_intersection(P[(i + 1) % 3], tangent(P[(i + 1) % 3]), P[(i + 2) % 3], tangent(P[(i + 2) % 3]))
            for i in range(3)
        ]
    elif kind in ("intouch", "extouch"):
        sp = s.sum(axis=-1) / 2
        for i in range(3):
            j, k = (i + 1) % 3, (i + 2) % 3
            # distance from P_j along side P_j P_k
            d = sp - s[..., j] if kind == "intouch" else sp - s[..., k]
            out.append(P[j] + (d / s[..., i])[..., None] * (P[k] - P[j]))
    elif kind == "feuerbach":
        N = (tri.circumcenter(T) + tri.orthocenter(T)) / 2
        half_R = tri.circumradius(T) / 2
        J = tri.excenters(T)
        for i in range(3):
            d = J[..., i, :] - N
            out.append(N + (half_R / np.hypot(d[..., 0], d[..., 1]))[..., None] * d)
    else:
        raise ValueError(f"unknown derived triangle kind {kind!r}; expected one of {DERIVED_KINDS}")
    V = np.stack(out, axis=-2)
    if kind in ("orthic", "tangential"):
        V = np.where(_degenerate(V, T)[..., None, None], np.nan, V)
    return V


@dataclass(frozen=True, eq=False)
class DerivedTriangle:
    kind: str
    vertices: np.ndarray


def derived_triangle(T, kind: str) -> DerivedTriangle:
    T = tri.as_triangles(T)
    if T.ndim != 2:
        raise ValueError("derived_triangle takes a single triangle; use derived_vertices for batches")
    V = derived_vertices(T, kind)
    if not np.isfinite(V).all():
        reason = "right reference triangle" if kind in ("orthic", "tangential") else "degenerate input"
        raise DegenerateTriangleError(kind, reason)
    return DerivedTriangle(kind, V)


# --- constructive recipes ----------------------------------------------


def _status_from_points(V):
    st = np.where(np.isfinite(V).all(axis=-1), STATUS_OK, STATUS_INFINITY).astype(np.int8)
    return np.where(st[..., None] == STATUS_OK, V, np.nan), st


def _circumcenter_of(V):
    with np.errstate(invalid="ignore", divide="ignore"):
        return _status_from_points(tri.circumcenter(V))


def _orthic_incenter_batch(T):
    ang = tri.angles(T)
    k = np.argmax(ang, axis=-1)
    amax = np.take_along_axis(ang, k[..., None], axis=-1)[..., 0]
    H = tri.orthocenter(T)
    vertex = np.take_along_axis(T, k[..., None, None].repeat(2, axis=-1), axis=-2)[..., 0, :]
    out = np.where((amax > math.pi / 2)[..., None], vertex, H)
    st = np.where(np.abs(amax - math.pi / 2) <= 1e-12, STATUS_UNDEFINED, STATUS_OK).astype(np.int8)
    out = np.where(st[..., None] == STATUS_OK, out, np.nan)
    return out, st


def _pick(V, k):
    return _status_from_points(V[..., k, :])


_RECIPES = {
    "circumcenter": lambda T: _circumcenter_of(T),
    "orthocenter": lambda T: _status_from_points(tri.orthocenter(T)),
    "tangential-circumcenter": lambda T: _circumcenter_of(derived_vertices(T, "tangential")),
    "excentral-circumcenter": lambda T: _circumcenter_of(tri.excenters(T)),
    "orthic-incenter": _orthic_incenter_batch,
    "act-intouch": lambda T, k: _pick(derived_vertices(derived_vertices(T, "anticomplementary"), "intouch"), k),
    "extouch": lambda T, k: _pick(derived_vertices(T, "extouch"), k),
}


def center_trilinears(T, cid) -> np.ndarray:
    """Trilinear triple(s) of a formula-defined catalog center."""
    e = entry(cid)
    T = tri.as_triangles(T)
    s = tri.sidelengths(T)
    ang = tri.angles(T)
    if e.kind == "trilinear":
        return _formula(e.definition).trilinears(s, ang)
    if e.kind == "conjugate":
        base = entry(e.definition)
        return _formula(base.definition).trilinears(s, ang, reciprocal=True)
    raise ValueError(f"{e.label} is constructive and has no trilinear function")


def center_batch(T, cid) -> tuple[np.ndarray, np.ndarray]:
    """Centers of many triangles: ``(points, status)``; failed rows are NaN.

    ``status`` uses the kernel codes: 0 ok, 1 point at infinity, 2 undefined.
    """
    e = entry(cid)
    T = tri.as_triangles(T)
    if e.kind == "construct":
        name, _, arg = e.definition.partition(":")
        with np.errstate(invalid="ignore", divide="ignore"):
            return _RECIPES[name](T, int(arg)) if arg else _RECIPES[name](T)
    return kernels.trilinear_to_cartesian(T, tri.sidelengths(T), center_trilinears(T, cid))


def center(T, cid) -> np.ndarray:
    """Cartesian position of catalog center ``cid`` for a single triangle.

    Raises PointAtInfinityError or UndefinedCenterError instead of returning
    a meaningless value.
    """
    T = tri.as_triangles(T)
    pts, st = center_batch(T[None], cid)
    _raise_status(int(st[0]), entry(cid).label)
    return pts[0]


def orthic_incenter(T) -> np.ndarray:
    """Incenter of the orthic triangle by the pinning rule.

    Orthocenter for acute ``T``; the obtuse vertex for obtuse ``T``. A right
    ``T`` collapses the orthic triangle and raises.
    """
    T = tri.as_triangles(T)
    pts, st = _orthic_incenter_batch(T[None])
    if st[0] != STATUS_OK:
        raise DegenerateTriangleError("orthic", "right reference triangle")
    return pts[0]


def act_intouchpoints(T) -> np.ndarray:
    """Incircle contact points of the anticomplementary triangle, shape ``(3, 2)``.

    Point ``k`` lies on the ACT side through ``P_k`` (parallel to the side
    opposite ``P_k``).
    """
    return derived_triangle(derived_triangle(T, "anticomplementary").vertices, "intouch").vertices


def rho(T) -> float:
    """``|X1 - X100| / |X1 - X88|``."""
    x1, x100, x88 = (center(T, i) for i in (1, 100, 88))
    return float(np.hypot(*(x1 - x100)) / np.hypot(*(x1 - x88)))


# --- circumbilliard -----------------------------------------------------


def circumbilliard(T) -> tuple[Conic, float]:
    """The circumellipse centred on the Mittenpunkt, and its aspect ratio.

    Solved as ``(x - c)^T M (x - c) = 1`` through the three vertices with
    ``c = X9``; the aspect is the square root of the eigenvalue ratio of M.
    """
    T = tri.as_triangles(T)
    if abs(tri.signed_area(T)) < 1e-14 * tri.sidelengths(T).max() ** 2:
        raise DegenerateTriangleError("circumbilliard", "collinear vertices")
    c = center(T, 9)
    d = T - c
    A = np.column_stack([d[:, 0] ** 2, 2 * d[:, 0] * d[:, 1], d[:, 1] ** 2])
    p, q, r = np.linalg.solve(A, np.ones(3))
    w = np.linalg.eigvalsh([[p, q], [q, r]])
    if w[0] <= 0:
        raise DegenerateTriangleError("circumbilliard", "X9-centred circumconic is not an ellipse")
    cx, cy = c
    conic = Conic.from_coefficients(
        p,
        2 * q,
        r,
        -2 * p * cx - 2 * q * cy,
        -2 * r * cy - 2 * q * cx,
        p * cx * cx + 2 * q * cx * cy + r * cy * cy - 1,
    )
    return conic, math.sqrt(w[1] / w[0])


def pythagorean_aspect(s1: float, s2: float, s3: float, rtol: float = 1e-9) -> float:
    """Billiard aspect ratio admitting a right 3-periodic with legs s1, s2 and hypotenuse s3."""
    if not (s1 > 0 and s2 > 0 and s3 > 0) or abs(s1 * s1 + s2 * s2 - s3 * s3) > rtol * s3 * s3:
        raise DomainError(f"({s1}, {s2}, {s3}) is not a right triangle with hypotenuse s3")
    return (s1 + s2 + math.sqrt(s3 * (3 * s3 - 2 * s1 - 2 * s2))) / math.sqrt(
        (s1 + s2 + 3 * s3) * (s1 + s2 - s3)
    )
