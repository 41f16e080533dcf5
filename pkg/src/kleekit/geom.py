"""Core primitives: points in R^3, planes through the origin, planar convex
polygons, 2D/3D convex hulls, halfplane intersection and polygon distances.

Points are plain numpy arrays: a ``Vec3`` is a float array of shape ``(3,)``
and a batch of them is ``(n, 3)``. Everything here is a pure function of its
inputs; the container classes are frozen and their arrays read-only.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from kleekit.config import DEFAULT_TOL, ToleranceCfg
from kleekit.errors import (
    DegenerateInput,
    DegeneratePolygon,
    EmptyInput,
    NonUnitNormal,
)


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def as_vec3(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.shape != (3,):
        raise ValueError(f"expected 3 coordinates, got shape {np.shape(v)}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite coordinates: {arr}")
    return arr


def as_points(pts, dim: int) -> np.ndarray:
    arr = np.asarray(pts, dtype=float)
    if arr.size == 0:
        raise EmptyInput("no points given")
    arr = arr.reshape(-1, dim)
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coordinates in input")
    return arr


def cross2(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


# --------------------------------------------------------------------------
# planes through the origin


@dataclass(frozen=True, eq=False)
class PlaneThroughOrigin:
    """A plane through the origin with unit normal and an orthonormal
    in-plane frame satisfying ``u1 x u2 = normal``."""

    normal: np.ndarray
    u1: np.ndarray
    u2: np.ndarray

    @property
    def frame(self) -> np.ndarray:
        return np.stack([self.u1, self.u2])

    def coords(self, points) -> np.ndarray:
        """In-plane coordinates of the orthogonal projection of ``points``."""
        return np.asarray(points, dtype=float) @ self.frame.T

    def lift(self, w) -> np.ndarray:
        return np.asarray(w, dtype=float) @ self.frame

    def to_dict(self) -> dict:
        return {
            "normal": self.normal.tolist(),
            "u1": self.u1.tolist(),
            "u2": self.u2.tolist(),
        }


def orthonormal_bases(normals, tol: ToleranceCfg = DEFAULT_TOL):
    """Vectorised frame construction for an ``(m, 3)`` array of unit normals.

    Returns ``(n, u1, u2)`` arrays. ``u1`` is the normalised projection of
    ``e1`` (or ``e2`` when the normal is close to ``e1``) onto the plane.
    """
    n = np.atleast_2d(np.asarray(normals, dtype=float))
    norms = np.linalg.norm(n, axis=1)
    bad = np.abs(norms - 1.0) > tol.eps_rel
    if np.any(bad):
        raise NonUnitNormal(f"normal length {norms[bad][0]!r} is not 1 within {tol.eps_rel}")
    n = n / norms[:, None]
    helper = np.zeros_like(n)
    use_e2 = np.abs(n[:, 0]) >= 0.9
    helper[~use_e2, 0] = 1.0
    helper[use_e2, 1] = 1.0
    u1 = helper - np.sum(helper * n, axis=1)[:, None] * n
    u1 /= np.linalg.norm(u1, axis=1)[:, None]
    u2 = np.cross(n, u1)
    return n, u1, u2


def orthonormal_basis(n, tol: ToleranceCfg = DEFAULT_TOL) -> PlaneThroughOrigin:
    nn, u1, u2 = orthonormal_bases(as_vec3(n)[None, :], tol)
    return PlaneThroughOrigin(_frozen(nn[0]), _frozen(u1[0]), _frozen(u2[0]))


def plane_from_normal(n, tol: ToleranceCfg = DEFAULT_TOL) -> PlaneThroughOrigin:
    """Like :func:`orthonormal_basis` but normalises ``n`` first."""
    v = as_vec3(n)
    length = np.linalg.norm(v)
    if length == 0:
        raise NonUnitNormal("zero normal")
    return orthonormal_basis(v / length, tol)


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int = 3) -> np.ndarray:
    v = rng.standard_normal((count, dim))
    return v / np.linalg.norm(v, axis=1)[:, None]


def random_planes(rng: np.random.Generator, count: int) -> list[PlaneThroughOrigin]:
    return [orthonormal_basis(n) for n in random_unit_vectors(rng, count)]


def order_ccw(points, normal) -> np.ndarray:
    """Indices that sort coplanar 3D ``points`` counter-clockwise as seen
    from the side ``normal`` points to."""
    pts = np.asarray(points, dtype=float)
    plane = plane_from_normal(normal)
    w = plane.coords(pts - pts.mean(axis=0))
    return np.argsort(np.arctan2(w[:, 1], w[:, 0]), kind="stable")


# --------------------------------------------------------------------------
# planar polygons


def _canonical_start(vertices: np.ndarray) -> np.ndarray:
    if len(vertices) <= 1:
        return vertices
    start = int(np.lexsort((vertices[:, 1], vertices[:, 0]))[0])
    return np.roll(vertices, -start, axis=0)


@dataclass(frozen=True, eq=False)
class Polygon2:
    """Convex polygon in plane coordinates, counter-clockwise, starting at the
    lexicographically smallest vertex. One or two vertices encode a
    degenerate point or segment."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if len(v) == 0:
            raise EmptyInput("polygon without vertices")
        object.__setattr__(self, "vertices", _frozen(v + 0.0))  # no negative zeros

    def __len__(self):
        return len(self.vertices)

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    @classmethod
    def from_ccw_loop(cls, points, tol: ToleranceCfg = DEFAULT_TOL) -> "Polygon2":
        """Canonicalise a counter-clockwise vertex loop: drop repeated and
        collinear vertices, then rotate to the canonical start."""
        pts = [np.asarray(p, dtype=float) for p in np.asarray(points, dtype=float).reshape(-1, 2)]
        if not pts:
            raise EmptyInput("empty vertex loop")
        eps = tol.eps_geom
        changed = True
        while changed and len(pts) > 2:
            changed = False
            k = len(pts)
            for i in range(k):
                prev, cur, nxt = pts[i - 1], pts[i], pts[(i + 1) % k]
                base = float(np.hypot(*(nxt - prev)))
                if np.hypot(*(cur - prev)) <= eps or cross2(prev, cur, nxt) <= eps * base:
                    del pts[i]
                    changed = True
                    break
        if len(pts) == 2 and np.hypot(*(pts[1] - pts[0])) <= eps:
            pts = pts[:1]
        return cls(_canonical_start(np.array(pts)))

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Outward unit normals and offsets ``(m, c)`` with ``m . x <= c``."""
        if self.degenerate:
            raise DegeneratePolygon("degenerate polygon has no edges")
        v = self.vertices
        d = np.roll(v, -1, axis=0) - v
        m = np.stack([d[:, 1], -d[:, 0]], axis=1)
        m /= np.linalg.norm(m, axis=1)[:, None]
        return m, np.sum(m * v, axis=1)

    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def diameter(self) -> float:
        v = self.vertices
        return float(np.max(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=2)))

    def contains(self, points, eps: float) -> np.ndarray:
        m, c = self.edges()
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all(pts @ m.T - c <= eps, axis=1)

    def to_list(self) -> list[list[float]]:
        return self.vertices.tolist()

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, text: str) -> "Polygon2":
        return cls(np.array(json.loads(text), dtype=float))


def convex_hull_2d(points, tol: ToleranceCfg = DEFAULT_TOL) -> Polygon2:
    """Monotone-chain hull; points within ``eps_geom`` of a hull edge's line
    are not kept as vertices."""
    pts = np.unique(as_points(points, 2), axis=0)
    if len(pts) == 1:
        return Polygon2(pts)
    eps = tol.eps_geom

    def chain(seq):
        out: list[np.ndarray] = []
        for p in seq:
            while len(out) >= 2 and cross2(out[-2], out[-1], p) <= eps * math.hypot(*(p - out[-2])):
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and math.hypot(*(hull[1] - hull[0])) <= eps:
        hull = hull[:1]
    return Polygon2(_canonical_start(np.array(hull)))


def halfplane_intersection(normals, offsets, bound: float,
                           tol: ToleranceCfg = DEFAULT_TOL) -> Polygon2:
    """Intersection of ``normals[i] . x <= offsets[i]``.

    Halfplanes are sorted by angle and swept with a deque. A square of
    half-width ``bound`` is added so that the sweep always sees a bounded
    problem; touching it means the input was unbounded, which is an error,
    as is an empty or lower-dimensional result.
    """
    m = np.asarray(normals, dtype=float).reshape(-1, 2)
    c = np.asarray(offsets, dtype=float).reshape(-1)
    lengths = np.linalg.norm(m, axis=1)
    keep = lengths > 1e-14
    if np.any(c[~keep] < -tol.eps_geom):
        raise DegenerateInput("infeasible halfplane with zero normal")
    m = m[keep] / lengths[keep, None]
    c = c[keep] / lengths[keep]
    box = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
    m = np.vstack([m, box])
    c = np.concatenate([c, np.full(4, bound)])

    ang = np.arctan2(m[:, 1], m[:, 0])
    order = np.lexsort((c, ang))
    lines: list[tuple[np.ndarray, float]] = []
    last = None
    for i in order:
        if last is not None and ang[i] - last < 1e-13:
            # same direction up to rounding: keep the tighter offset
            if c[i] < lines[-1][1]:
                lines[-1] = (m[i], float(c[i]))
            continue
        lines.append((m[i], float(c[i])))
        last = ang[i]
    if len(lines) > 1 and ang[order[0]] + 2 * math.pi - last < 1e-13:
        # wrap-around duplicate direction near +-pi
        if lines[0][1] <= lines[-1][1]:
            lines.pop()
        else:
            lines.pop(0)

    def meet(a, b):
        (m1, c1), (m2, c2) = a, b
        det = m1[0] * m2[1] - m1[1] * m2[0]
        if abs(det) < 1e-300:
            raise DegenerateInput("parallel boundary lines in halfplane sweep")
        return np.array([(c1 * m2[1] - c2 * m1[1]) / det, (m1[0] * c2 - m2[0] * c1) / det])

    def outside(p, line):
        return float(line[0] @ p) > line[1]

    dq: list = []
    for ln in lines:
        while len(dq) >= 2 and outside(meet(dq[-1], dq[-2]), ln):
            dq.pop()
        while len(dq) >= 2 and outside(meet(dq[0], dq[1]), ln):
            dq.pop(0)
        dq.append(ln)
    while len(dq) >= 3 and outside(meet(dq[-1], dq[-2]), dq[0]):
        dq.pop()
    while len(dq) >= 3 and outside(meet(dq[0], dq[1]), dq[-1]):
        dq.pop(0)
    if len(dq) < 3:
        raise DegenerateInput("halfplane intersection is empty or degenerate")

    verts = np.array([meet(dq[i], dq[(i + 1) % len(dq)]) for i in range(len(dq))])
    if np.any(np.abs(verts) >= bound * (1 - 1e-12)):
        raise DegenerateInput("halfplane intersection is unbounded")
    for ln in lines:
        if np.any(verts @ ln[0] - ln[1] > tol.eps_geom * max(1.0, bound)):
            raise DegenerateInput("halfplane intersection is empty")
    poly = Polygon2.from_ccw_loop(verts, tol)
    if poly.degenerate:
        raise DegenerateInput("halfplane intersection is lower-dimensional")
    return poly


def point_polygon_distance(points, poly: Polygon2) -> np.ndarray:
    """Euclidean distance from each point to the filled convex polygon."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    a = poly.vertices
    b = np.roll(a, -1, axis=0)
    d = b - a
    dd = np.sum(d * d, axis=1)
    rel = pts[:, None, :] - a[None, :, :]
    t = np.clip(np.sum(rel * d[None], axis=2) / dd[None], 0.0, 1.0)
    closest = a[None] + t[..., None] * d[None]
    dist = np.min(np.linalg.norm(pts[:, None, :] - closest, axis=2), axis=1)
    inside = poly.contains(pts, 0.0)
    dist[inside] = 0.0
    return dist


def hausdorff_polygons(a: Polygon2, b: Polygon2) -> float:
    """Hausdorff distance between two filled convex polygons.

    Distance to a convex set is a convex function, so each one-sided
    supremum is attained at a vertex.
    """
    if a.degenerate or b.degenerate:
        raise DegeneratePolygon("hausdorff_polygons needs two proper polygons")
    return float(max(point_polygon_distance(a.vertices, b).max(),
                     point_polygon_distance(b.vertices, a).max()))


def point_set_hausdorff(a, b) -> float:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


# --------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True, eq=False)
class Polytope3:
    """Bounded 3D polytope carrying both representations.

    ``vertices`` is ``(V, 3)``; facet ``i`` is ``normals[i] . x <= offsets[i]``
    with a unit outward normal; ``incidence[i]`` lists the facet's vertex
    indices counter-clockwise seen from outside.
    """

    vertices: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    incidence: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen(np.reshape(self.vertices, (-1, 3))))
        object.__setattr__(self, "normals", _frozen(np.reshape(self.normals, (-1, 3))))
        object.__setattr__(self, "offsets", _frozen(np.reshape(self.offsets, (-1,))))
        object.__setattr__(self, "incidence", tuple(tuple(int(i) for i in f) for f in self.incidence))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_facets(self) -> int:
        return len(self.offsets)

    @property
    def facets(self) -> list[tuple[np.ndarray, float]]:
        return [(n, float(c)) for n, c in zip(self.normals, self.offsets)]

    def diameter(self) -> float:
        v = self.vertices
        return float(np.max(np.linalg.norm(v[:, None, :] - v[None, :, :], axis=2)))

    def radius(self) -> float:
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    def slack(self, points) -> np.ndarray:
        """``n . x - c`` for every (point, facet) pair; shape ``(k, F)``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return pts @ self.normals.T - self.offsets

    def contains(self, points, eps: float) -> np.ndarray:
        return np.all(self.slack(points) <= eps, axis=1)

    def on_boundary(self, points, eps: float) -> np.ndarray:
        """Inside every halfspace within ``eps`` and within ``eps`` of some
        facet plane."""
        s = self.slack(points)
        return np.all(s <= eps, axis=1) & np.any(np.abs(s) <= eps, axis=1)

    def interior_margin(self) -> float:
        """Distance from the origin to the nearest facet plane (negative if
        the origin is outside)."""
        return float(np.min(self.offsets))

    def translated(self, t) -> "Polytope3":
        t = as_vec3(t)
        return Polytope3(self.vertices + t, self.normals, self.offsets + self.normals @ t,
                         self.incidence)

    def scaled(self, s: float) -> "Polytope3":
        return Polytope3(self.vertices * s, self.normals, self.offsets * s, self.incidence)

    def facet_points(self, i: int) -> np.ndarray:
        return self.vertices[list(self.incidence[i])]

    def vertex_facets(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for f, idx in enumerate(self.incidence):
            for v in idx:
                out[v].append(f)
        return out

    def violations(self, tol: ToleranceCfg = DEFAULT_TOL) -> list[str]:
        """Invariant violations; an empty list means the V- and
        H-representations agree."""
        eps = tol.eps_geom * max(1.0, self.radius())
        problems = []
        if not np.allclose(np.linalg.norm(self.normals, axis=1), 1.0, atol=tol.eps_rel):
            problems.append("facet normals are not unit")
        s = self.slack(self.vertices)
        if s.max() > eps:
            problems.append(f"vertex outside a facet halfspace by {s.max():.3g}")
        if np.any(np.abs(s).min(axis=0) > eps):
            problems.append("facet plane touches no vertex")
        on = np.abs(s) <= eps
        if np.any(on.sum(axis=1) < 3):
            problems.append("vertex on fewer than 3 facets")
        if np.any(on.sum(axis=0) < 3):
            problems.append("facet with fewer than 3 vertices")
        for f, idx in enumerate(self.incidence):
            if len(idx) < 3 or not np.all(on[list(idx), f]):
                problems.append(f"incidence list of facet {f} inconsistent")
                break
        for v, fs in enumerate(self.vertex_facets()):
            if len(fs) < 3:
                problems.append(f"vertex {v} listed on fewer than 3 facets")
                break
            a = self.normals[fs]
            x, *_ = np.linalg.lstsq(a, self.offsets[fs], rcond=None)
            if np.linalg.norm(x - self.vertices[v]) > 10 * eps:
                problems.append(f"vertex {v} is not the meet of its facet planes")
                break
        return problems


def assemble_polytope(vertices, normals, offsets, tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    """Build a :class:`Polytope3` from matching V- and H-data, deriving the
    incidence lists from plane distances."""
    v = np.asarray(vertices, dtype=float)
    n = np.asarray(normals, dtype=float)
    c = np.asarray(offsets, dtype=float)
    eps = tol.eps_geom * max(1.0, float(np.max(np.linalg.norm(v, axis=1))))
    on = np.abs(v @ n.T - c) <= eps
    incidence = []
    for f in range(len(c)):
        idx = np.flatnonzero(on[:, f])
        incidence.append(tuple(idx[order_ccw(v[idx], n[f])]))
    return Polytope3(v, n, c, tuple(incidence))


def _thickness(pts: np.ndarray) -> float:
    centered = pts - pts.mean(axis=0)
    _, _, vh = np.linalg.svd(centered, full_matrices=False)
    return float(np.ptp(centered @ vh[-1]))


def convex_hull_3d(points, tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    """Convex hull with coplanar triangles merged into polygonal facets.

    Vertices keep the relative order they had in ``points``.
    """
    pts = as_points(points, 3)
    if len(pts) < 4:
        raise DegenerateInput(f"need at least 4 points, got {len(pts)}")
    scale = max(1.0, float(np.max(np.abs(pts))))
    eps = tol.eps_geom * scale
    if _thickness(pts) <= eps:
        raise DegenerateInput("points are coplanar or collinear")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise DegenerateInput(f"qhull failed: {exc}") from exc

    eq = hull.equations
    tri_n, tri_c = eq[:, :3], -eq[:, 3]
    parent = list(range(len(eq)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, nbrs in enumerate(hull.neighbors):
        for j in nbrs:
            if np.linalg.norm(tri_n[i] - tri_n[j]) < tol.eps_geom and abs(tri_c[i] - tri_c[j]) < eps:
                parent[find(i)] = find(j)

    roots = sorted({find(i) for i in range(len(eq))})
    normals = []
    for r in roots:
        members = [i for i in range(len(eq)) if find(i) == r]
        nv = tri_n[members].mean(axis=0)
        normals.append(nv / np.linalg.norm(nv))
    normals = np.array(normals)

    cand = np.sort(hull.vertices)
    dots = pts[cand] @ normals.T
    on = np.abs(dots - dots.max(axis=0)) <= eps
    # points sitting inside a facet or on an edge are not vertices
    cand = cand[on.sum(axis=1) >= 3]
    verts = pts[cand]
    dots = verts @ normals.T
    on = np.abs(dots - dots.max(axis=0)) <= eps
    offsets = np.array([dots[on[:, f], f].mean() for f in range(len(normals))])
    poly = assemble_polytope(verts, normals, offsets, tol)
    if any(len(f) < 3 for f in poly.incidence):
        raise DegenerateInput("facet with fewer than 3 vertices after merging")
    return poly
