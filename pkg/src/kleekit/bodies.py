"""The body zoo: polytopes with both representations, smooth bodies given by
support functions, seeded random polytopes, and the Mirkil cone."""
from __future__ import annotations

import math

import numpy as np

from kleekit.config import DEFAULT_TOL, ToleranceCfg
from kleekit.errors import (
    DegenerateInput,
    GenerationFailed,
    NonPositiveAxis,
    NonPositiveSize,
    ParseError,
    ZeroDirection,
)
from kleekit.geom import (
    PlaneThroughOrigin,
    Polygon2,
    Polytope3,
    convex_hull_3d,
    random_unit_vectors,
)

__all__ = [
    "Polytope3",
    "SupportOracle",
    "VertexOracle",
    "EllipsoidOracle",
    "RestrictedOracle",
    "make_cube",
    "make_octahedron",
    "make_simplex",
    "make_dodecahedron",
    "random_polytope",
    "suite_polytope",
    "ellipsoid_oracle",
    "ball_oracle",
    "disk_oracle",
    "polytope_oracle",
    "polygon_oracle",
    "restrict",
    "mirkil_membership",
    "mirkil_cone_contains",
    "mirkil_cone_sample",
    "parse_body_spec",
]


# --------------------------------------------------------------------------
# polytopes


def make_cube(half_width: float = 1.0, tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    if not half_width > 0:
        raise NonPositiveSize(f"half_width must be positive, got {half_width}")
    w = float(half_width)
    corners = np.array([[sx, sy, sz] for sx in (-w, w) for sy in (-w, w) for sz in (-w, w)])
    return convex_hull_3d(corners, tol)


def make_octahedron(radius: float = 1.0, tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    if not radius > 0:
        raise NonPositiveSize(f"radius must be positive, got {radius}")
    return convex_hull_3d(np.vstack([np.eye(3), -np.eye(3)]) * radius, tol)


def make_simplex(tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    """Regular tetrahedron centred at the origin."""
    return convex_hull_3d([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], tol)


def make_dodecahedron(tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    phi = (1 + math.sqrt(5)) / 2
    pts = [[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
    for a in (-1 / phi, 1 / phi):
        for b in (-phi, phi):
            pts += [[0, a, b], [a, b, 0], [b, 0, a]]
    return convex_hull_3d(pts, tol)


def random_polytope(n_points: int, seed: int, tol: ToleranceCfg = DEFAULT_TOL,
                    max_tries: int = 100) -> Polytope3:
    """Hull of ``n_points`` uniform points on the unit sphere.

    Draws are repeated from the same seeded stream until the origin is
    interior with margin at least ``eps_geom``; vertices are never recentred.
    """
    if n_points < 8:
        raise ValueError(f"n_points must be >= 8, got {n_points}")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        pts = random_unit_vectors(rng, n_points)
        try:
            body = convex_hull_3d(pts, tol)
        except DegenerateInput:
            continue
        if body.interior_margin() >= tol.eps_geom:
            return body
    raise GenerationFailed(f"no hull with interior origin after {max_tries} draws")


def suite_polytope(seed: int, tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    """Member of the standard random suite: 8 to 50 sphere points by seed."""
    return random_polytope(8 + seed % 43, seed, tol)


# --------------------------------------------------------------------------
# support oracles


class SupportOracle:
    """Convex body given by its support function.

    ``value(u)`` is ``max_{x in K} x . u`` and ``point(u)`` one maximiser.
    Both accept a single direction or a stack ``(m, dim)``.
    """

    dim = 3

    def _check(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if u.shape[-1] != self.dim:
            raise ValueError(f"direction must have {self.dim} components")
        if np.any(np.linalg.norm(np.atleast_2d(u), axis=1) == 0):
            raise ZeroDirection("support queried in the zero direction")
        return u

    def value(self, u):
        raise NotImplementedError

    def point(self, u):
        raise NotImplementedError

    def support(self, u):
        return self.value(u), self.point(u)


class VertexOracle(SupportOracle):
    """Support of the hull of finitely many points; ties go to the lowest
    index."""

    def __init__(self, vertices):
        self.vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        self.dim = self.vertices.shape[1]

    def value(self, u):
        u = self._check(u)
        return np.max(u @ self.vertices.T, axis=-1)

    def point(self, u):
        u = self._check(u)
        return self.vertices[np.argmax(u @ self.vertices.T, axis=-1)]

    def __repr__(self):
        return f"VertexOracle({len(self.vertices)} points in R^{self.dim})"


class EllipsoidOracle(SupportOracle):
    """Axis-aligned ellipsoid (or ellipse) centred at the origin."""

    def __init__(self, axes):
        self.axes = np.asarray(axes, dtype=float).reshape(-1)
        if not np.all(self.axes > 0):
            raise NonPositiveAxis(f"semi-axes must be positive, got {self.axes.tolist()}")
        self.dim = len(self.axes)

    def value(self, u):
        u = self._check(u)
        return np.sqrt(np.sum((self.axes * u) ** 2, axis=-1))

    def point(self, u):
        u = self._check(u)
        h = self.value(u)
        return (self.axes**2 * u) / np.expand_dims(h, -1)

    def surface_residual(self, x) -> np.ndarray:
        """``sum (x_i / a_i)^2 - 1``; zero on the boundary."""
        x = np.asarray(x, dtype=float)
        return np.sum((x / self.axes) ** 2, axis=-1) - 1.0

    def __repr__(self):
        return f"EllipsoidOracle({self.axes.tolist()})"


class RestrictedOracle(SupportOracle):
    """Support function of the orthogonal projection of a 3D body onto a
    plane, in the plane's coordinates: the support function restricted to
    directions lying in the plane."""

    dim = 2

    def __init__(self, base: SupportOracle, plane: PlaneThroughOrigin):
        self.base = base
        self.plane = plane

    def value(self, w):
        w = self._check(w)
        return self.base.value(self.plane.lift(w))

    def point(self, w):
        w = self._check(w)
        return self.plane.coords(self.base.point(self.plane.lift(w)))


def ellipsoid_oracle(a: float, b: float, c: float) -> EllipsoidOracle:
    return EllipsoidOracle((a, b, c))


def ball_oracle(r: float = 1.0) -> EllipsoidOracle:
    return EllipsoidOracle((r, r, r))


def disk_oracle(r: float = 1.0) -> EllipsoidOracle:
    return EllipsoidOracle((r, r))


def polytope_oracle(body: Polytope3) -> VertexOracle:
    return VertexOracle(body.vertices)


def polygon_oracle(poly: Polygon2) -> VertexOracle:
    return VertexOracle(poly.vertices)


def restrict(oracle: SupportOracle, plane: PlaneThroughOrigin) -> RestrictedOracle:
    return RestrictedOracle(oracle, plane)


# --------------------------------------------------------------------------
# the Mirkil cone
#
# C = { t (1, y, z) : t >= 0, y^2 + (z - 1/2)^2 <= 1/4 }: rays from the origin
# through a disk tangent to z = 0 at (1, 0, 0). In homogeneous form
# C = { x >= 0, y^2 + z^2 <= x z }. Its projection to the (y, z) plane is the
# open upper halfplane plus the origin.

MIRKIL_APEX = np.zeros(3)
MIRKIL_TANGENT = np.array([1.0, 0.0, 0.0])


def mirkil_membership(a: float, b: float) -> bool:
    """Membership in {(a, b) : b > 0} U {(0, 0)}."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("mirkil_membership needs finite inputs")
    return b > 0 or (a == 0 and b == 0)


def mirkil_cone_contains(p, eps: float = 1e-12) -> bool:
    x, y, z = np.asarray(p, dtype=float)
    scale = max(1.0, x * x)
    return bool(x >= -eps and y * y + z * z - x * z <= eps * scale)


def mirkil_cone_sample(n_rays: int, seed: int, t_max: float = 2.0) -> np.ndarray:
    """``n_rays`` points of the cone, one per ray.

    The first two are the apex and the tangency point ``(1, 0, 0)``; the rest
    take a uniform ``t`` in ``[0, t_max]`` and a disk point, a tenth of them on
    the disk's rim. Disk points are written as ``y = s sqrt(z (1 - z))`` so
    that ``z = 0`` forces ``y = 0`` exactly.
    """
    if n_rays < 1:
        raise ValueError("n_rays must be >= 1")
    rng = np.random.default_rng(seed)
    m = max(n_rays - 2, 0)
    z = rng.uniform(0.0, 1.0, m)
    s = rng.uniform(-1.0, 1.0, m)
    rim = rng.uniform(size=m) < 0.1
    s[rim] = np.sign(s[rim])
    t = rng.uniform(0.0, t_max, m)
    y = s * np.sqrt(z * (1.0 - z))
    rays = np.column_stack([t, t * y, t * z])
    fixed = np.vstack([MIRKIL_APEX, MIRKIL_TANGENT])[: min(n_rays, 2)]
    return np.vstack([fixed, rays])


# --------------------------------------------------------------------------
# names


def _floats(parts, spec, count):
    if len(parts) != count:
        raise ParseError(f"body spec {spec!r} expects {count} numeric fields")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ParseError(f"body spec {spec!r}: {exc}") from exc


def parse_body_spec(spec: str, tol: ToleranceCfg = DEFAULT_TOL):
    """Resolve a zoo name to a :class:`Polytope3` or a :class:`SupportOracle`.

    Names: ``cube[:w]``, ``octahedron``, ``simplex``, ``dodecahedron``,
    ``random:N:SEED``, ``ellipsoid:a:b:c``, ``ball[:r]``.
    """
    name, *rest = spec.strip().split(":")
    name = name.lower()
    if name == "cube":
        (w,) = _floats(rest, spec, 1) if rest else [1.0]
        return make_cube(w, tol)
    if name == "octahedron" and not rest:
        return make_octahedron(1.0, tol)
    if name == "simplex" and not rest:
        return make_simplex(tol)
    if name == "dodecahedron" and not rest:
        return make_dodecahedron(tol)
    if name == "random":
        if len(rest) != 2:
            raise ParseError(f"expected random:N:SEED, got {spec!r}")
        try:
            n, seed = int(rest[0]), int(rest[1])
        except ValueError as exc:
            raise ParseError(f"body spec {spec!r}: {exc}") from exc
        return random_polytope(n, seed, tol)
    if name == "ellipsoid":
        return ellipsoid_oracle(*_floats(rest, spec, 3))
    if name == "ball":
        (r,) = _floats(rest, spec, 1) if rest else [1.0]
        return ball_oracle(r)
    raise ParseError(f"unknown body {spec!r}")
