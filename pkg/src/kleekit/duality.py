"""Polar duals, projections, plane sections, and the two-route check that a
section of the polar dual equals the planar polar of the projection."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from kleekit.bodies import EllipsoidOracle, SupportOracle, VertexOracle, restrict
from kleekit.config import DEFAULT_TOL, ToleranceCfg
from kleekit.errors import NonPositiveSupport, OriginNotInterior
from kleekit.geom import (
    PlaneThroughOrigin,
    Polygon2,
    Polytope3,
    convex_hull_2d,
    halfplane_intersection,
    hausdorff_polygons,
    order_ccw,
)

POLYTOPE_EXACT = "PolytopeExact"
ORACLE_SAMPLED = "OracleSampled"


@dataclass(frozen=True)
class SectionResult:
    polygon: Polygon2
    source: str = POLYTOPE_EXACT
    sample_count: int = 0

    def __post_init__(self):
        if self.source == ORACLE_SAMPLED and self.sample_count < 3:
            raise ValueError("sampled sections need at least 3 samples")


def _require_interior_origin(body: Polytope3, tol: ToleranceCfg) -> None:
    margin = body.interior_margin()
    if margin < tol.eps_geom:
        raise OriginNotInterior(f"origin margin {margin:.3g} is below eps_geom={tol.eps_geom}")


def polar_dual(body: Polytope3, tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    """``{y : x . y <= 1 for all x in body}``.

    Facet ``n . x <= c`` becomes the vertex ``n / c``; vertex ``v`` becomes
    the facet ``(v / |v|) . y <= 1 / |v|``. The dual facet of ``v`` is made of
    the dual vertices of the facets through ``v``.
    """
    _require_interior_origin(body, tol)
    verts = body.normals / body.offsets[:, None]
    lengths = np.linalg.norm(body.vertices, axis=1)
    normals = body.vertices / lengths[:, None]
    offsets = 1.0 / lengths
    incidence = []
    for j, fs in enumerate(body.vertex_facets()):
        fs = np.array(fs)
        incidence.append(tuple(fs[order_ccw(verts[fs], normals[j])]))
    return Polytope3(verts, normals, offsets, tuple(incidence))


def project_polytope(body: Polytope3, plane: PlaneThroughOrigin,
                     tol: ToleranceCfg = DEFAULT_TOL) -> Polygon2:
    """Orthogonal shadow of ``body`` on ``plane``, in plane coordinates."""
    return convex_hull_2d(plane.coords(body.vertices), tol)


def plane_section(body: Polytope3, plane: PlaneThroughOrigin,
                  tol: ToleranceCfg = DEFAULT_TOL) -> SectionResult:
    """Exact section by intersecting the facet halfspaces restricted to the
    plane."""
    _require_interior_origin(body, tol)
    m = body.normals @ plane.frame.T
    bound = 2.0 * body.radius() + 1.0
    poly = halfplane_intersection(m, body.offsets, bound, tol)
    return SectionResult(poly, POLYTOPE_EXACT, 0)


def polar_dual_2d(poly: Polygon2, tol: ToleranceCfg = DEFAULT_TOL) -> Polygon2:
    """Planar polar: edge ``m . x <= c`` becomes the vertex ``m / c``."""
    if poly.degenerate:
        raise OriginNotInterior("a point or segment has no interior")
    m, c = poly.edges()
    if c.min() < tol.eps_geom:
        raise OriginNotInterior(f"origin margin {c.min():.3g} is below eps_geom={tol.eps_geom}")
    return Polygon2.from_ccw_loop(m / c[:, None], tol)


# --------------------------------------------------------------------------
# verification


def prop1_tolerance(lhs: Polygon2) -> float:
    return max(1e-9, 1e-7 * lhs.diameter())


@dataclass
class Prop1Report:
    lhs: Polygon2
    rhs: Polygon2
    hausdorff: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "lhs_vertices": self.lhs.to_list(),
            "rhs_vertices": self.rhs.to_list(),
            "vertex_counts": [len(self.lhs), len(self.rhs)],
            "hausdorff": self.hausdorff,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def verify_prop1(body: Polytope3, plane: PlaneThroughOrigin, tol: ToleranceCfg = DEFAULT_TOL,
                 dual: Polytope3 | None = None) -> Prop1Report:
    """Compare the section of the 3D polar dual with the planar polar of the
    projection. The two sides share no code beyond polygon canonicalisation.

    ``dual`` may carry a precomputed ``polar_dual(body)`` for sweeps.
    """
    if dual is None:
        dual = polar_dual(body, tol)
    lhs = plane_section(dual, plane, tol).polygon
    rhs = polar_dual_2d(project_polytope(body, plane, tol), tol)
    d = hausdorff_polygons(lhs, rhs)
    limit = prop1_tolerance(lhs)
    return Prop1Report(lhs, rhs, d, limit, bool(d <= limit))


def dual_radial(oracle: SupportOracle, u) -> np.ndarray:
    """Radial function of the polar dual along unit directions ``u``,
    computed from an explicit description of the dual body.

    Ellipsoid: the dual is the ellipsoid with reciprocal semi-axes.
    Vertex hull: the dual is cut out by ``(v/|v|) . y <= 1/|v|``.
    """
    u = np.atleast_2d(np.asarray(u, dtype=float))
    if isinstance(oracle, EllipsoidOracle):
        inv_axes = 1.0 / oracle.axes
        gauge = np.sqrt(np.sum((u / inv_axes) ** 2, axis=1))
        return 1.0 / gauge
    if isinstance(oracle, VertexOracle):
        v = oracle.vertices
        lengths = np.linalg.norm(v, axis=1)
        normals, offsets = v / lengths[:, None], 1.0 / lengths
        cos = u @ normals.T
        with np.errstate(divide="ignore"):
            t = np.where(cos > 0, offsets / np.where(cos > 0, cos, 1.0), np.inf)
        return t.min(axis=1)
    raise TypeError(f"no explicit polar dual for {type(oracle).__name__}")


@dataclass
class OracleProp1Report:
    n_dirs: int
    max_rel_discrepancy: float
    max_rel_vs_support: float
    tolerance: float
    passed: bool
    radial: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n_dirs": self.n_dirs,
            "max_rel_discrepancy": self.max_rel_discrepancy,
            "max_rel_vs_support": self.max_rel_vs_support,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def verify_prop1_oracle(oracle: SupportOracle, plane: PlaneThroughOrigin, n_dirs: int = 360,
                        tolerance: float = 1e-10) -> OracleProp1Report:
    """Radial form of the section/projection identity for bodies known only
    through support data.

    For ``n_dirs`` unit directions ``u`` in the plane the radial function of
    the dual section is computed (i) from the 3D dual body and (ii) as
    ``1 / h`` of the projected body, with ``h`` evaluated from projected
    support points. Both must equal ``1 / h_B(u)``.
    """
    theta = 2 * math.pi * np.arange(n_dirs) / n_dirs
    w = np.column_stack([np.cos(theta), np.sin(theta)])
    u = plane.lift(w)
    h = oracle.value(u)
    if np.any(h <= 0):
        raise NonPositiveSupport("support function is not positive; origin not interior")
    via_dual = dual_radial(oracle, u)
    shadow = restrict(oracle, plane)
    h_shadow = np.sum(shadow.point(w) * w, axis=1)
    if np.any(h_shadow <= 0):
        raise NonPositiveSupport("projected support function is not positive")
    via_shadow = 1.0 / h_shadow
    rel = np.abs(via_dual - via_shadow) / np.abs(via_shadow)
    ref = 1.0 / h
    rel_ref = np.maximum(np.abs(via_dual - ref), np.abs(via_shadow - ref)) / ref
    worst = float(rel.max())
    return OracleProp1Report(n_dirs, worst, float(rel_ref.max()), tolerance,
                             bool(worst < tolerance and rel_ref.max() < tolerance),
                             radial=via_dual.tolist())


def sampled_dual_section(oracle: SupportOracle, plane: PlaneThroughOrigin,
                         n_samples: int = 360, tol: ToleranceCfg = DEFAULT_TOL) -> SectionResult:
    """Inscribed polygon of the dual section through ``n_samples`` radial
    points; the only section available for smooth bodies."""
    theta = 2 * math.pi * np.arange(n_samples) / n_samples
    w = np.column_stack([np.cos(theta), np.sin(theta)])
    r = 1.0 / oracle.value(plane.lift(w))
    return SectionResult(Polygon2.from_ccw_loop(w * r[:, None], tol), ORACLE_SAMPLED, n_samples)
