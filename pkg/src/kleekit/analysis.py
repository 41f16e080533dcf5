"""Checks for the individual steps of the projection-theorem argument:
polygon detection from support samples, extreme points, boundary triangles,
empty cone neighbourhoods, accumulation of extreme points, and closedness
of a planar set."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from kleekit.bodies import SupportOracle
from kleekit.config import DEFAULT_TOL, ToleranceCfg
from kleekit.errors import (
    DegeneratePair,
    FlatBody,
    NonConvergentSequence,
    PreconditionViolated,
)
from kleekit.geom import Polytope3


# --------------------------------------------------------------------------
# polygon detection


@dataclass
class PolygonVerdict:
    is_polygon: bool
    vertex_estimate: int
    samples_used: int
    cluster_diameters: list[float]
    cluster_centers: list[list[float]] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "is_polygon": self.is_polygon,
            "vertex_estimate": self.vertex_estimate,
            "samples_used": self.samples_used,
            "cluster_counts": self.counts,
            "max_cluster_diameter": max(self.cluster_diameters, default=0.0),
            "cluster_centers": self.cluster_centers,
        }


def _diameter(points: np.ndarray) -> float:
    pts = np.unique(points, axis=0)
    if len(pts) <= 1:
        return 0.0
    if len(pts) <= 64:
        return float(np.max(np.linalg.norm(pts[:, None] - pts[None], axis=2)))
    # max width over 90 directions; within a factor cos(pi/180) of the diameter
    th = np.linspace(0, math.pi, 90, endpoint=False)
    proj = pts @ np.stack([np.cos(th), np.sin(th)])
    return float(np.max(np.ptp(proj, axis=0)))


def _breaks(points: np.ndarray, radius: float) -> np.ndarray:
    gaps = np.linalg.norm(np.roll(points, -1, axis=0) - points, axis=1)
    return np.flatnonzero(gaps > radius)


def cluster_cyclic(points: np.ndarray, radius: float) -> list[np.ndarray]:
    """Split a cyclically ordered boundary sample into runs whose consecutive
    gaps are at most ``radius``."""
    breaks = _breaks(points, radius)
    if len(breaks) == 0:
        return [points]
    start = (breaks[0] + 1) % len(points)
    rolled = np.roll(points, -start, axis=0)
    cuts = (breaks - start) % len(points) + 1
    return [c for c in np.split(rolled, np.sort(cuts)[:-1]) if len(c)]


def detect_polygon(oracle: SupportOracle, tol: ToleranceCfg = DEFAULT_TOL,
                   max_samples: int = 65536, initial_samples: int = 32) -> PolygonVerdict:
    """Decide from support points whether a planar body looks like a polygon.

    Support points are taken at ``M, 2M, 4M, ...`` equally spaced directions
    and grouped into clusters (linkage radius ``cluster_radius``). The body is
    declared a polygon once the cluster count is unchanged over two successive
    doublings and every cluster is tighter than ``cluster_radius``. A smooth
    boundary keeps producing new clusters until ``max_samples`` is exhausted.
    """
    probe = np.stack([np.cos(np.linspace(0, math.pi, 16, endpoint=False)),
                      np.sin(np.linspace(0, math.pi, 16, endpoint=False))], axis=1)
    widths = oracle.value(probe) + oracle.value(-probe)
    if np.min(widths) <= tol.eps_geom:
        raise FlatBody(f"planar body has width {np.min(widths):.3g} in some direction")

    if max_samples < initial_samples:
        raise ValueError("max_samples must be at least initial_samples")
    counts: list[int] = []
    used = 0
    m = initial_samples
    diam: list[float] = []
    while m <= max_samples:
        theta = 2 * math.pi * np.arange(m) / m
        pts = oracle.point(np.column_stack([np.cos(theta), np.sin(theta)]))
        used += m
        counts.append(max(1, len(_breaks(pts, tol.cluster_radius))))
        if len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]:
            clusters = cluster_cyclic(pts, tol.cluster_radius)
            diam = [_diameter(c) for c in clusters]
            if max(diam) < tol.cluster_radius and counts[-1] >= 3:
                centers = [np.unique(c, axis=0).mean(axis=0).tolist() for c in clusters]
                return PolygonVerdict(True, counts[-1], used, diam, centers, counts)
        m *= 2
    if not diam and counts[-1] <= 1024:
        diam = [_diameter(c) for c in cluster_cyclic(pts, tol.cluster_radius)]
    return PolygonVerdict(False, 0, used, diam, [], counts)


# --------------------------------------------------------------------------
# extreme points


def extreme_points(body: Polytope3, tol: ToleranceCfg = DEFAULT_TOL) -> np.ndarray:
    """Vertices of ``body`` that are not the midpoint of two other vertices.

    For a valid polytope this is the whole vertex list; the midpoint scan is
    the check.
    """
    v = body.vertices
    eps = tol.eps_geom * max(1.0, body.radius())
    mids = 0.5 * (v[:, None, :] + v[None, :, :])
    iu = np.triu_indices(len(v), k=1)
    mids = mids[iu]
    keep = []
    for i, x in enumerate(v):
        d = np.linalg.norm(mids - x, axis=1)
        if not np.any(d <= eps):
            keep.append(i)
    return v[keep]


@dataclass
class AccumulationVerdict:
    accumulating: bool
    witness_point: np.ndarray | None
    witness_direction: np.ndarray | None
    densest_count: int = 0
    distinct_points: int = 0

    def __post_init__(self):
        if self.accumulating and (self.witness_point is None or self.witness_direction is None):
            raise ValueError("an accumulation verdict needs both witnesses")

    def to_dict(self) -> dict:
        return {
            "accumulating": self.accumulating,
            "witness_point": None if self.witness_point is None else self.witness_point.tolist(),
            "witness_direction": None if self.witness_direction is None
            else self.witness_direction.tolist(),
            "densest_count": self.densest_count,
            "distinct_points": self.distinct_points,
        }


def distinct_points(points: np.ndarray, eps: float) -> np.ndarray:
    """Greedy thinning: keep points pairwise more than ``eps`` apart."""
    pts = np.unique(points, axis=0)
    if len(pts) <= 1:
        return pts
    tree = cKDTree(pts)
    taken = np.zeros(len(pts), dtype=bool)
    keep = []
    for i in range(len(pts)):
        if taken[i]:
            continue
        keep.append(i)
        taken[tree.query_ball_point(pts[i], eps)] = True
    return pts[keep]


def detect_accumulation(oracle: SupportOracle, n_samples: int, seed: int,
                        tol: ToleranceCfg = DEFAULT_TOL) -> AccumulationVerdict:
    """Look for a point near which many distinct extreme points crowd.

    Support points in ``n_samples`` random directions are thinned to points
    more than ``eps_geom`` apart. If some ball of radius
    ``accumulation_scale * diameter`` holds more than
    ``threshold_fraction * n_samples`` of them, the densest ball's centre is
    the limit witness and the mean unit direction from it to its neighbours
    is the direction witness.
    """
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n_samples, oracle.dim))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    pts = distinct_points(np.asarray(oracle.point(dirs)), tol.eps_geom)
    if len(pts) < 2:
        return AccumulationVerdict(False, None, None, len(pts), len(pts))
    diameter = float(np.linalg.norm(np.ptp(pts, axis=0)))
    radius = tol.accumulation_scale * diameter
    tree = cKDTree(pts)
    counts = np.asarray(tree.query_ball_point(pts, radius, return_length=True))
    best = int(np.argmax(counts))
    densest = int(counts[best])
    if densest <= n_samples * tol.threshold_fraction:
        return AccumulationVerdict(False, None, None, densest, len(pts))
    p = pts[best]
    nbrs = pts[tree.query_ball_point(p, radius)]
    rel = nbrs - p
    d = np.linalg.norm(rel, axis=1)
    rel, d = rel[d > 0], d[d > 0]
    units = rel / d[:, None]
    mean = units.mean(axis=0)
    if np.linalg.norm(mean) < 1e-12:
        mean = units[int(np.argmin(d))]
    return AccumulationVerdict(True, p, mean / np.linalg.norm(mean), densest, len(pts))


# --------------------------------------------------------------------------
# boundary triangles and empty neighbourhoods


def _segment_samples(a, b, n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n)[:, None]
    return (1 - t) * a + t * b


def triangle_grid(p, q, y, subdivisions: int = 20) -> np.ndarray:
    """Barycentric grid on a triangle: ``(s+1)(s+2)/2`` points."""
    s = subdivisions
    ij = np.array([(i, j) for i in range(s + 1) for j in range(s + 1 - i)], dtype=float) / s
    k = 1.0 - ij.sum(axis=1)
    return ij[:, :1] * p + ij[:, 1:] * q + k[:, None] * y


def lemma1_check(body: Polytope3, p, q, x, y, tol: ToleranceCfg = DEFAULT_TOL) -> bool:
    """With ``x`` strictly between ``p`` and ``q`` and ``[x, y]`` on the
    boundary, report whether the triangle ``p q y`` lies on the boundary.

    Raises :class:`PreconditionViolated` naming the failed hypothesis instead
    of returning a vacuous answer.
    """
    p, q, x, y = (np.asarray(a, dtype=float) for a in (p, q, x, y))
    eps = tol.eps_geom * max(1.0, body.radius())
    if not np.all(body.contains(np.stack([p, q, x, y]), eps)):
        raise PreconditionViolated("points_in_body", "p, q, x, y must lie in the body")
    pq = q - p
    length = float(np.linalg.norm(pq))
    if length <= eps:
        raise PreconditionViolated("x_between_p_and_q", "p and q coincide")
    t = float((x - p) @ pq) / length**2
    off_line = float(np.linalg.norm(p + t * pq - x))
    if off_line > eps or t * length <= eps or (1 - t) * length <= eps:
        raise PreconditionViolated("x_between_p_and_q",
                                   f"x is not in the open segment (t={t:.3g}, offset={off_line:.3g})")
    if not np.all(body.on_boundary(_segment_samples(x, y, 64), eps)):
        raise PreconditionViolated("segment_xy_on_boundary", "[x, y] leaves the boundary")
    return bool(np.all(body.on_boundary(triangle_grid(p, q, y, 20), eps)))


def prop2_region_check(body: Polytope3, p, q,
                       tol: ToleranceCfg = DEFAULT_TOL) -> tuple[float, bool]:
    """Witness that no extreme point ``r`` has both ``0 < |p - r| < eps`` and
    angle ``r p q < eps``.

    ``eps`` is the smallest ``max(|p - r|, angle rpq)`` over extreme points
    ``r != p``, capped at pi/4. Returns ``(eps, holds)``.
    """
    p, q = np.asarray(p, dtype=float), np.asarray(q, dtype=float)
    scale = max(1.0, body.radius())
    eps_geom = tol.eps_geom * scale
    if np.linalg.norm(q - p) <= eps_geom:
        raise DegeneratePair("p and q coincide")
    if not np.all(body.contains(np.stack([p, q]), eps_geom)):
        raise PreconditionViolated("points_in_body", "p and q must lie in the body")
    r = extreme_points(body, tol)
    rel = r - p
    dist = np.linalg.norm(rel, axis=1)
    rel, dist = rel[dist > eps_geom], dist[dist > eps_geom]
    if len(dist) == 0:
        return math.pi / 4, True
    qp = (q - p) / np.linalg.norm(q - p)
    angle = np.arccos(np.clip((rel @ qp) / dist, -1.0, 1.0))
    eps = float(min(np.min(np.maximum(dist, angle)), math.pi / 4))
    inside = (dist > 0) & (dist < eps) & (angle < eps)
    return eps, bool(eps > 0 and not np.any(inside))


# --------------------------------------------------------------------------
# closedness


@dataclass
class ConvergentSequence:
    points: np.ndarray
    limit: np.ndarray
    label: str = ""


@dataclass
class ClosednessReport:
    verdict: str
    witnesses: list[dict]
    sequences: list[dict]

    @property
    def closed_consistent(self) -> bool:
        return not self.witnesses

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "witnesses": self.witnesses, "sequences": self.sequences}


NOT_CLOSED = "NOT_CLOSED"
CONSISTENT_WITH_CLOSED = "CONSISTENT_WITH_CLOSED"


def _check_convergence(seq: ConvergentSequence, rel_tol: float = 1e-3) -> None:
    pts, lim = seq.points, seq.limit
    if len(pts) < 3:
        raise NonConvergentSequence(f"sequence {seq.label!r} is too short")
    dist = np.linalg.norm(pts - lim, axis=1)
    steps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    tail = steps[len(steps) - max(1, len(steps) // 10):]
    if dist[-1] > rel_tol * max(1.0, dist[0]) or tail.max() > 0.1 * steps.max():
        raise NonConvergentSequence(
            f"sequence {seq.label!r} does not approach its limit (final gap {dist[-1]:.3g})")


def closedness_check(membership: Callable[[float, float], bool],
                     sequences: Sequence[ConvergentSequence]) -> ClosednessReport:
    """Search for sequences inside a planar set whose limit is outside it."""
    witnesses, summary = [], []
    for seq in sequences:
        seq = ConvergentSequence(np.asarray(seq.points, dtype=float),
                                 np.asarray(seq.limit, dtype=float), seq.label)
        _check_convergence(seq)
        inside = all(membership(float(a), float(b)) for a, b in seq.points)
        limit_in = bool(membership(float(seq.limit[0]), float(seq.limit[1])))
        row = {
            "label": seq.label,
            "length": len(seq.points),
            "all_members": inside,
            "limit": seq.limit.tolist(),
            "limit_member": limit_in,
        }
        summary.append(row)
        if inside and not limit_in:
            witnesses.append(row)
    return ClosednessReport(NOT_CLOSED if witnesses else CONSISTENT_WITH_CLOSED, witnesses, summary)


def reciprocal_sequence(a: float, n: int, label: str = "") -> ConvergentSequence:
    """``(a, 1/k)`` for ``k = 1..n`` with limit ``(a, 0)``."""
    k = np.arange(1, n + 1, dtype=float)
    pts = np.column_stack([np.full(n, float(a)), 1.0 / k])
    return ConvergentSequence(pts, np.array([float(a), 0.0]), label or f"({a}, 1/n)")
