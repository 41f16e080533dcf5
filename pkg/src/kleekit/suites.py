"""Batch sweeps over bodies and planes. Every function returns a plain,
JSON-ready dict whose contents depend only on its arguments."""
from __future__ import annotations

import math

import numpy as np

from kleekit.analysis import (
    ConvergentSequence,
    closedness_check,
    detect_accumulation,
    detect_polygon,
    lemma1_check,
    prop2_region_check,
    reciprocal_sequence,
)
from kleekit.bodies import (
    EllipsoidOracle,
    SupportOracle,
    ball_oracle,
    ellipsoid_oracle,
    make_cube,
    make_dodecahedron,
    make_octahedron,
    make_simplex,
    mirkil_cone_contains,
    mirkil_cone_sample,
    mirkil_membership,
    polygon_oracle,
    polytope_oracle,
    random_polytope,
    restrict,
    suite_polytope,
)
from kleekit.config import DEFAULT_TOL, ToleranceCfg
from kleekit.duality import (
    plane_section,
    polar_dual,
    polar_dual_2d,
    project_polytope,
    verify_prop1,
    verify_prop1_oracle,
)
from kleekit.errors import GeometryError, PreconditionViolated
from kleekit.geom import PlaneThroughOrigin, Polytope3, point_set_hausdorff, random_planes


def plane_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def zoo_polytopes(tol: ToleranceCfg = DEFAULT_TOL) -> list[tuple[str, Polytope3]]:
    return [
        ("cube", make_cube(1.0, tol)),
        ("simplex", make_simplex(tol)),
        ("octahedron", make_octahedron(1.0, tol)),
        ("dodecahedron", make_dodecahedron(tol)),
        ("random:30:7", random_polytope(30, 7, tol)),
        ("random:50:11", random_polytope(50, 11, tol)),
    ]


def zoo_smooth() -> list[tuple[str, SupportOracle]]:
    return [
        ("ball:1", ball_oracle(1.0)),
        ("ellipsoid:2:1:1", ellipsoid_oracle(2, 1, 1)),
        ("ellipsoid:3:1:0.5", ellipsoid_oracle(3, 1, 0.5)),
    ]


def _summary(checked: int, failed: int, skipped: int = 0, **extra) -> dict:
    return {"checked": checked, "failed": failed, "skipped": skipped,
            "pass": failed == 0 and checked > 0, **extra}


# --------------------------------------------------------------------------
# section / projection duality


def prop1_suite(n_bodies: int = 100, planes_per_body: int = 20, seed: int = 0,
                tol: ToleranceCfg = DEFAULT_TOL) -> dict:
    """Exact two-route check on suite polytopes ``seed .. seed+n_bodies-1``."""
    worst, failures, checked = 0.0, [], 0
    for i in range(n_bodies):
        body_seed = seed + i
        body = suite_polytope(body_seed, tol)
        dual = polar_dual(body, tol)
        for j, plane in enumerate(random_planes(plane_rng(seed, i), planes_per_body)):
            rep = verify_prop1(body, plane, tol, dual=dual)
            checked += 1
            worst = max(worst, rep.hausdorff)
            if not rep.passed:
                failures.append({"body_seed": body_seed, "plane": j, **rep.to_dict()})
    return _summary(checked, len(failures), max_hausdorff=worst, failures=failures)


def oracle_prop1_suite(planes: int = 20, n_dirs: int = 360, seed: int = 0) -> dict:
    rows, failed = [], 0
    for k, (name, oracle) in enumerate(zoo_smooth()):
        worst = 0.0
        for plane in random_planes(plane_rng(seed, k), planes):
            rep = verify_prop1_oracle(oracle, plane, n_dirs)
            worst = max(worst, rep.max_rel_discrepancy, rep.max_rel_vs_support)
            failed += not rep.passed
        rows.append({"body": name, "max_rel_discrepancy": worst})
    return _summary(planes * len(rows), failed, bodies=rows)


def involution_suite(n_bodies: int = 100, seed: int = 0, tol: ToleranceCfg = DEFAULT_TOL) -> dict:
    worst, failures = 0.0, []
    for i in range(n_bodies):
        body = suite_polytope(seed + i, tol)
        back = polar_dual(polar_dual(body, tol), tol)
        d = point_set_hausdorff(body.vertices, back.vertices)
        worst = max(worst, d)
        if d > 1e-9 or (back.n_vertices, back.n_facets) != (body.n_vertices, body.n_facets):
            failures.append({"body_seed": seed + i, "hausdorff": d})
    return _summary(n_bodies, len(failures), max_hausdorff=worst, failures=failures)


# --------------------------------------------------------------------------
# projections are polygons exactly for polytopes


def klee_forward(bodies, n_planes: int, seed: int, tol: ToleranceCfg = DEFAULT_TOL) -> dict:
    """``bodies`` is a list of ``(name, Polytope3 | SupportOracle)``."""
    rows, failed = [], 0
    for k, (name, body) in enumerate(bodies):
        is_poly = isinstance(body, Polytope3)
        oracle = polytope_oracle(body) if is_poly else body
        n_polygon, max_est, bad = 0, 0, []
        for j, plane in enumerate(random_planes(plane_rng(seed, k), n_planes)):
            v = detect_polygon(restrict(oracle, plane), tol)
            n_polygon += v.is_polygon
            max_est = max(max_est, v.vertex_estimate)
            ok = (v.is_polygon and v.vertex_estimate <= body.n_vertices) if is_poly else not v.is_polygon
            if not ok:
                bad.append({"plane": j, "normal": plane.normal.tolist(), **v.to_dict()})
        failed += len(bad)
        rows.append({
            "body": name,
            "kind": "polytope" if is_poly else "smooth",
            "n_vertices": body.n_vertices if is_poly else None,
            "planes": n_planes,
            "polygon_verdicts": n_polygon,
            "max_vertex_estimate": max_est,
            "misclassified": bad,
        })
    return _summary(sum(r["planes"] for r in rows), failed, bodies=rows)


# --------------------------------------------------------------------------
# proof steps


def _facet_point(rng, body: Polytope3, f: int) -> np.ndarray:
    pts = body.facet_points(f)
    return rng.dirichlet(np.ones(len(pts))) @ pts


def lemma1_configuration(rng, body: Polytope3, edge_case: bool):
    """Points ``p, q, x, y`` meeting the hypotheses by construction.

    Face case: ``p, q, y`` are random points of one facet. Edge case: ``p, q``
    lie on an edge and ``y`` in a facet through that edge, so ``[x, y]``
    starts on the edge.
    """
    f = int(rng.integers(body.n_facets))
    t = rng.uniform(0.1, 0.9)
    if edge_case:
        idx = body.incidence[f]
        k = int(rng.integers(len(idx)))
        a, b = body.vertices[idx[k]], body.vertices[idx[(k + 1) % len(idx)]]
        s1, s2 = sorted(rng.uniform(0.0, 1.0, 2))
        p, q = a + s1 * (b - a), a + s2 * (b - a)
        if np.linalg.norm(q - p) < 1e-3:
            p, q = a, b
    else:
        p, q = _facet_point(rng, body, f), _facet_point(rng, body, f)
    x = p + t * (q - p)
    y = _facet_point(rng, body, f)
    return p, q, x, y


def lemma1_suite(n_bodies: int = 500, seed: int = 0, tol: ToleranceCfg = DEFAULT_TOL) -> dict:
    passed = failed = skipped = 0
    failures, skips = [], []
    for i in range(n_bodies):
        body = suite_polytope(seed + i, tol)
        rng = plane_rng(seed, i)
        p, q, x, y = lemma1_configuration(rng, body, edge_case=bool(i % 2))
        try:
            ok = lemma1_check(body, p, q, x, y, tol)
        except PreconditionViolated as exc:
            skipped += 1
            skips.append({"body_seed": seed + i, "precondition": exc.precondition})
            continue
        if ok:
            passed += 1
        else:
            failed += 1
            failures.append({"body_seed": seed + i, "p": p, "q": q, "x": x, "y": y})
    return _summary(passed + failed, failed, skipped, failures=failures, skipped_cases=skips)


def prop2_suite(n_bodies: int = 100, pairs_per_body: int = 10, seed: int = 0,
                tol: ToleranceCfg = DEFAULT_TOL) -> dict:
    """Pairs ``p, q`` on a common facet; every other pair starts at a
    vertex."""
    failures, checked, min_eps = [], 0, math.inf
    for i in range(n_bodies):
        body = suite_polytope(seed + i, tol)
        rng = plane_rng(seed, i)
        for j in range(pairs_per_body):
            f = int(rng.integers(body.n_facets))
            if j % 2:
                p = body.vertices[body.incidence[f][int(rng.integers(len(body.incidence[f])))]]
            else:
                p = _facet_point(rng, body, f)
            q = _facet_point(rng, body, f)
            eps, holds = prop2_region_check(body, p, q, tol)
            checked += 1
            min_eps = min(min_eps, eps)
            if not (holds and eps > 0):
                failures.append({"body_seed": seed + i, "pair": j, "epsilon": eps})
    return _summary(checked, len(failures), min_epsilon=min_eps, failures=failures)


def accumulation_suite(n_samples: int = 10_000, seed: int = 0,
                       tol: ToleranceCfg = DEFAULT_TOL) -> dict:
    rows, failed = [], 0
    for k, (name, body) in enumerate(zoo_polytopes(tol) + zoo_smooth()):
        is_poly = isinstance(body, Polytope3)
        oracle = polytope_oracle(body) if is_poly else body
        v = detect_accumulation(oracle, n_samples, seed + k, tol)
        ok = v.accumulating != is_poly
        row = {"body": name, "expected": not is_poly, **v.to_dict()}
        if v.accumulating and isinstance(oracle, EllipsoidOracle):
            residual = float(abs(oracle.surface_residual(v.witness_point)))
            row["witness_surface_residual"] = residual
            ok = ok and residual <= 1e-9
        row["ok"] = ok
        failed += not ok
        rows.append(row)
    return _summary(len(rows), failed, bodies=rows)


def consistency_suite(n_bodies: int = 100, planes_per_body: int = 20, seed: int = 0,
                      tol: ToleranceCfg = DEFAULT_TOL) -> dict:
    """Polygon verdicts for the dual section and for the planar dual of the
    shadow must agree plane by plane."""
    failures, checked, skipped = [], 0, 0
    for i in range(n_bodies):
        body = suite_polytope(seed + i, tol)
        dual = polar_dual(body, tol)
        for j, plane in enumerate(random_planes(plane_rng(seed, i), planes_per_body)):
            try:
                lhs = plane_section(dual, plane, tol).polygon
                rhs = polar_dual_2d(project_polytope(body, plane, tol), tol)
            except GeometryError as exc:
                skipped += 1
                failures.append({"body_seed": seed + i, "plane": j, "skipped": str(exc)})
                continue
            a = detect_polygon(polygon_oracle(lhs), tol)
            b = detect_polygon(polygon_oracle(rhs), tol)
            checked += 1
            if a.is_polygon != b.is_polygon or not a.is_polygon:
                failures.append({"body_seed": seed + i, "plane": j,
                                 "section_verdict": a.to_dict(), "dual_shadow_verdict": b.to_dict()})
    failed = len(failures) - skipped
    return _summary(checked, failed, skipped, failures=failures)


# --------------------------------------------------------------------------
# the Mirkil example


def mirkil_run(n_rays: int = 100_000, seed: int = 0, sequence_length: int = 1_000_000,
               preview: int = 2000) -> dict:
    pts = mirkil_cone_sample(n_rays, seed)
    in_cone = sum(mirkil_cone_contains(p) for p in pts)
    proj = pts[:, 1:]
    member = sum(mirkil_membership(float(a), float(b)) for a, b in proj)
    below = int(np.sum(proj[:, 1] < 0))
    sequences: list[ConvergentSequence] = [
        reciprocal_sequence(1.0, sequence_length, "(1, 1/n)"),
        reciprocal_sequence(0.0, sequence_length, "(0, 1/n)"),
    ]
    closed = closedness_check(mirkil_membership, sequences)
    origin_member = mirkil_membership(0.0, 0.0)
    ok = (closed.verdict == "NOT_CLOSED" and in_cone == len(pts) and member == len(pts)
          and below == 0 and origin_member and not mirkil_membership(1.0, 0.0))
    return {
        "n_samples": len(pts),
        "samples_in_cone": int(in_cone),
        "projections_in_set": int(member),
        "projections_below_axis": below,
        "origin_member": origin_member,
        "closedness": closed.to_dict(),
        "verdict": closed.verdict,
        "projection_preview": proj[:preview],
        "pass": bool(ok),
    }


def proof_suite(seed: int = 0, tol: ToleranceCfg = DEFAULT_TOL, quick: bool = False) -> dict:
    """Boundary triangles, empty neighbourhoods, the accumulation dichotomy
    and the section/dual-shadow consistency check. ``quick`` shrinks every sweep for smoke runs."""
    n = (20, 10, 10) if quick else (500, 100, 100)
    suites = {}
    runners = {
        "lemma1": lambda: lemma1_suite(n[0], seed, tol),
        "prop2": lambda: prop2_suite(n[1], 10, seed, tol),
        "accumulation": lambda: accumulation_suite(10_000, seed, tol),
        "consistency": lambda: consistency_suite(n[2], 20, seed, tol),
    }
    for name, run in runners.items():
        try:
            suites[name] = run()
        except GeometryError as exc:
            suites[name] = {"pass": False, "error": f"{type(exc).__name__}: {exc}"}
    return {"suites": suites, "pass": all(s["pass"] for s in suites.values())}
