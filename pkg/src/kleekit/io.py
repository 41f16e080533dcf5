"""File formats: OFF for polytopes, JSON for polygons and reports."""
from __future__ import annotations

import io
import json
import os
from pathlib import Path

import numpy as np

from kleekit.config import DEFAULT_TOL, ToleranceCfg
from kleekit.errors import GeometryError, ParseError
from kleekit.geom import Polygon2, Polytope3, convex_hull_3d

SCHEMA_VERSION = 1


def off_string(body: Polytope3) -> str:
    out = io.StringIO()
    out.write("OFF\n")
    out.write(f"{body.n_vertices} {body.n_facets} 0\n")
    for v in body.vertices:
        out.write(" ".join(repr(float(c)) for c in v) + "\n")
    for f in body.incidence:
        out.write(" ".join(str(i) for i in (len(f), *f)) + "\n")
    return out.getvalue()


def write_off(body: Polytope3, path) -> None:
    Path(path).write_text(off_string(body))


def parse_off(text: str, tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    """Parse OFF text. The polytope is rebuilt as the hull of the listed
    vertices (in file order); face lines are validated but not trusted."""
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ParseError("empty OFF input")
    head = lines[0]
    if head.startswith("OFF"):
        rest = head[3:].split()
        lines = lines[1:] if not rest else [" ".join(rest)] + lines[1:]
    else:
        raise ParseError("missing OFF header")
    try:
        nv, nf = (int(t) for t in lines[0].split()[:2])
        verts = np.array([[float(t) for t in lines[1 + i].split()[:3]] for i in range(nv)])
        for j in range(nf):
            toks = [int(t) for t in lines[1 + nv + j].split()]
            if toks[0] != len(toks) - 1 or toks[0] < 3:
                raise ParseError(f"bad face line {j}")
            if min(toks[1:]) < 0 or max(toks[1:]) >= nv:
                raise ParseError(f"face {j} references a missing vertex")
    except (ValueError, IndexError) as exc:
        raise ParseError(f"malformed OFF: {exc}") from exc
    if verts.shape != (nv, 3):
        raise ParseError("vertex lines need three coordinates")
    try:
        return convex_hull_3d(verts, tol)
    except GeometryError as exc:
        raise ParseError(f"OFF vertices do not span a polytope: {exc}") from exc


def read_off(path, tol: ToleranceCfg = DEFAULT_TOL) -> Polytope3:
    return parse_off(Path(path).read_text(), tol)


def jsonable(obj):
    """Recursively convert numpy scalars and arrays to plain Python."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Polygon2):
        return obj.to_list()
    return obj


def dumps_report(report: dict) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(jsonable(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_report(report: dict, path) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        os.makedirs(path.parent, exist_ok=True)
    path.write_text(dumps_report(report))


def read_report(path) -> dict:
    return json.loads(Path(path).read_text())
