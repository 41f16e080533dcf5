"""Command-line entry point: ``kleekit <command> ...``.

Every run prints or writes a schema-versioned JSON report that embeds the
seed, tolerances and body/plane specs needed to reproduce it. Exit status is
0 when no check failed, 1 when some check failed and 2 on bad input.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from kleekit import suites
from kleekit.analysis import detect_polygon
from kleekit.bodies import (
    EllipsoidOracle,
    SupportOracle,
    parse_body_spec,
    polygon_oracle,
    polytope_oracle,
    random_polytope,
    restrict,
)
from kleekit.config import ToleranceCfg
from kleekit.duality import (
    plane_section,
    polar_dual,
    project_polytope,
    sampled_dual_section,
    verify_prop1,
    verify_prop1_oracle,
)
from kleekit.errors import GeometryError, InvalidTolerance, ParseError
from kleekit.geom import PlaneThroughOrigin, Polytope3, convex_hull_2d, plane_from_normal, random_planes
from kleekit.io import SCHEMA_VERSION, dumps_report, off_string, read_off, read_report
from kleekit.svg import render_report_svgs

COMMANDS = ("dual", "project", "section", "verify-prop1", "klee-forward", "detect-polygon",
            "mirkil", "proof-suite", "gen", "render")
SMALL_TOLERANCES = ("eps_geom", "eps_rel", "cluster_radius")


@dataclass
class RunConfig:
    command: str
    body_specs: list[str] = field(default_factory=list)
    planes: str = "20"
    seed: int = 0
    tol: ToleranceCfg = field(default_factory=ToleranceCfg)
    out: str | None = None
    svg_dir: str | None = None

    def to_dict(self) -> dict:
        return {"bodies": self.body_specs, "planes": self.planes, "seed": self.seed,
                "tolerance": self.tol.to_dict()}


# --------------------------------------------------------------------------
# configuration


def parse_tolerance(text: str, base: ToleranceCfg) -> ToleranceCfg:
    overrides = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, _, value = item.partition("=")
        key = key.strip()
        if key not in base.to_dict():
            raise InvalidTolerance(f"unknown tolerance {key!r}")
        try:
            v = float(value)
        except ValueError as exc:
            raise InvalidTolerance(f"{key}: {exc}") from exc
        limit = 1e-2 if key in SMALL_TOLERANCES else 1.0
        if not 0 < v <= limit:
            raise InvalidTolerance(f"{key}={v} outside (0, {limit}]")
        overrides[key] = v
    return base.replace(**overrides)


def read_config_file(path) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{n}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Flags, then the config file, then KLEEKIT_SEED, then defaults."""
    file_cfg = read_config_file(args.config) if args.config else {}
    tol = ToleranceCfg()
    tol_file = ",".join(f"{k}={v}" for k, v in file_cfg.items() if k in tol.to_dict())
    if tol_file:
        tol = parse_tolerance(tol_file, tol)
    if args.tol:
        tol = parse_tolerance(args.tol, tol)
    if args.seed is not None:
        seed = args.seed
    elif "seed" in file_cfg:
        seed = int(file_cfg["seed"])
    elif os.environ.get("KLEEKIT_SEED"):
        seed = int(os.environ["KLEEKIT_SEED"])
    else:
        seed = 0
    return RunConfig(
        command=args.command,
        body_specs=list(getattr(args, "bodies", None) or []),
        planes=args.planes or file_cfg.get("planes", "20"),
        seed=seed,
        tol=tol,
        out=args.out or file_cfg.get("out"),
        svg_dir=args.svg_dir or file_cfg.get("svg_dir"),
    )


def load_body(spec: str, tol: ToleranceCfg):
    if spec.lower().endswith(".off") or Path(spec).is_file():
        return read_off(spec, tol)
    return parse_body_spec(spec, tol)


def parse_planes(spec: str, seed: int, index: int) -> list[PlaneThroughOrigin]:
    """``N`` random planes, or explicit normals ``"a,b,c;d,e,f"``."""
    spec = spec.strip()
    if spec.isdigit():
        return random_planes(suites.plane_rng(seed, index), int(spec))
    planes = []
    for chunk in filter(None, (c.strip() for c in spec.split(";"))):
        try:
            normal = [float(t) for t in chunk.split(",")]
        except ValueError as exc:
            raise ParseError(f"bad plane normal {chunk!r}") from exc
        if len(normal) != 3:
            raise ParseError(f"plane normal {chunk!r} needs 3 components")
        planes.append(plane_from_normal(normal))
    if not planes:
        raise ParseError("no planes given")
    return planes


# --------------------------------------------------------------------------
# commands


def _base_report(cfg: RunConfig) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": cfg.command, **cfg.to_dict()}


def _finish(report: dict, results: list[dict]) -> dict:
    failed = sum(r.get("status") == "FAIL" for r in results)
    skipped = sum(r.get("status") == "SKIPPED" for r in results)
    report["results"] = results
    report["summary"] = {"checked": len(results) - skipped, "failed": failed, "skipped": skipped}
    report["pass"] = failed == 0
    return report


def _bodies(cfg: RunConfig, default=None):
    specs = cfg.body_specs or default or []
    if not specs:
        raise ParseError("no bodies given")
    return [(s, load_body(s, cfg.tol)) for s in specs]


def _sampled_polygon(oracle: SupportOracle, plane: PlaneThroughOrigin, tol, n: int = 360):
    th = 2 * math.pi * np.arange(n) / n
    return convex_hull_2d(restrict(oracle, plane).point(np.column_stack([np.cos(th), np.sin(th)])), tol)


def cmd_project(cfg: RunConfig) -> dict:
    rows = []
    for k, (name, body) in enumerate(_bodies(cfg)):
        for j, plane in enumerate(parse_planes(cfg.planes, cfg.seed, k)):
            if isinstance(body, Polytope3):
                poly, source = project_polytope(body, plane, cfg.tol), "PolytopeExact"
            else:
                poly, source = _sampled_polygon(body, plane, cfg.tol), "OracleSampled"
            rows.append({"body": name, "plane": j, "normal": plane.normal.tolist(),
                         "polygon": poly.to_list(), "degenerate": poly.degenerate,
                         "source": source, "status": "OK"})
    return _finish(_base_report(cfg), rows)


def cmd_section(cfg: RunConfig) -> dict:
    rows = []
    for k, (name, body) in enumerate(_bodies(cfg)):
        for j, plane in enumerate(parse_planes(cfg.planes, cfg.seed, k)):
            row = {"body": name, "plane": j, "normal": plane.normal.tolist()}
            try:
                if isinstance(body, Polytope3):
                    sec = plane_section(body, plane, cfg.tol)
                elif isinstance(body, EllipsoidOracle):
                    # an ellipsoid's section is the dual section of its polar
                    sec = sampled_dual_section(EllipsoidOracle(1.0 / body.axes), plane, 360, cfg.tol)
                else:
                    raise ParseError(f"no section routine for {name}")
            except GeometryError as exc:
                rows.append({**row, "status": "SKIPPED", "reason": str(exc)})
                continue
            rows.append({**row, "polygon": sec.polygon.to_list(), "source": sec.source,
                         "sample_count": sec.sample_count, "status": "OK"})
    return _finish(_base_report(cfg), rows)


def cmd_verify_prop1(cfg: RunConfig) -> dict:
    rows = []
    for k, (name, body) in enumerate(_bodies(cfg, ["cube"])):
        dual = None
        for j, plane in enumerate(parse_planes(cfg.planes, cfg.seed, k)):
            row = {"body": name, "plane": j, "normal": plane.normal.tolist()}
            try:
                if isinstance(body, Polytope3):
                    dual = dual or polar_dual(body, cfg.tol)
                    rep = verify_prop1(body, plane, cfg.tol, dual=dual).to_dict()
                    row["route"] = "exact"
                else:
                    rep = verify_prop1_oracle(body, plane, 360).to_dict()
                    row["route"] = "oracle"
            except GeometryError as exc:
                rows.append({**row, "status": "SKIPPED", "reason": f"{type(exc).__name__}: {exc}"})
                continue
            rows.append({**row, **rep, "status": "PASS" if rep["pass"] else "FAIL"})
    report = _finish(_base_report(cfg), rows)
    hd = [r["hausdorff"] for r in rows if "hausdorff" in r]
    report["summary"]["max_hausdorff"] = max(hd) if hd else None
    return report


def cmd_klee_forward(cfg: RunConfig) -> dict:
    if cfg.body_specs:
        bodies = _bodies(cfg)
    else:
        bodies = suites.zoo_polytopes(cfg.tol) + suites.zoo_smooth()
        cfg.body_specs = [n for n, _ in bodies]
    n = int(cfg.planes) if cfg.planes.isdigit() else 100
    res = suites.klee_forward(bodies, n, cfg.seed, cfg.tol)
    report = _base_report(cfg)
    report["bodies_summary"] = res["bodies"]
    report["summary"] = {k: res[k] for k in ("checked", "failed", "skipped")}
    report["pass"] = res["pass"]
    return report


def cmd_detect_polygon(cfg: RunConfig, target: str) -> dict:
    rows = []
    for k, (name, body) in enumerate(_bodies(cfg)):
        is_poly = isinstance(body, Polytope3)
        for j, plane in enumerate(parse_planes(cfg.planes, cfg.seed, k)):
            row = {"body": name, "plane": j, "normal": plane.normal.tolist(), "target": target}
            try:
                if target == "projection":
                    oracle = restrict(polytope_oracle(body) if is_poly else body, plane)
                elif is_poly:
                    src = polar_dual(body, cfg.tol) if target == "dual-section" else body
                    oracle = polygon_oracle(plane_section(src, plane, cfg.tol).polygon)
                else:
                    raise ParseError("sections are only exact for polytopes")
                v = detect_polygon(oracle, cfg.tol)
            except GeometryError as exc:
                rows.append({**row, "status": "SKIPPED", "reason": str(exc)})
                continue
            expected = is_poly
            rows.append({**row, **v.to_dict(), "expected_polygon": expected,
                         "status": "PASS" if v.is_polygon == expected else "FAIL"})
    return _finish(_base_report(cfg), rows)


def cmd_mirkil(cfg: RunConfig, n_rays: int) -> dict:
    report = _base_report(cfg)
    report["n_rays"] = n_rays
    result = suites.mirkil_run(n_rays, cfg.seed)
    report["result"] = result
    report["verdict"] = result["verdict"]
    report["pass"] = result["pass"]
    return report


def cmd_proof_suite(cfg: RunConfig, quick: bool) -> dict:
    report = _base_report(cfg)
    report["quick"] = quick
    report.update(suites.proof_suite(cfg.seed, cfg.tol, quick))
    return report


# --------------------------------------------------------------------------
# driver


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tol", default=None, help="overrides, e.g. eps_geom=1e-10,cluster_radius=1e-5")
    common.add_argument("--planes", default=None, help="count of random planes or normals 'a,b,c;d,e,f'")
    common.add_argument("--out", default=None)
    common.add_argument("--svg-dir", dest="svg_dir", default=None)
    common.add_argument("--config", default=None, help="key=value file")

    parser = argparse.ArgumentParser(prog="kleekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("dual", parents=[common], help="write the polar dual as OFF")
    p.add_argument("bodies", nargs=1, metavar="BODY")
    for name, helptext in [("project", "orthogonal projections"), ("section", "plane sections"),
                           ("verify-prop1", "section of dual vs dual of projection"),
                           ("klee-forward", "polygon verdicts on projections")]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("bodies", nargs="*" if name in ("klee-forward", "verify-prop1") else "+",
                       metavar="BODY")
    p = sub.add_parser("detect-polygon", parents=[common], help="run the polygon detector")
    p.add_argument("bodies", nargs="+", metavar="BODY")
    p.add_argument("--target", choices=["projection", "section", "dual-section"], default="projection")
    p = sub.add_parser("mirkil", parents=[common], help="Mirkil cone projection is not closed")
    p.add_argument("--n-rays", dest="n_rays", type=int, default=100_000)
    p = sub.add_parser("proof-suite", parents=[common], help="all proof-step suites")
    p.add_argument("--quick", action="store_true", help="small sweeps for smoke runs")
    p = sub.add_parser("gen", parents=[common], help="random polytope to OFF")
    p.add_argument("n_points", type=int)
    p = sub.add_parser("render", parents=[common], help="re-render SVGs from a saved report")
    p.add_argument("report")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_svgs(report: dict, svg_dir: str | None) -> None:
    if not svg_dir:
        return
    d = Path(svg_dir)
    d.mkdir(parents=True, exist_ok=True)
    for name, text in sorted(render_report_svgs(report).items()):
        (d / name).write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (GeometryError, ValueError, OSError) as exc:
        err = {"schema_version": SCHEMA_VERSION, "command": args.command,
               "error": f"{type(exc).__name__}: {exc}", "pass": False}
        _emit(dumps_report(err), args.out)
        print(f"kleekit: {exc}", file=sys.stderr)
        return 2

    try:
        if cfg.command == "gen":
            _emit(off_string(random_polytope(args.n_points, cfg.seed, cfg.tol)), cfg.out)
            return 0
        if cfg.command == "dual":
            body = load_body(cfg.body_specs[0], cfg.tol)
            if not isinstance(body, Polytope3):
                raise ParseError("dual needs a polytope")
            _emit(off_string(polar_dual(body, cfg.tol)), cfg.out)
            return 0
        if cfg.command == "render":
            report = read_report(args.report)
            _write_svgs(report, cfg.svg_dir or ".")
            return 0
        if cfg.command == "project":
            report = cmd_project(cfg)
        elif cfg.command == "section":
            report = cmd_section(cfg)
        elif cfg.command == "verify-prop1":
            report = cmd_verify_prop1(cfg)
        elif cfg.command == "klee-forward":
            report = cmd_klee_forward(cfg)
        elif cfg.command == "detect-polygon":
            report = cmd_detect_polygon(cfg, args.target)
        elif cfg.command == "mirkil":
            report = cmd_mirkil(cfg, args.n_rays)
        else:
            report = cmd_proof_suite(cfg, args.quick)
    except (GeometryError, OSError) as exc:
        print(f"kleekit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    _emit(dumps_report(report), cfg.out)
    _write_svgs(report, cfg.svg_dir)
    return 0 if report["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
