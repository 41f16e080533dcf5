import json

import numpy as np
import pytest

from kleekit.cli import main, parse_planes, parse_tolerance
from kleekit.config import ToleranceCfg
from kleekit.errors import InvalidTolerance, ParseError
from kleekit.io import read_off


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr().out
    return rc, out


def test_verify_prop1_cube_report(capsys, tmp_path):
    rc, out = run(capsys, "verify-prop1", "cube", "--planes", "0,0,1", "--svg-dir", str(tmp_path))
    rep = json.loads(out)
    assert rc == 0 and rep["pass"]
    row = rep["results"][0]
    assert row["status"] == "PASS" and row["hausdorff"] <= 1e-12
    svgs = list(tmp_path.glob("*.svg"))
    assert len(svgs) == 1 and svgs[0].read_text().startswith("<svg")


def test_verify_prop1_smooth_uses_oracle_route(capsys):
    rc, out = run(capsys, "verify-prop1", "ellipsoid:2:1:1", "--planes", "3")
    rep = json.loads(out)
    assert rc == 0 and all(r["status"] == "PASS" for r in rep["results"])


def test_gen_then_dual_round_trip(capsys, tmp_path):
    off = tmp_path / "b.off"
    assert main(["gen", "20", "--seed", "4", "--out", str(off)]) == 0
    dual = tmp_path / "d.off"
    assert main(["dual", str(off), "--out", str(dual)]) == 0
    assert main(["dual", str(dual), "--out", str(tmp_path / "dd.off")]) == 0
    a, b = read_off(off), read_off(tmp_path / "dd.off")
    assert np.allclose(np.sort(a.vertices, axis=0), np.sort(b.vertices, axis=0), atol=1e-9)


def test_dual_of_cube_is_octahedron(capsys):
    rc, out = run(capsys, "dual", "cube")
    assert rc == 0 and out.splitlines()[1] == "6 8 0"


def test_section_and_project(capsys):
    rc, out = run(capsys, "section", "octahedron", "--planes", "0,0,1")
    assert rc == 0
    assert np.allclose(json.loads(out)["results"][0]["polygon"],
                       [[-1, 0], [0, -1], [1, 0], [0, 1]], atol=1e-15)
    rc, out = run(capsys, "project", "cube", "--planes", "0,0,1")
    assert json.loads(out)["results"][0]["polygon"] == [[-1, -1], [1, -1], [1, 1], [-1, 1]]


def test_detect_polygon_targets(capsys):
    rc, out = run(capsys, "detect-polygon", "cube", "--planes", "1,1,1", "--target", "projection")
    assert rc == 0 and json.loads(out)["results"][0]["vertex_estimate"] == 6
    rc, out = run(capsys, "detect-polygon", "cube", "--planes", "1,1,1", "--target", "dual-section")
    assert json.loads(out)["results"][0]["vertex_estimate"] == 6


def test_mirkil_command(capsys, tmp_path):
    rc, out = run(capsys, "mirkil", "--n-rays", "2000", "--svg-dir", str(tmp_path))
    rep = json.loads(out)
    assert rc == 0 and rep["verdict"] == "NOT_CLOSED"
    assert (tmp_path / "mirkil.svg").exists()


def test_render_reproduces_svgs(capsys, tmp_path):
    report = tmp_path / "r.json"
    first, second = tmp_path / "a", tmp_path / "b"
    main(["verify-prop1", "cube", "--planes", "2", "--out", str(report), "--svg-dir", str(first)])
    assert main(["render", str(report), "--svg-dir", str(second)]) == 0
    names = sorted(p.name for p in first.iterdir())
    assert names and names == sorted(p.name for p in second.iterdir())
    assert all((first / n).read_bytes() == (second / n).read_bytes() for n in names)


def test_bad_tolerance_gives_error_report(capsys):
    rc, out = run(capsys, "proof-suite", "--quick", "--tol", "cluster_radius=1e-12")
    rep = json.loads(out)
    assert rc == 2 and rep["pass"] is False and "InvalidTolerance" in rep["error"]


def test_bad_body_exit_code(capsys):
    assert main(["project", "sphere"]) == 2
    assert main(["project", "cube", "--planes", "1,2"]) == 2


def test_seed_precedence(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "k.cfg"
    cfg.write_text("seed = 7\nplanes = 1\n")
    monkeypatch.setenv("KLEEKIT_SEED", "3")
    _, out = run(capsys, "project", "cube")
    assert json.loads(out)["seed"] == 3
    _, out = run(capsys, "project", "cube", "--config", str(cfg))
    rep = json.loads(out)
    assert rep["seed"] == 7 and len(rep["results"]) == 1
    _, out = run(capsys, "project", "cube", "--config", str(cfg), "--seed", "11")
    assert json.loads(out)["seed"] == 11


def test_parse_tolerance():
    t = parse_tolerance("eps_geom=1e-10, cluster_radius=1e-5", ToleranceCfg())
    assert (t.eps_geom, t.cluster_radius) == (1e-10, 1e-5)
    for bad in ["eps_geom=0", "eps_geom=0.5", "nope=1", "eps_geom=x", "threshold_fraction=2"]:
        with pytest.raises(InvalidTolerance):
            parse_tolerance(bad, ToleranceCfg())


def test_parse_planes():
    ps = parse_planes("0,0,1;1,0,0", 0, 0)
    assert [p.normal.tolist() for p in ps] == [[0, 0, 1], [1, 0, 0]]
    assert len(parse_planes("5", 0, 0)) == 5
    a, b = parse_planes("3", 1, 0), parse_planes("3", 1, 0)
    assert all(np.array_equal(x.normal, y.normal) for x, y in zip(a, b))
    with pytest.raises(ParseError):
        parse_planes("", 0, 0)
