import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kleekit.bodies import make_cube, random_polytope
from kleekit.config import ToleranceCfg
from kleekit.errors import InvalidTolerance, ParseError
from kleekit.geom import point_set_hausdorff
from kleekit.io import dumps_report, jsonable, off_string, parse_off, read_off, write_off


def test_cube_off_text(cube):
    text = off_string(cube)
    lines = text.splitlines()
    assert lines[0] == "OFF" and lines[1] == "8 6 0"
    assert all(line.startswith("4 ") for line in lines[10:])


def test_off_round_trip_is_exact(tmp_path):
    body = random_polytope(30, 3)
    write_off(body, tmp_path / "b.off")
    back = read_off(tmp_path / "b.off")
    assert np.array_equal(back.vertices, body.vertices)
    assert back.incidence == body.incidence


@given(st.integers(0, 500), st.integers(8, 40))
def test_off_round_trip_hypothesis(seed, n):
    body = random_polytope(n, seed)
    back = parse_off(off_string(body))
    assert point_set_hausdorff(body.vertices, back.vertices) == 0.0
    assert (back.n_vertices, back.n_facets) == (body.n_vertices, body.n_facets)


def test_off_comments_and_inline_counts():
    text = "OFF 4 4 0\n# tetrahedron\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n"
    assert parse_off(text).n_vertices == 4


@pytest.mark.parametrize("text", [
    "",
    "COFF\n",
    "OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n",
    "OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 9\n",
    "OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n4 0 1 2\n",
    "OFF\n4 0 0\n0 0 0\n1 0 0\n2 0 0\n3 0 0\n",
    "OFF\n4 0 0\n0 0 0\n1 0 x\n0 1 0\n0 0 1\n",
])
def test_off_malformed(text):
    with pytest.raises(ParseError):
        parse_off(text)


def test_jsonable_converts_numpy():
    out = jsonable({"a": np.float64(1.5), "b": np.arange(3), "c": np.bool_(True), 1: (np.int64(2),)})
    assert out == {"a": 1.5, "b": [0, 1, 2], "c": True, "1": [2]}
    assert type(out["c"]) is bool


def test_report_text_is_canonical():
    a = dumps_report({"z": 1, "a": [np.float64(0.1)]})
    b = dumps_report({"a": [0.1], "z": 1})
    assert a == b and a.endswith("\n")
    assert json.loads(a) == {"a": [0.1], "z": 1}


def test_report_rejects_nan():
    with pytest.raises(ValueError):
        dumps_report({"x": math.nan})


def test_tolerance_validation():
    with pytest.raises(InvalidTolerance):
        ToleranceCfg(eps_geom=0)
    with pytest.raises(InvalidTolerance):
        ToleranceCfg(eps_geom=1e-5, cluster_radius=1e-6)
    with pytest.raises(InvalidTolerance):
        ToleranceCfg(threshold_fraction=1.0)
    t = ToleranceCfg().replace(cluster_radius=1e-5)
    assert t.cluster_radius == 1e-5 and t.to_dict()["eps_geom"] == 1e-9
