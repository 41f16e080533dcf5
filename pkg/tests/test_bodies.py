import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kleekit.bodies import (
    MIRKIL_APEX,
    MIRKIL_TANGENT,
    EllipsoidOracle,
    VertexOracle,
    ball_oracle,
    disk_oracle,
    ellipsoid_oracle,
    make_cube,
    make_dodecahedron,
    make_simplex,
    mirkil_cone_contains,
    mirkil_cone_sample,
    mirkil_membership,
    parse_body_spec,
    polytope_oracle,
    random_polytope,
    restrict,
    suite_polytope,
)
from kleekit.errors import NonPositiveAxis, NonPositiveSize, ParseError, ZeroDirection
from kleekit.geom import orthonormal_basis, random_unit_vectors


def test_cube_facets_and_counts(cube):
    assert cube.n_vertices == 8 and cube.n_facets == 6
    assert any(np.allclose(n, [1, 0, 0]) and c == pytest.approx(1.0) for n, c in cube.facets)
    assert cube.interior_margin() == pytest.approx(1.0)


def test_cube_support_brute_force():
    cube2 = make_cube(2.0)
    u = np.ones(3) / math.sqrt(3)
    brute = max(float(v @ u) for v in cube2.vertices)
    assert brute == pytest.approx(2 * math.sqrt(3), rel=1e-15)
    assert polytope_oracle(cube2).value(u) == pytest.approx(brute, rel=1e-15)


@pytest.mark.parametrize("w", [0, -1.0])
def test_cube_rejects_non_positive(w):
    with pytest.raises(NonPositiveSize):
        make_cube(w)


def test_platonic_zoo():
    assert (make_simplex().n_vertices, make_simplex().n_facets) == (4, 4)
    d = make_dodecahedron()
    assert (d.n_vertices, d.n_facets) == (20, 12)
    assert all(len(f) == 5 for f in d.incidence)


# --- random polytopes -----------------------------------------------------


def test_random_polytope_deterministic():
    a, b = random_polytope(8, 42), random_polytope(8, 42)
    assert np.array_equal(a.vertices, b.vertices)
    assert a.interior_margin() > 0


def test_random_polytope_seeds_differ():
    a, b = random_polytope(8, 5), random_polytope(8, 6)
    assert not np.array_equal(a.vertices, b.vertices)


def test_random_polytope_offsets_bounded():
    for seed in range(5):
        body = random_polytope(100, seed)
        assert np.all(body.offsets > 0)
        assert np.all(body.offsets <= 1 + 1e-9)


def test_random_polytope_rejects_small_n():
    with pytest.raises(ValueError):
        random_polytope(7, 0)


@pytest.mark.parametrize("seed", range(0, 100, 7))
def test_vh_consistency(seed):
    body = suite_polytope(seed)
    assert body.violations() == []
    s = body.slack(body.vertices)
    assert np.all(np.abs(s).min(axis=0) <= 1e-9)  # each facet touches a vertex
    assert s.max() <= 1e-9


# --- oracles ----------------------------------------------------------------


def test_unit_ball_support():
    h, s = ball_oracle().support(np.array([0, 0, 1.0]))
    assert h == 1.0 and s.tolist() == [0, 0, 1]


def test_ellipsoid_axis_support():
    h, s = ellipsoid_oracle(2, 1, 1).support(np.array([1.0, 0, 0]))
    assert h == 2.0 and s.tolist() == [2, 0, 0]


def test_ellipsoid_diagonal_support():
    e = ellipsoid_oracle(2, 1, 1)
    u = np.array([1, 1, 0]) / math.sqrt(2)
    h, s = e.support(u)
    assert h == pytest.approx(math.sqrt(5 / 2), rel=1e-15)
    assert s @ u == pytest.approx(h, rel=1e-15)
    assert abs(e.surface_residual(s)) < 1e-15


def test_oracle_errors():
    with pytest.raises(NonPositiveAxis):
        ellipsoid_oracle(1, 0, 1)
    with pytest.raises(ZeroDirection):
        ball_oracle().value(np.zeros(3))
    with pytest.raises(ZeroDirection):
        polytope_oracle(make_cube()).point(np.zeros(3))


def test_polytope_oracle_examples(cube):
    o = polytope_oracle(cube)
    h, s = o.support(np.array([0, 0, 1.0]))
    assert h == 1.0 and s[2] == 1.0
    h, s = o.support(np.array([1.0, 1, 1]))
    assert h == 3.0 and s.tolist() == [1, 1, 1]


def test_polytope_oracle_ties_lowest_index(cube):
    s = polytope_oracle(cube).point(np.array([0, 0, 1.0]))
    top = [i for i, v in enumerate(cube.vertices) if v[2] == 1.0]
    assert s.tolist() == cube.vertices[min(top)].tolist()


def test_polytope_oracle_matches_brute_force():
    body = random_polytope(40, 3)
    o = polytope_oracle(body)
    for u in random_unit_vectors(np.random.default_rng(1), 200):
        brute = max(float(np.dot(v, u)) for v in body.vertices.tolist())
        assert o.value(u) == pytest.approx(brute, abs=1e-15)


ORACLES = [ball_oracle(), ellipsoid_oracle(2, 1, 1), ellipsoid_oracle(3, 1, 0.5),
           polytope_oracle(make_cube()), polytope_oracle(random_polytope(30, 7))]


@pytest.mark.parametrize("oracle", ORACLES, ids=repr)
def test_support_homogeneous_and_subadditive(oracle):
    rng = np.random.default_rng(9)
    u = rng.standard_normal((10_000, 3))
    v = rng.standard_normal((10_000, 3))
    lam = rng.uniform(0.01, 100, (10_000, 1))
    hu, hv = oracle.value(u), oracle.value(v)
    assert np.allclose(oracle.value(lam * u), lam[:, 0] * hu, rtol=1e-9, atol=0)
    assert np.all(oracle.value(u + v) <= hu + hv + 1e-9)
    s = oracle.point(u)
    assert np.allclose(np.sum(s * u, axis=1), hu, rtol=1e-9)


def test_polytope_support_points_are_vertices():
    body = random_polytope(25, 4)
    pts = polytope_oracle(body).point(random_unit_vectors(np.random.default_rng(2), 500))
    verts = {tuple(v) for v in body.vertices.tolist()}
    assert all(tuple(p) in verts for p in pts.tolist())


@given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(-np.pi, np.pi))
def test_restricted_oracle_is_planar_support(a, b, th):
    e = EllipsoidOracle((a, b, 1.0))
    plane = orthonormal_basis([0, 0, 1])
    r = restrict(e, plane)
    w = np.array([math.cos(th), math.sin(th)])
    assert r.value(w) == pytest.approx(disk_like(a, b, w), rel=1e-12)


def disk_like(a, b, w):
    return math.sqrt((a * w[0]) ** 2 + (b * w[1]) ** 2)


def test_vertex_oracle_in_the_plane():
    o = VertexOracle([[0, 0], [1, 0], [0, 1]])
    assert o.dim == 2 and o.value(np.array([1.0, 1.0])) == 1.0
    assert disk_oracle(2.0).value(np.array([0.0, 1.0])) == 2.0


# --- Mirkil -----------------------------------------------------------------


def test_mirkil_membership_examples():
    assert mirkil_membership(5, 0.1)
    assert mirkil_membership(0, 0)
    assert not mirkil_membership(5, 0)
    assert not mirkil_membership(0, -1e-300)


def test_mirkil_special_points():
    assert mirkil_cone_contains(MIRKIL_APEX)
    assert mirkil_cone_contains(MIRKIL_TANGENT)
    assert MIRKIL_TANGENT[1:].tolist() == [0, 0]
    assert not mirkil_cone_contains([1, 0.1, 0])
    pts = mirkil_cone_sample(2, 0)
    assert pts[0].tolist() == [0, 0, 0] and pts[1].tolist() == [1, 0, 0]


def test_mirkil_sample_cross_check():
    pts = mirkil_cone_sample(100_000, 3)
    assert len(pts) == 100_000
    assert all(mirkil_cone_contains(p) for p in pts)
    assert all(mirkil_membership(float(y), float(z)) for _, y, z in pts)
    # nothing projects below the y axis
    assert np.all(pts[:, 2] >= 0)


def test_mirkil_sample_deterministic():
    assert np.array_equal(mirkil_cone_sample(50, 1), mirkil_cone_sample(50, 1))


# --- names ------------------------------------------------------------------


def test_parse_body_spec():
    assert parse_body_spec("cube").n_vertices == 8
    assert parse_body_spec("cube:2").radius() == pytest.approx(2 * math.sqrt(3))
    assert parse_body_spec("random:30:7").n_vertices == 30
    assert isinstance(parse_body_spec("ellipsoid:2:1:1"), EllipsoidOracle)
    assert parse_body_spec("ball:2").axes.tolist() == [2, 2, 2]
    for bad in ["sphere", "random:3", "ellipsoid:1:2", "ball:x"]:
        with pytest.raises(ParseError):
            parse_body_spec(bad)
