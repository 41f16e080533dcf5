import numpy as np
from hypothesis import strategies as st

coords = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
points2 = st.lists(st.tuples(coords, coords), min_size=1, max_size=40)
seeds = st.integers(min_value=0, max_value=2**31 - 1)


@st.composite
def proper_polygons(draw):
    """Random convex polygon: hull of points on a randomly placed circle."""
    seed = draw(seeds)
    rng = np.random.default_rng(seed)
    k = draw(st.integers(min_value=3, max_value=12))
    th = np.sort(rng.uniform(0, 2 * np.pi, k))
    r = rng.uniform(0.5, 3.0)
    c = rng.uniform(-2, 2, 2)
    return np.column_stack([np.cos(th), np.sin(th)]) * r + c


@st.composite
def unit_vectors(draw, dim=3):
    v = np.array(draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=dim, max_size=dim)))
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.eye(dim)[0], 1.0
    return v / n
