import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from kleekit.bodies import make_cube, make_octahedron, make_simplex

settings.register_profile("kleekit", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("kleekit")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line for the terminal summary and echo it."""

    def record(tag: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {tag}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


@pytest.fixture
def cube():
    return make_cube(1.0)


@pytest.fixture
def octahedron():
    return make_octahedron(1.0)


@pytest.fixture
def simplex():
    return make_simplex()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
