import numpy as np
import pytest
from hypothesis import settings

from p3p.scenegen import observe

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

CANONICAL_POINTS = np.array([[0.1, 0.1, 0.0], [-0.1, 0.05, 0.1], [0.0, -0.1, -0.05]])


@pytest.fixture
def canonical():
    """Canonical triad seen from the truth pose (camera at e3, looking down -z)."""
    return observe(CANONICAL_POINTS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit(rng, n=None):
    v = rng.normal(size=(3,) if n is None else (n, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_line():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
