import hypothesis
import numpy as np
import pytest

from msdiv.distance import PointSet, build_distance_matrix

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")

ACCEPTANCE = []


@pytest.fixture
def line():
    """Points 0, 1, 3 on the real line (indices 0, 1, 2)."""
    return build_distance_matrix(PointSet.from_list([[0.0], [1.0], [3.0]]), "euclidean")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
