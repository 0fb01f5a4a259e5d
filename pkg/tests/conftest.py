import pytest
from hypothesis import HealthCheck, settings, strategies as st

from curvcert.exterior import ScalarSpace
from curvcert.generators import random_curvature

settings.register_profile(
    "default",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def signatures(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    return tuple(draw(st.lists(st.sampled_from((-1, 1)), min_size=n, max_size=n)))


@st.composite
def lorentz_spaces(draw, n=4):
    t = draw(st.integers(0, n - 1))
    return ScalarSpace.lorentzian(n, t)


@st.composite
def tensors(draw, min_n=4, max_n=6):
    space = ScalarSpace(draw(signatures(min_n, max_n)))
    return random_curvature(space, draw(st.integers(0, 10**6)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES
