import random

import pytest
from hypothesis import strategies as st

from randcarpet.model import Ensemble, Pattern

# criterion lines collected by the acceptance module, echoed at session end
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_pattern(rng: random.Random, m_max: int = 12, n_max: int = 20) -> Pattern:
    m = rng.randint(2, m_max - 1)
    n = rng.randint(m + 1, n_max)
    k = rng.randint(1, m * n)
    cells = rng.sample([(c, r) for c in range(m) for r in range(n)], k)
    return Pattern(m, n, cells)


def random_ensemble(rng: random.Random, size_max: int = 4, m_max: int = 12, n_max: int = 20) -> Ensemble:
    size = rng.randint(1, size_max)
    pats = [random_pattern(rng, m_max, n_max) for _ in range(size)]
    if size == 1:
        return Ensemble(pats, [1.0])
    raw = [rng.uniform(0.05, 1.0) for _ in range(size)]
    s = sum(raw)
    return Ensemble(pats, [w / s for w in raw], renormalize=True)


@st.composite
def patterns(draw, m_max=12, n_max=20):
    m = draw(st.integers(2, m_max - 1))
    n = draw(st.integers(m + 1, n_max))
    cells = draw(st.sets(st.tuples(st.integers(0, m - 1), st.integers(0, n - 1)), min_size=1))
    return Pattern(m, n, cells)


@st.composite
def ensembles(draw, size_max=4, m_max=12, n_max=20):
    pats = draw(st.lists(patterns(m_max, n_max), min_size=1, max_size=size_max))
    if len(pats) == 1:
        return Ensemble(pats, [1.0])
    raw = draw(st.lists(st.floats(0.05, 1.0), min_size=len(pats), max_size=len(pats)))
    s = sum(raw)
    return Ensemble(pats, [w / s for w in raw], renormalize=True)


@pytest.fixture
def rng():
    return random.Random(20240601)
