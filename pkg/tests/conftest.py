import random
import sys

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from sparsegalois.lattice import LatticeSet, LatticeTuple, det

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow opt-in tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def points(n, lo=-2, hi=2):
    return st.tuples(*[st.integers(lo, hi)] * n)


@st.composite
def lattice_sets(draw, n, min_size=1, max_size=5, lo=-2, hi=2):
    pts = draw(st.lists(points(n, lo, hi), min_size=min_size, max_size=max_size, unique=True))
    return LatticeSet(pts, n)


@st.composite
def square_tuples(draw, n=None, max_size=4, lo=-2, hi=2):
    if n is None:
        n = draw(st.integers(1, 3))
    sets = [draw(lattice_sets(n, 1, max_size, lo, hi)) for _ in range(n)]
    return LatticeTuple(sets, n)


def random_unimodular(n: int, rng: random.Random, steps: int = 6):
    """Product of random elementary matrices and sign flips."""
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n == 1:
            break
        i, j = rng.sample(range(n), 2)
        q = rng.choice([-2, -1, 1, 2])
        for r in range(n):
            U[r][i] += q * U[r][j]
    for i in range(n):
        if rng.random() < 0.3:
            for r in range(n):
                U[r][i] = -U[r][i]
    assert abs(det(U)) == 1
    return U


@st.composite
def unimodular(draw, n):
    return random_unimodular(n, random.Random(draw(st.integers(0, 2**32 - 1))))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
