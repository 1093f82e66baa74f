import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from mhrev.core import validate_generator
from mhrev.oracles import InstanceSpec, random_irreducible_generator, random_target


def leq(a, b, tol):
    """a <= b up to tol relative to max(1, |a|, |b|)."""
    return a <= b + tol * max(1.0, abs(a), abs(b))


@pytest.fixture
def q_a():
    return validate_generator([[-2.0, 2.0], [1.0, -1.0]])


@pytest.fixture
def half():
    return np.array([0.5, 0.5])


@pytest.fixture
def q_c():
    # birth-death on {0,1,2}: 0->1 at 1, 1->0 at 2, 1->2 at 1, 2->1 at 3
    return validate_generator([[-1.0, 1.0, 0.0], [2.0, -3.0, 1.0], [0.0, 3.0, -3.0]])


@pytest.fixture
def uniform3():
    return np.full(3, 1.0 / 3.0)


@st.composite
def instances(draw, min_n=2, max_n=8, structures=("dense", "birth-death")):
    """(Q, mu) with Q a random irreducible generator and mu a random positive target."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    structure = draw(st.sampled_from(structures))
    q = random_irreducible_generator(InstanceSpec(n, seed, structure))
    mu = random_target(n, np.random.default_rng(seed + 1))
    return q, mu


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        terminalreporter.write_line(results[k].line())
