import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from varuq import AtomMixture

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def simplex_points(draw, K=None, max_k=6):
    K = draw(st.integers(2, max_k)) if K is None else K
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=K, max_size=K))
    raw = np.asarray(raw) + 1e-3
    return raw / raw.sum()


@st.composite
def mixtures(draw, K=None, max_k=6, max_atoms=8):
    K = draw(st.integers(2, max_k)) if K is None else K
    m = draw(st.integers(1, max_atoms))
    atoms = np.array([draw(simplex_points(K=K)) for _ in range(m)])
    w = np.asarray(draw(st.lists(st.floats(0.01, 1.0), min_size=m, max_size=m)))
    return AtomMixture(atoms, w / w.sum())


@st.composite
def label_weights(draw, K):
    return np.asarray(draw(st.lists(st.floats(0.1, 10.0), min_size=K, max_size=K)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_mixture(rng, K=None, m=None):
    K = int(rng.integers(2, 7)) if K is None else K
    m = int(rng.integers(1, 17)) if m is None else m
    return AtomMixture(rng.dirichlet(np.ones(K), m), rng.dirichlet(np.ones(m)))


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(name, passed, detail)``."""

    def record(name, passed, detail=""):
        line = f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip()
        _CRITERIA.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
