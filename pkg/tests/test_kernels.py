import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varuq import kernels
from varuq.kernels import available_backends, get_backend, pack

from .conftest import mixtures

needs_compiled = pytest.mark.skipif("cython" not in available_backends(), reason="extension not built")


def _batch(rng, n=200, K=4):
    sizes = rng.integers(1, 9, n)
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
    atoms = rng.dirichlet(np.ones(K), offsets[-1])
    # sprinkle exact zeros and zero-weight atoms
    atoms[rng.random(atoms.shape[0]) < 0.1] = np.eye(K)[0]
    weights = np.concatenate([rng.dirichlet(np.ones(s)) for s in sizes])
    weights[offsets[:-1][sizes > 2] + 1] = 0.0
    for i in range(n):
        sl = slice(offsets[i], offsets[i + 1])
        weights[sl] /= weights[sl].sum()
    return atoms, weights, offsets


@needs_compiled
class TestParity:
    def test_mixture_moments(self, rng):
        args = _batch(rng)
        py = get_backend("python").mixture_moments(*args)
        cy = get_backend("cython").mixture_moments(*args)
        for a, b in zip(py, cy):
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)

    @given(st.lists(mixtures(K=3), min_size=1, max_size=5))
    def test_mixture_moments_property(self, qs):
        args = pack(qs)
        for a, b in zip(get_backend("python").mixture_moments(*args), get_backend("cython").mixture_moments(*args)):
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)

    @given(st.lists(st.integers(0, 5), min_size=1, max_size=20), st.lists(st.integers(0, 5), min_size=1, max_size=20))
    def test_mann_whitney(self, a, b):
        assert get_backend("python").mann_whitney(a, b) == get_backend("cython").mann_whitney(a, b)


def test_identical_atoms_give_exact_zero():
    atoms = np.tile([0.1, 0.2, 0.7], (3, 1))
    for name in available_backends():
        _, _, _, eu, ent = get_backend(name).mixture_moments(atoms, np.array([0.2, 0.3, 0.5]), np.array([0, 3]))
        assert np.all(eu == 0) and ent[0, 2] == 0


def test_zero_weight_leading_atom():
    atoms = np.array([[1.0, 0.0], [0.3, 0.7], [0.3, 0.7]])
    for name in available_backends():
        mean, _, _, eu, ent = get_backend(name).mixture_moments(atoms, np.array([0.0, 0.5, 0.5]), np.array([0, 3]))
        np.testing.assert_array_equal(mean[0], [0.3, 0.7])
        assert np.all(eu == 0) and ent[0, 2] == 0


def test_backend_selection_by_environment():
    env = dict(os.environ, VARUQ_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from varuq import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_active_backend_is_listed():
    assert kernels.BACKEND in available_backends()
    assert "python" in available_backends()
