"""Kernel dispatch: compiled extension when importable, NumPy otherwise.

Set ``VARUQ_PURE_PYTHON=1`` to force the NumPy fallback.
"""

import os

import numpy as np

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _fallback}
if _compiled is not None:
    _BACKENDS["cython"] = _compiled

if _compiled is not None and os.environ.get("VARUQ_PURE_PYTHON", "") not in ("1", "true", "yes"):
    BACKEND = "cython"
else:
    BACKEND = "python"

_impl = _BACKENDS[BACKEND]


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    return _BACKENDS[name or BACKEND]


def pack(mixtures):
    """Stack a sequence of :class:`AtomMixture` into ragged-batch arrays."""
    sizes = [len(q) for q in mixtures]
    offsets = np.zeros(len(sizes) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    atoms = np.concatenate([q.atoms for q in mixtures], axis=0)
    weights = np.concatenate([q.weights for q in mixtures])
    return atoms, weights, offsets


def mixture_moments(atoms, weights, offsets):
    return _impl.mixture_moments(atoms, weights, offsets)


def mann_whitney(id_scores, ood_scores):
    return _impl.mann_whitney(id_scores, ood_scores)
