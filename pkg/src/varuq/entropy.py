"""Entropy-based uncertainty: predictive entropy, expected entropy, mutual information.

All quantities are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionError
from .simplex import AtomMixture, Categorical, as_mixture


@dataclass(frozen=True)
class EntropyTriple:
    tu: float
    au: float
    eu: float

    def as_tuple(self):
        return (self.tu, self.au, self.eu)


def _probs(theta) -> np.ndarray:
    if isinstance(theta, Categorical):
        return theta.probs
    return Categorical(theta).probs


def shannon_entropy(theta) -> float:
    """``-sum(theta_k * log2(theta_k))`` with ``0 log 0 = 0``."""
    p = _probs(theta)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum()) + 0.0


def kl_divergence(p, q) -> float:
    """KL divergence ``D(p || q)`` in bits.

    Returns ``math.inf`` when ``p`` puts mass where ``q`` has none.
    """
    p, q = _probs(p), _probs(q)
    if p.shape != q.shape:
        raise DimensionError(f"label counts differ: {p.shape[0]} vs {q.shape[0]}")
    nz = p > 0
    if np.any(q[nz] == 0):
        return math.inf
    return max(float((p[nz] * np.log2(p[nz] / q[nz])).sum()), 0.0)


def entropy_triple(Q: AtomMixture) -> EntropyTriple:
    """Total (entropy of the mean), aleatoric (expected entropy) and epistemic
    (expected KL to the mean, i.e. mutual information) uncertainty of ``Q``.

    Zero-weight atoms do not contribute, even if they violate the mean's support.
    """
    Q = as_mixture(Q)
    ent = kernels.mixture_moments(Q.atoms, Q.weights, np.array([0, len(Q)]))[4][0]
    return EntropyTriple(float(ent[0]), float(ent[1]), float(ent[2]))


def entropy_triples(mixtures) -> np.ndarray:
    """Batch version of :func:`entropy_triple`; returns an ``(n, 3)`` array.

    All mixtures must share the same label count.
    """
    return kernels.mixture_moments(*kernels.pack(mixtures))[4]
