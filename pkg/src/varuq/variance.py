"""Variance-based uncertainty measures from the law of total variance.

For each label ``k`` with indicator ``Y_k`` and random probability ``Theta_k``::

    Var(Y_k) = E[Theta_k (1 - Theta_k)] + Var(Theta_k)
      total  =        aleatoric         +  epistemic

Aggregate measures are weighted sums of the label-wise ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .errors import ConstrainedMaximumError, DimensionError
from .simplex import AtomMixture, Categorical, WeightVector, as_mixture, as_weights


@dataclass(frozen=True)
class LabelwiseTriple:
    """Per-label total, aleatoric and epistemic variance (arrays of length K)."""

    tu: np.ndarray
    au: np.ndarray
    eu: np.ndarray

    @property
    def K(self) -> int:
        return self.tu.shape[0]

    @property
    def per_label(self) -> list[tuple[float, float, float]]:
        return [(float(t), float(a), float(e)) for t, a, e in zip(self.tu, self.au, self.eu)]


@dataclass(frozen=True)
class AggregateTriple:
    tu: float
    au: float
    eu: float
    normalized: Optional[tuple[float, float, float]] = None

    def as_tuple(self):
        return (self.tu, self.au, self.eu)


def _ro(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


def labelwise(Q: AtomMixture) -> LabelwiseTriple:
    Q = as_mixture(Q)
    _, tu, au, eu, _ = kernels.mixture_moments(Q.atoms, Q.weights, np.array([0, len(Q)]))
    return LabelwiseTriple(_ro(tu[0]), _ro(au[0]), _ro(eu[0]))


def labelwise_batch(mixtures):
    """Label-wise ``(tu, au, eu)`` arrays of shape ``(n, K)`` for a batch of
    mixtures sharing one label count."""
    _, tu, au, eu, _ = kernels.mixture_moments(*kernels.pack(mixtures))
    return tu, au, eu


def concavity_value(theta, w=None) -> float:
    """``V(theta) = sum_k w_k theta_k (1 - theta_k)``, the total variance of a
    point prediction."""
    p = theta.probs if isinstance(theta, Categorical) else Categorical(theta).probs
    w = as_weights(w, p.shape[0])
    return float(np.dot(w.w, p * (1.0 - p)))


def beta_maximizer(w) -> Categorical:
    """Closed-form maximizer of :func:`concavity_value` over the simplex.

    Raises :class:`ConstrainedMaximumError` if the stationary point has a
    negative coordinate (possible for ``K >= 3`` with very unequal weights).
    """
    w = w if isinstance(w, WeightVector) else WeightVector(w)
    K = w.K
    inv = 1.0 / w.w
    beta = 0.5 * (1.0 - (K - 2) * inv / inv.sum())
    if np.any(beta < -1e-15):
        raise ConstrainedMaximumError(
            f"stationary point {beta.tolist()} leaves the simplex; use oracles.grid_maximize"
        )
    return Categorical(np.clip(beta, 0.0, None))


def constrained_maximizer(w) -> Categorical:
    """Exact maximizer of :func:`concavity_value` on the simplex, including the
    boundary case.

    Solves the KKT conditions ``theta_k = max(0, (1 - mu / w_k) / 2)``: the
    support is the ``m`` largest weights for the largest feasible ``m``.
    """
    w = w if isinstance(w, WeightVector) else WeightVector(w)
    order = np.argsort(-w.w, kind="stable")
    ws = w.w[order]
    for m in range(w.K, 0, -1):
        mu = (m - 2) / np.sum(1.0 / ws[:m])
        if mu < ws[m - 1] and (m == w.K or mu >= ws[m]):
            break
    theta = np.zeros(w.K)
    theta[order[:m]] = 0.5 * (1.0 - mu / ws[:m])
    return Categorical(theta)


def max_total_variance(w) -> float:
    """Largest attainable aggregate TU for weights ``w``."""
    w = w if isinstance(w, WeightVector) else WeightVector(w)
    if w.is_uniform():
        return float(w.w[0] * (1.0 - 1.0 / w.K))
    return concavity_value(constrained_maximizer(w), w)


def aggregate(Q: AtomMixture, w=None, normalize: bool = False) -> AggregateTriple:
    """Weighted sums of the label-wise measures.

    With ``normalize`` the triple is also divided by :func:`max_total_variance`,
    mapping TU (hence AU and EU) into ``[0, 1]``.
    """
    Q = as_mixture(Q)
    w = as_weights(w, Q.K)
    lw = labelwise(Q)
    tu, au, eu = (float(np.dot(w.w, x)) for x in (lw.tu, lw.au, lw.eu))
    norm = None
    if normalize:
        c = max_total_variance(w)
        norm = (tu / c, au / c, eu / c)
    return AggregateTriple(tu, au, eu, norm)


def weighted_sums(tu, au, eu, w=None):
    """Aggregate batched label-wise arrays ``(n, K)`` with weights ``w``."""
    K = tu.shape[1]
    w = as_weights(w, K).w
    if w.shape[0] != K:
        raise DimensionError(f"{w.shape[0]} weights for {K} labels")
    return tu @ w, au @ w, eu @ w
