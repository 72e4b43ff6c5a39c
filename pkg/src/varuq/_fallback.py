"""Pure NumPy implementations of the numerical kernels.

Signatures match the compiled ``_kernels`` extension one to one.
"""

import numpy as np

_LN2 = np.log(2.0)


def _xlog2x(a):
    safe = np.where(a > 0, a, 1.0)
    return np.where(a > 0, a * np.log(safe), 0.0) / _LN2


def mixture_moments(atoms, weights, offsets):
    """Variance and entropy moments of a batch of ragged atom mixtures.

    Parameters
    ----------
    atoms : ndarray, shape (N, K)
        Stacked atoms of all mixtures.
    weights : ndarray, shape (N,)
        Atom weights; each mixture's weights sum to one.
    offsets : ndarray of int64, shape (n + 1,)
        Mixture ``i`` owns rows ``offsets[i]:offsets[i + 1]``.

    Returns
    -------
    mean, tu, au, eu : ndarray, shape (n, K)
        Mixture mean and the label-wise total, aleatoric and epistemic
        variances.
    ent : ndarray, shape (n, 3)
        Entropy-based total, aleatoric and epistemic uncertainty in bits.
    """
    atoms = np.ascontiguousarray(atoms, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    n = offsets.shape[0] - 1
    starts = offsets[:-1]
    seg = np.repeat(np.arange(n), np.diff(offsets))
    wcol = weights[:, None]

    # mean as anchor + weighted deviations from the first positive-weight atom,
    # so a mixture of identical atoms has its mean exactly at that atom
    pos = np.flatnonzero(weights > 0)
    anchor = atoms[pos[np.searchsorted(pos, starts)]]
    mean = anchor + np.add.reduceat(wcol * (atoms - anchor[seg]), starts, axis=0)
    tu = mean * (1.0 - mean)
    au = np.add.reduceat(wcol * (atoms * (1.0 - atoms)), starts, axis=0)
    dev = atoms - mean[seg]
    eu = np.add.reduceat(wcol * (dev * dev), starts, axis=0)

    ent = np.empty((n, 3))
    ent[:, 0] = -_xlog2x(mean).sum(axis=1)
    ent[:, 1] = np.add.reduceat(weights * -_xlog2x(atoms).sum(axis=1), starts)
    ref = mean[seg]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(atoms > 0, atoms * np.log(atoms / np.where(ref > 0, ref, 1.0)), 0.0)
    kl = np.where(weights > 0, terms.sum(axis=1) / _LN2, 0.0)
    ent[:, 2] = np.add.reduceat(weights * kl, starts)
    return mean, tu, au, eu, ent


def mann_whitney(id_scores, ood_scores):
    """Return ``(#pairs with ood > id, #pairs with ood == id)``."""
    ids = np.sort(np.asarray(id_scores, dtype=np.float64))
    ood = np.asarray(ood_scores, dtype=np.float64)
    lo = np.searchsorted(ids, ood, side="left")
    hi = np.searchsorted(ids, ood, side="right")
    return float(lo.sum()), float((hi - lo).sum())
