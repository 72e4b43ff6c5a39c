"""Mean-preserving spreads and spread-preserving shifts of atom mixtures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CannotSpreadError, DimensionError, InfeasibleShiftError
from .simplex import AtomMixture, Categorical, as_mixture, mean

# an atom coordinate may overshoot [0, 1] by this much before a shift is rejected
FEASIBILITY_TOL = 1e-12


@dataclass(frozen=True)
class SpreadSpec:
    """``epsilon`` is the fraction of the largest feasible step."""

    epsilon: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")


def _snap(rows: np.ndarray) -> np.ndarray:
    return np.clip(rows, 0.0, 1.0)


def interior_mask(Q: AtomMixture) -> np.ndarray:
    a = Q.atoms
    return np.all((a > 0.0) & (a < 1.0), axis=1)


def max_step(x: np.ndarray, d: np.ndarray) -> float:
    """Largest ``t`` with both ``x + t d`` and ``x - t d`` inside ``[0, 1]^K``."""
    ad = np.abs(d)
    nz = ad > 0
    room = np.minimum(x, 1.0 - x)
    return float(np.min(room[nz] / ad[nz]))


def mean_preserving_spread(Q: AtomMixture, spec: SpreadSpec = SpreadSpec()) -> AtomMixture:
    """Split every interior atom ``x`` into ``x + d`` and ``x - d`` with half
    its weight each.

    ``d`` is a Gaussian draw projected onto the sum-zero plane and scaled to
    ``spec.epsilon`` times the largest step that keeps both children on the
    simplex. Boundary atoms are kept unchanged.
    """
    Q = as_mixture(Q)
    inner = interior_mask(Q)
    if not inner.any():
        raise CannotSpreadError("no atom lies strictly inside the simplex")
    rng = np.random.default_rng(spec.seed)
    atoms, weights = [], []
    for x, w, ok in zip(Q.atoms, Q.weights, inner):
        if not ok:
            atoms.append(x)
            weights.append(w)
            continue
        d = rng.standard_normal(Q.K)
        d -= d.mean()
        d *= spec.epsilon * max_step(x, d)
        atoms += [_snap(x + d), _snap(x - d)]
        weights += [w / 2, w / 2]
    return AtomMixture(np.array(atoms), np.array(weights))


def location_shift(Q: AtomMixture, z) -> AtomMixture:
    """Translate every atom by the sum-zero vector ``z``."""
    Q = as_mixture(Q)
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    if z.shape[0] != Q.K:
        raise DimensionError(f"shift has {z.shape[0]} entries for {Q.K} labels")
    if not np.any(z != 0):
        raise InfeasibleShiftError("a location shift needs z != 0")
    if abs(z.sum()) > FEASIBILITY_TOL:
        raise InfeasibleShiftError(f"shift must sum to zero, sums to {z.sum()!r}")
    moved = Q.atoms + z
    if np.any(moved < -FEASIBILITY_TOL) or np.any(moved > 1.0 + FEASIBILITY_TOL):
        raise InfeasibleShiftError("shifted atoms leave the simplex")
    return AtomMixture(_snap(moved), Q.weights)


def max_shift_scale(Q: AtomMixture, direction) -> float:
    """Largest ``s >= 0`` such that ``location_shift(Q, s * direction)`` is feasible."""
    Q = as_mixture(Q)
    d = np.asarray(direction, dtype=np.float64)
    a = Q.atoms
    with np.errstate(divide="ignore"):
        up = np.where(d > 0, (1.0 - a) / d, np.inf)
        down = np.where(d < 0, a / -d, np.inf)
    return float(min(up.min(), down.min()))


def center_shift(Q: AtomMixture, lam: float, target=None) -> AtomMixture:
    """Shift ``Q`` so its mean becomes ``lam * mean(Q) + (1 - lam) * target``.

    ``target`` defaults to the simplex barycenter.
    """
    Q = as_mixture(Q)
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")
    if target is None:
        t = np.full(Q.K, 1.0 / Q.K)
    else:
        t = target.probs if isinstance(target, Categorical) else Categorical(target).probs
        if t.shape[0] != Q.K:
            raise DimensionError(f"target has {t.shape[0]} labels, Q has {Q.K}")
    z = (1.0 - lam) * (t - mean(Q).probs)
    return location_shift(Q, z - z.mean())
