"""First- and second-order distributions on the probability simplex.

A first-order distribution is a :class:`Categorical` over ``K`` labels. A
second-order distribution is either a finite weighted mixture of Dirac
measures on categoricals (:class:`AtomMixture`) or a Dirichlet
(:class:`DirichletQ`). All objects are immutable; their arrays are marked
read-only.
"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, SimplexError

SIMPLEX_TOL = 1e-9
WEIGHT_TOL = 1e-12
# entries this far below zero are treated as round-off and clipped
NEG_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64, copy=True)
    a.setflags(write=False)
    return a


def as_simplex_rows(rows, tol: float = SIMPLEX_TOL) -> np.ndarray:
    """Validate rows of probabilities and renormalize them exactly.

    Parameters
    ----------
    rows : array_like, shape (..., K)
    tol : float
        Largest accepted deviation of a row sum from 1.

    Returns
    -------
    numpy.ndarray
        A fresh float64 array whose rows sum to 1 to working precision.
    """
    a = np.array(rows, dtype=np.float64)
    if a.ndim == 0 or a.shape[-1] < 2:
        raise SimplexError(f"need at least 2 labels, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SimplexError("probabilities must be finite")
    if np.any(a < -NEG_TOL):
        raise SimplexError(f"negative probability {a.min()!r}")
    a = np.clip(a, 0.0, None)
    s = a.sum(axis=-1, keepdims=True)
    bad = np.abs(s - 1.0) > tol
    if np.any(bad):
        raise SimplexError(f"probabilities sum to {s[bad].ravel()[0]!r}, not 1 (tol {tol:g})")
    # rows already at 1 up to rounding are kept as given, so renormalizing is idempotent
    ulps = 4 * a.shape[-1] * np.finfo(np.float64).eps
    return np.where(np.abs(s - 1.0) <= ulps, a, a / s)


class Categorical:
    """A first-order distribution ``theta`` on ``K >= 2`` labels."""

    __slots__ = ("probs",)

    def __init__(self, probs: Union[Sequence[float], np.ndarray, "Categorical"]):
        if isinstance(probs, Categorical):
            probs = probs.probs
        p = as_simplex_rows(probs)
        if p.ndim != 1:
            raise SimplexError(f"expected a vector, got shape {p.shape}")
        object.__setattr__(self, "probs", _frozen(p))

    def __setattr__(self, name, value):
        raise AttributeError("Categorical is immutable")

    @property
    def K(self) -> int:
        return self.probs.shape[0]

    def __len__(self) -> int:
        return self.K

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, Categorical):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)

    def __hash__(self):
        return hash(self.probs.tobytes())

    def __repr__(self):
        return f"Categorical({np.array2string(self.probs, precision=6, separator=', ')})"


class AtomMixture:
    """A finite mixture of Dirac measures on categoricals.

    Parameters
    ----------
    atoms : array_like, shape (M, K), or sequence of :class:`Categorical`
    weights : array_like, shape (M,), optional
        Nonnegative, summing to one. Defaults to uniform ``1/M``.

    Identical atoms are kept as separate entries.
    """

    __slots__ = ("atoms", "weights")

    def __init__(self, atoms, weights=None):
        if isinstance(atoms, Categorical):
            atoms = [atoms]
        if isinstance(atoms, np.ndarray):
            rows = atoms
        else:
            rows = [a.probs if isinstance(a, Categorical) else a for a in atoms]
        if len(rows) == 0:
            raise SimplexError("an atom mixture needs at least one atom")
        try:
            arr = np.array(rows, dtype=np.float64)
        except ValueError as exc:
            raise DimensionError(f"atoms have different label counts: {exc}") from None
        if arr.ndim != 2:
            raise DimensionError(f"atoms must form an (M, K) array, got shape {arr.shape}")
        arr = as_simplex_rows(arr)
        m = arr.shape[0]
        if weights is None:
            w = np.full(m, 1.0 / m)
        else:
            w = np.array(weights, dtype=np.float64).reshape(-1)
            if w.shape[0] != m:
                raise DimensionError(f"{w.shape[0]} weights for {m} atoms")
            if not np.all(np.isfinite(w)) or np.any(w < 0):
                raise SimplexError("mixture weights must be finite and nonnegative")
            s = w.sum()
            if abs(s - 1.0) > WEIGHT_TOL:
                raise SimplexError(f"mixture weights sum to {s!r}, not 1")
            w = w / s
        object.__setattr__(self, "atoms", _frozen(arr))
        object.__setattr__(self, "weights", _frozen(w))

    def __setattr__(self, name, value):
        raise AttributeError("AtomMixture is immutable")

    @property
    def K(self) -> int:
        return self.atoms.shape[1]

    def __len__(self) -> int:
        return self.atoms.shape[0]

    def categoricals(self) -> list[Categorical]:
        return [Categorical(a) for a in self.atoms]

    def support(self) -> "AtomMixture":
        """Drop zero-weight atoms."""
        keep = self.weights > 0
        return AtomMixture(self.atoms[keep], self.weights[keep] / self.weights[keep].sum())

    def is_dirac(self) -> bool:
        """True when all positive-weight atoms are identical."""
        a = self.atoms[self.weights > 0]
        return bool(np.all(a == a[0]))

    def __repr__(self):
        return f"AtomMixture(M={len(self)}, K={self.K})"


class DirichletQ:
    """A Dirichlet second-order distribution with concentration ``alpha``."""

    __slots__ = ("alpha",)

    def __init__(self, alpha):
        a = np.array(alpha, dtype=np.float64).reshape(-1)
        if a.shape[0] < 2:
            raise SimplexError("a Dirichlet needs at least 2 labels")
        if not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise SimplexError("Dirichlet concentrations must be strictly positive")
        object.__setattr__(self, "alpha", _frozen(a))

    def __setattr__(self, name, value):
        raise AttributeError("DirichletQ is immutable")

    @property
    def K(self) -> int:
        return self.alpha.shape[0]

    @property
    def alpha0(self) -> float:
        return float(self.alpha.sum())

    def __repr__(self):
        return f"DirichletQ({self.alpha.tolist()})"


class WeightVector:
    """Strictly positive per-label importance weights."""

    __slots__ = ("w",)

    def __init__(self, w):
        a = np.array(w, dtype=np.float64).reshape(-1)
        if a.shape[0] < 1:
            raise DimensionError("empty weight vector")
        if not np.all(np.isfinite(a)) or np.any(a <= 0):
            raise SimplexError("label weights must be strictly positive")
        object.__setattr__(self, "w", _frozen(a))

    def __setattr__(self, name, value):
        raise AttributeError("WeightVector is immutable")

    @classmethod
    def uniform(cls, K: int) -> "WeightVector":
        return cls(np.ones(K))

    @property
    def K(self) -> int:
        return self.w.shape[0]

    def is_uniform(self) -> bool:
        return bool(np.all(self.w == self.w[0]))

    def __repr__(self):
        return f"WeightVector({self.w.tolist()})"


def as_weights(w, K: int) -> WeightVector:
    """Coerce ``None``/sequence/:class:`WeightVector` to a length-``K`` vector."""
    if w is None:
        return WeightVector.uniform(K)
    if not isinstance(w, WeightVector):
        w = WeightVector(w)
    if w.K != K:
        raise DimensionError(f"{w.K} weights for {K} labels")
    return w


def as_mixture(Q) -> AtomMixture:
    if isinstance(Q, AtomMixture):
        return Q
    if isinstance(Q, Categorical):
        return AtomMixture([Q])
    return AtomMixture(Q)


def mean(Q: Union[AtomMixture, DirichletQ]) -> Categorical:
    """Expected first-order distribution under ``Q``."""
    if isinstance(Q, DirichletQ):
        return Categorical(Q.alpha / Q.alpha0)
    Q = as_mixture(Q)
    return Categorical(Q.weights @ Q.atoms)


def from_ensemble(members) -> AtomMixture:
    """Uniform-weight empirical second-order distribution of ensemble outputs."""
    return AtomMixture(members)


def dirac(theta) -> AtomMixture:
    return AtomMixture([Categorical(theta)])


def dirac_mixture(lambdas) -> AtomMixture:
    """Mixture of Diracs on the simplex vertices with weights ``lambdas``."""
    lam = np.array(lambdas, dtype=np.float64).reshape(-1)
    K = lam.shape[0]
    if K < 2:
        raise SimplexError("need at least 2 labels")
    return AtomMixture(np.eye(K), lam)
