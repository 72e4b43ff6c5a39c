"""Independent references for the measures.

Closed-form Dirichlet moments, Bernoulli second-order samplers, Monte Carlo
estimation over independent seed streams, and a lattice search for the
maximizer of the weighted total variance.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .entropy import entropy_triple
from .errors import DimensionError
from .simplex import AtomMixture, Categorical, DirichletQ, WeightVector, dirac_mixture
from .variance import aggregate, labelwise

FAMILIES = ("uniform_interval", "truncated_gaussian", "beta", "dirac_mix")
N_STREAMS = 10


@dataclass(frozen=True)
class SamplerSpec:
    """A second-order distribution over the parameter of a Bernoulli.

    ``params`` is ``(a, b)`` for ``uniform_interval``, ``(mu, sigma)`` for
    ``truncated_gaussian``, ``(a, b)`` for ``beta`` and the two mixture
    weights for ``dirac_mix``.
    """

    family: str
    params: tuple = field(default=())
    n: int = 10_000
    seed: int = 0

    def __post_init__(self):
        p = tuple(float(x) for x in self.params)
        object.__setattr__(self, "params", p)
        if self.family not in FAMILIES:
            raise ValueError(f"unknown sampler family {self.family!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.family == "uniform_interval":
            a, b = p
            if not 0.0 <= a < b <= 1.0:
                raise ValueError(f"need 0 <= a < b <= 1, got {p}")
        elif self.family == "truncated_gaussian":
            if p[1] <= 0:
                raise ValueError("sigma must be > 0")
        elif self.family == "beta":
            if min(p) <= 0:
                raise ValueError("beta parameters must be > 0")

    def with_seed(self, seed: int) -> "SamplerSpec":
        return SamplerSpec(self.family, self.params, self.n, seed)


def _bernoulli_atoms(theta: np.ndarray) -> AtomMixture:
    return AtomMixture(np.column_stack([theta, 1.0 - theta]))


def sample_theta(spec: SamplerSpec) -> np.ndarray:
    """Draw ``spec.n`` Bernoulli parameters. Uniform families consume exactly
    ``n`` uniforms, so equal seeds give translated copies (common random
    numbers)."""
    rng = np.random.default_rng(spec.seed)
    f, p = spec.family, spec.params
    if f == "uniform_interval":
        a, b = p
        return a + (b - a) * rng.random(spec.n)
    if f == "beta":
        return rng.beta(p[0], p[1], spec.n)
    if f == "truncated_gaussian":
        mu, sigma = p
        out = np.empty(0)
        while out.shape[0] < spec.n:
            draw = rng.normal(mu, sigma, 2 * (spec.n - out.shape[0]) + 16)
            out = np.concatenate([out, draw[(draw >= 0.0) & (draw <= 1.0)]])
        return out[: spec.n]
    raise ValueError(f"{f} has no continuous sampler")


def sample_q(spec: SamplerSpec) -> AtomMixture:
    """Equal-weight atoms ``(theta, 1 - theta)``; ``dirac_mix`` is exact."""
    if spec.family == "dirac_mix":
        return dirac_mixture(spec.params)
    return _bernoulli_atoms(sample_theta(spec))


def dirichlet_moments(alpha):
    """Closed-form label-wise ``(tu, au, eu)`` arrays under ``Dirichlet(alpha)``."""
    q = alpha if isinstance(alpha, DirichletQ) else DirichletQ(alpha)
    a, a0 = q.alpha, q.alpha0
    num = a * (a0 - a)
    tu = num / a0**2
    au = num / (a0 * (a0 + 1.0))
    eu = num / (a0**2 * (a0 + 1.0))
    return tu, au, eu


def sample_dirichlet_q(alpha, n: int, seed: int) -> AtomMixture:
    rng = np.random.default_rng(seed)
    return AtomMixture(rng.dirichlet(np.asarray(alpha, dtype=np.float64), n))


_MEASURE_RE = re.compile(r"^(tu|au|eu)_(var|ent)(?:@(\d+))?(?:/(norm))?$")


def evaluate_measure(measure_id: str, Q: AtomMixture, w=None) -> float:
    """Evaluate one scalar measure on ``Q``.

    ``measure_id`` is ``{tu,au,eu}_{var,ent}``, optionally followed by
    ``@k`` for the label-wise variance of label ``k`` or ``/norm`` for the
    normalized aggregate variance.
    """
    m = _MEASURE_RE.match(measure_id)
    if not m:
        raise ValueError(f"unknown measure {measure_id!r}")
    part, fam, label, norm = m.groups()
    idx = "tu au eu".split().index(part)
    if fam == "ent":
        if label or norm:
            raise ValueError(f"entropy measures are not label-wise: {measure_id!r}")
        return entropy_triple(Q).as_tuple()[idx]
    if label is not None:
        k = int(label)
        if k >= Q.K:
            raise DimensionError(f"label {k} out of range for K={Q.K}")
        lw = labelwise(Q)
        return float((lw.tu, lw.au, lw.eu)[idx][k])
    agg = aggregate(Q, w, normalize=bool(norm))
    return (agg.normalized if norm else agg.as_tuple())[idx]


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    se: float
    values: tuple

    def within(self, target: float, k: float = 3.0) -> bool:
        return abs(self.mean - target) <= k * self.se


def stream_seeds(seed: int, n_streams: int = N_STREAMS) -> list[int]:
    """Independent per-stream seeds derived from one root seed."""
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1, np.uint64)[0]) for c in ss.spawn(n_streams)]


def mc_estimate(measure_id: str, spec: SamplerSpec, n_streams: int = N_STREAMS, w=None) -> MCEstimate:
    """Mean and standard error of a measure over independent seed streams."""
    vals = np.array(
        [evaluate_measure(measure_id, sample_q(spec.with_seed(s)), w) for s in stream_seeds(spec.seed, n_streams)]
    )
    se = float(vals.std(ddof=1) / np.sqrt(n_streams)) if n_streams > 1 else float("nan")
    return MCEstimate(float(vals.mean()), se, tuple(vals.tolist()))


def _lattice(K: int, r: int) -> np.ndarray:
    """All points of the simplex with coordinates in ``{0, 1/r, ..., 1}``."""
    # stars and bars: choose K-1 bar positions among r+K-1 slots
    bars = np.array(list(combinations(range(r + K - 1), K - 1)), dtype=np.int64).reshape(-1, K - 1)
    edges = np.column_stack([np.full(len(bars), -1), bars, np.full(len(bars), r + K - 1)])
    return (np.diff(edges, axis=1) - 1) / r


def _pairwise_ascent(theta: np.ndarray, w: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100_000):
    """Exact pairwise coordinate ascent of ``sum w_k t_k (1 - t_k)`` on the simplex."""
    K = theta.shape[0]
    for _ in range(max_sweeps):
        moved = 0.0
        for i in range(K):
            for j in range(i + 1, K):
                # optimal mass transfer from j to i, then clipped to stay feasible
                g = w[i] * (1 - 2 * theta[i]) - w[j] * (1 - 2 * theta[j])
                t = g / (2 * (w[i] + w[j]))
                t = min(max(t, -theta[i]), theta[j])
                theta[i] += t
                theta[j] -= t
                moved = max(moved, abs(t))
        if moved <= tol:
            break
    return theta


def grid_maximize(w, resolution: int | None = None) -> Categorical:
    """Maximize the weighted total variance by lattice search, then refine the
    best lattice point by pairwise coordinate ascent.

    ``resolution`` defaults to 100 steps per axis (40 for ``K = 5``).
    """
    w = w if isinstance(w, WeightVector) else WeightVector(w)
    K = w.K
    if resolution is None:
        resolution = 100 if K <= 4 else 40
    if K > 5:
        raise ValueError("grid_maximize supports K <= 5")
    if K <= 4 and resolution < 100:
        raise ValueError("resolution must be >= 100 for K <= 4")
    if comb(resolution + K - 1, K - 1) > 5_000_000:
        raise ValueError(f"lattice too large for K={K}, resolution={resolution}")
    pts = _lattice(K, resolution)
    vals = (pts * (1.0 - pts)) @ w.w
    best = pts[int(np.argmax(vals))].copy()
    return Categorical(_pairwise_ascent(best, w.w))
