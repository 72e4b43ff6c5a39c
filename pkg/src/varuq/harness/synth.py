"""Synthetic Gaussian-cluster data and a bagged linear-softmax ensemble.

A small, fully deterministic stand-in for deep ensembles: each member is a
multinomial logistic regression trained by full-batch gradient descent on a
bootstrap resample of the training set.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ..errors import DivergenceError
from .records import PredictionRecord


@dataclass(frozen=True)
class SyntheticConfig:
    """Generative model and training setup.

    Class means default to ``n_classes`` points on a circle of radius
    ``radius`` (in units of ``sigma``) in the first two feature dimensions.
    The OoD cluster defaults to the bisector between classes 0 and 1 at
    ``ood_radius``; by the law of cosines its distance to every class mean is
    at least ``ood_radius - radius``.
    """

    n_classes: int = 3
    dim: int = 2
    sigma: float = 1.0
    radius: float = 6.0
    means: Optional[tuple] = None
    ood_mean: Optional[tuple] = None
    ood_radius: float = 18.0
    n_train: int = 200  # per class
    n_test: int = 200  # per class
    n_ood: int = 600
    members: int = 5
    bootstrap_fraction: float = 1.0
    steps: int = 300
    learning_rate: float = 0.5
    l2: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        for name in ("n_classes", "dim", "n_train", "n_test", "n_ood", "members", "steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.n_classes < 2:
            raise ValueError("need at least 2 classes")
        if self.learning_rate <= 0 or self.sigma <= 0:
            raise ValueError("learning_rate and sigma must be > 0")
        if not 0 < self.bootstrap_fraction <= 1:
            raise ValueError("bootstrap_fraction must lie in (0, 1]")

    def class_means(self) -> np.ndarray:
        if self.means is not None:
            m = np.asarray(self.means, dtype=np.float64)
            if m.shape != (self.n_classes, self.dim):
                raise ValueError(f"means must have shape ({self.n_classes}, {self.dim})")
            return m
        m = np.zeros((self.n_classes, self.dim))
        if self.dim == 1:
            m[:, 0] = np.arange(self.n_classes)
        else:
            ang = 2 * np.pi * np.arange(self.n_classes) / self.n_classes
            m[:, 0], m[:, 1] = np.cos(ang), np.sin(ang)
        return self.radius * self.sigma * m

    def ood_center(self) -> np.ndarray:
        if self.ood_mean is not None:
            return np.asarray(self.ood_mean, dtype=np.float64)
        mid = self.class_means()[:2].mean(axis=0)
        norm = np.linalg.norm(mid)
        direction = mid / norm if norm > 0 else np.eye(self.dim)[0]
        return self.ood_radius * self.sigma * direction

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SynthResult:
    train: list
    test: list
    ood: list
    config: SyntheticConfig
    members: list = field(default_factory=list)  # (W, b) per ensemble member


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def train_softmax(X, y, K, steps, lr, l2):
    """Full-batch gradient descent on the mean cross-entropy plus ``l2 |W|^2 / 2``.

    Raises :class:`DivergenceError` when the loss becomes non-finite or ends
    above its starting value (the step size overshoots).
    """
    n, d = X.shape
    W = np.zeros((d, K))
    b = np.zeros(K)
    Y = np.eye(K)[y]
    rows = np.arange(n)

    def loss_of(P):
        return -np.mean(np.log(np.clip(P[rows, y], 1e-300, None))) + 0.5 * l2 * np.sum(W * W)

    with np.errstate(over="ignore", invalid="ignore"):
        start = None
        for _ in range(steps):
            P = _softmax(X @ W + b)
            loss = loss_of(P)
            if not np.isfinite(loss):
                raise DivergenceError(f"non-finite loss; learning rate {lr} is too large")
            start = loss if start is None else start
            G = (P - Y) / n
            W -= lr * (X.T @ G + l2 * W)
            b -= lr * G.sum(axis=0)
        final = loss_of(_softmax(X @ W + b))
    if not (np.isfinite(final) and np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
        raise DivergenceError(f"parameters diverged; learning rate {lr} is too large")
    if final > start:
        raise DivergenceError(f"loss rose from {start:.4g} to {final:.4g}; learning rate {lr} is too large")
    return W, b


def _records(prefix, X, labels, models, split):
    probs = np.stack([_softmax(X @ W + b) for W, b in models], axis=1)  # (n, M, K)
    out = []
    for i in range(X.shape[0]):
        m = probs[i] / probs[i].sum(axis=1, keepdims=True)
        m.setflags(write=False)
        out.append(PredictionRecord(f"{prefix}-{i:05d}", int(labels[i]), m, split))
    return out


def sample_clusters(cfg: SyntheticConfig, rng):
    means = cfg.class_means()
    K, d = cfg.n_classes, cfg.dim

    def draw(n_per):
        y = np.repeat(np.arange(K), n_per)
        return means[y] + cfg.sigma * rng.standard_normal((K * n_per, d)), y

    Xtr, ytr = draw(cfg.n_train)
    Xte, yte = draw(cfg.n_test)
    Xood = cfg.ood_center() + cfg.sigma * rng.standard_normal((cfg.n_ood, d))
    # OoD points carry the label of the nearest class mean
    yood = np.argmin(((Xood[:, None, :] - means[None]) ** 2).sum(axis=2), axis=1)
    return (Xtr, ytr), (Xte, yte), (Xood, yood)


def synth_run(cfg: SyntheticConfig) -> SynthResult:
    """Sample data, train the bagged ensemble and emit prediction records."""
    rng = np.random.default_rng(cfg.seed)
    (Xtr, ytr), (Xte, yte), (Xood, yood) = sample_clusters(cfg, rng)
    n = Xtr.shape[0]
    m = max(1, int(round(cfg.bootstrap_fraction * n)))
    models = []
    for member_rng in rng.spawn(cfg.members):
        idx = member_rng.integers(0, n, m)
        models.append(train_softmax(Xtr[idx], ytr[idx], cfg.n_classes, cfg.steps, cfg.learning_rate, cfg.l2))
    return SynthResult(
        _records("train", Xtr, ytr, models, "train"),
        _records("test", Xte, yte, models, "test"),
        _records("ood", Xood, yood, models, "ood"),
        cfg,
        models,
    )


def nearest_mean_accuracy(cfg: SyntheticConfig) -> float:
    """Test accuracy of the nearest-true-mean classifier (Bayes-optimal for
    equal isotropic clusters); an oracle independent of the ensemble."""
    rng = np.random.default_rng(cfg.seed)
    _, (Xte, yte), _ = sample_clusters(cfg, rng)
    means = cfg.class_means()
    pred = np.argmin(((Xte[:, None, :] - means[None]) ** 2).sum(axis=2), axis=1)
    return float(np.mean(pred == yte))
