"""Scoring, accuracy-rejection curves, OoD AUROC and correct/incorrect histograms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import kernels
from ..errors import DimensionError, SchemaError
from ..simplex import as_weights

MEASURES = ("tu_ent", "au_ent", "eu_ent", "tu_var", "au_var", "eu_var")


@dataclass(frozen=True)
class Scores:
    """Per-instance scores of all measures plus label-wise variance triples."""

    values: dict  # measure id -> (n,) array
    labelwise: tuple  # (tu, au, eu), each (n, K)
    mean: np.ndarray  # (n, K) ensemble means

    def __getitem__(self, measure_id):
        return self.values[measure_id]

    @property
    def predictions(self) -> np.ndarray:
        # argmax picks the lowest index on ties
        return np.argmax(self.mean, axis=1)


def _pack_records(records):
    if not records:
        raise SchemaError("no records to score")
    K = records[0].K
    sizes = np.array([r.M for r in records], dtype=np.int64)
    offsets = np.zeros(len(records) + 1, dtype=np.int64)
    np.cumsum(sizes, out=offsets[1:])
    atoms = np.concatenate([r.members for r in records], axis=0)
    if atoms.shape[1] != K:
        raise DimensionError("records disagree on the label count")
    weights = np.repeat(1.0 / sizes, sizes)
    return atoms, weights, offsets


def score_all(records, weights=None) -> Scores:
    """Evaluate every measure on the uniform-weight ensemble mixture of each record."""
    atoms, wts, offsets = _pack_records(records)
    K = atoms.shape[1]
    w = as_weights(weights, K).w
    mean, tu, au, eu, ent = kernels.mixture_moments(atoms, wts, offsets)
    values = {
        "tu_ent": ent[:, 0], "au_ent": ent[:, 1], "eu_ent": ent[:, 2],
        "tu_var": tu @ w, "au_var": au @ w, "eu_var": eu @ w,
    }
    return Scores(values, (tu, au, eu), mean)


def score(records, measure_id: str, weights=None):
    """Scores of one measure and the label-wise variance triples.

    Returns ``(scores, (tu, au, eu))``; label-wise arrays have shape ``(n, K)``.
    """
    if measure_id not in MEASURES:
        raise ValueError(f"unknown measure {measure_id!r}; choose from {', '.join(MEASURES)}")
    s = score_all(records, weights)
    return s[measure_id], s.labelwise


def correctness(records, scores: Optional[Scores] = None) -> np.ndarray:
    """Boolean vector: does the ensemble-mean argmax hit the true label?"""
    s = scores if scores is not None else score_all(records)
    labels = np.array([r.label for r in records])
    return s.predictions == labels


@dataclass(frozen=True)
class ArcCurve:
    fractions: np.ndarray
    accuracies: np.ndarray  # NaN where nothing remains
    kept: np.ndarray


def default_grid() -> np.ndarray:
    return np.round(np.arange(100) * 0.01, 10)


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (inclusive stop) or a comma-separated list."""
    if ":" in text:
        start, stop, step = (float(x) for x in text.split(":"))
        n = int(round((stop - start) / step)) + 1
        return np.round(start + step * np.arange(n), 10)
    return np.array([float(x) for x in text.split(",")])


def n_rejected(fraction: float, n: int) -> int:
    # round first so 0.07 * 100 = 7.000000000000001 rejects 7, not 8
    return math.ceil(round(fraction * n, 9))


def arc(records, scores, grid=None, correct=None) -> ArcCurve:
    """Accuracy on the instances kept after rejecting the ``ceil(r N)`` highest
    scores; among equal scores the earlier record is rejected first."""
    scores = np.asarray(scores, dtype=np.float64)
    n = scores.shape[0]
    if len(records) != n:
        raise DimensionError(f"{n} scores for {len(records)} records")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    if np.any(grid < 0) or np.any(grid > 1):
        raise ValueError("rejection fractions must lie in [0, 1]")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("rejection grid must be strictly increasing")
    ok = correctness(records) if correct is None else np.asarray(correct, dtype=bool)
    order = np.lexsort((np.arange(n), -scores))
    ok_sorted = ok[order]
    # suffix sums: correct among instances order[j:]
    tail_correct = np.concatenate([np.cumsum(ok_sorted[::-1])[::-1], [0]])
    acc, kept = np.empty(grid.shape[0]), np.empty(grid.shape[0], dtype=np.int64)
    for i, r in enumerate(grid):
        j = n_rejected(r, n)
        kept[i] = n - j
        acc[i] = tail_correct[j] / (n - j) if j < n else np.nan
    return ArcCurve(grid, acc, kept)


def auroc(id_scores, ood_scores) -> float:
    """``P(ood > id) + P(ood == id) / 2`` over all (id, ood) pairs."""
    a = np.asarray(id_scores, dtype=np.float64).ravel()
    b = np.asarray(ood_scores, dtype=np.float64).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("both score sets must be nonempty")
    greater, ties = kernels.mann_whitney(a, b)
    return (greater + 0.5 * ties) / (a.size * b.size)


@dataclass(frozen=True)
class OodReport:
    auroc: float
    id_summary: tuple  # (min, median, max)
    ood_summary: tuple


def _summary(x):
    return (float(np.min(x)), float(np.median(x)), float(np.max(x)))


def ood_report(id_scores, ood_scores) -> OodReport:
    return OodReport(auroc(id_scores, ood_scores), _summary(id_scores), _summary(ood_scores))


@dataclass(frozen=True)
class Histograms:
    edges: np.ndarray
    correct: np.ndarray
    incorrect: np.ndarray


def histogram_split(records, scores, bins: int = 30, correct=None) -> Histograms:
    """Equal-width histograms of ``scores`` over their observed range, split by
    whether the ensemble classified the instance correctly."""
    if bins < 2:
        raise ValueError("need at least 2 bins")
    scores = np.asarray(scores, dtype=np.float64)
    ok = correctness(records) if correct is None else np.asarray(correct, dtype=bool)
    edges = np.histogram_bin_edges(scores, bins=bins)
    c, _ = np.histogram(scores[ok], bins=edges)
    i, _ = np.histogram(scores[~ok], bins=edges)
    return Histograms(edges, c, i)
