"""Experiment harness: prediction files, scoring, ARCs, OoD AUROC, histograms."""

from .metrics import (
    MEASURES,
    ArcCurve,
    Histograms,
    OodReport,
    Scores,
    arc,
    auroc,
    correctness,
    histogram_split,
    ood_report,
    parse_grid,
    score,
    score_all,
)
from .records import PredictionRecord, load_predictions, write_predictions
from .synth import SyntheticConfig, SynthResult, synth_run
