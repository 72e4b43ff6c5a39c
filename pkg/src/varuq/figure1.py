"""Entropy- vs variance-based uncertainty for six second-order distributions
over the parameter of a Bernoulli."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .oracles import N_STREAMS, SamplerSpec, evaluate_measure, sample_q, stream_seeds

PANELS = (
    ("a", "U[0,1]", "uniform_interval", (0.0, 1.0)),
    ("b", "N(0.5,0.1)", "truncated_gaussian", (0.5, 0.1)),
    ("c", "Beta(8,2)", "beta", (8.0, 2.0)),
    ("d", "U[0.3,0.7]", "uniform_interval", (0.3, 0.7)),
    ("e", "U[0.6,1.0]", "uniform_interval", (0.6, 1.0)),
    ("f", "0.5 d0 + 0.5 d1", "dirac_mix", (0.5, 0.5)),
)
# variance measures are normalized to [0, 1]
COLUMNS = ("tu_ent", "au_ent", "eu_ent", "tu_var/norm", "au_var/norm", "eu_var/norm")


@dataclass(frozen=True)
class PanelRow:
    panel: str
    label: str
    values: dict  # column -> per-stream values, shape (n_streams,)

    def mean(self, col) -> float:
        return float(np.mean(self.values[col]))

    def se(self, col) -> float:
        v = self.values[col]
        return float(np.std(v, ddof=1) / np.sqrt(len(v))) if len(v) > 1 else 0.0


def figure1_table(n: int = 10_000, seed: int = 0, n_streams: int = N_STREAMS) -> list[PanelRow]:
    """Monte Carlo estimates for all panels.

    Every panel reuses the same stream seeds, so the two width-0.4 uniform
    panels see identical underlying uniforms (common random numbers).
    """
    seeds = stream_seeds(seed, n_streams)
    rows = []
    for panel, label, family, params in PANELS:
        vals = {c: np.empty(n_streams) for c in COLUMNS}
        for i, s in enumerate(seeds):
            Q = sample_q(SamplerSpec(family, params, n, s))
            for c in COLUMNS:
                vals[c][i] = evaluate_measure(c, Q)
        rows.append(PanelRow(panel, label, vals))
    return rows


def format_table(rows) -> str:
    head = f"{'panel':<6}{'Q':<18}" + "".join(f"{c.replace('/norm', ''):>22}" for c in COLUMNS)
    lines = [head]
    for r in rows:
        cells = "".join(f"{r.mean(c):>12.6f} ± {r.se(c):<7.1e}" for c in COLUMNS)
        lines.append(f"{r.panel:<6}{r.label:<18}{cells}")
    return "\n".join(lines) + "\n"


def table_csv(rows) -> str:
    cols = []
    for c in COLUMNS:
        base = c.replace("/norm", "")
        cols += [base, f"{base}_se"]
    lines = ["panel,distribution," + ",".join(cols)]
    for r in rows:
        cells = []
        for c in COLUMNS:
            cells += [repr(r.mean(c)), repr(r.se(c))]
        lines.append(f"{r.panel},{r.label}," + ",".join(cells))
    return "\n".join(lines) + "\n"
