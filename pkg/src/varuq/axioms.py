"""Numerical falsification of the uncertainty axioms A0-A7.

Each check draws seeded random atom mixtures, applies the relevant
transformation and counts cases where a measure family breaks the axiom.
Reports serialize to one ``key=value`` line with fields in fixed order.

Margins are signed slacks: positive means the property holds with room to
spare, negative means it is broken. A case counts as a violation once the
slack crosses the family's tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels
from .errors import CannotSpreadError, InfeasibleShiftError
from .oracles import grid_maximize, sample_dirichlet_q
from .simplex import AtomMixture, dirac_mixture, mean
from .transforms import SpreadSpec, center_shift, location_shift, max_shift_scale, mean_preserving_spread
from .variance import beta_maximizer

AXIOMS = ("A0", "A1", "A3", "A4", "A5", "A6", "A7")

EXACT_MARGIN = 1e-12
LOG_MARGIN = 1e-10


def _variance_family(atoms, weights, offsets, w):
    _, tu, au, eu, _ = kernels.mixture_moments(atoms, weights, offsets)
    return np.column_stack([tu @ w, au @ w, eu @ w])


def _entropy_family(atoms, weights, offsets, w):
    return kernels.mixture_moments(atoms, weights, offsets)[4]


@dataclass(frozen=True)
class MeasureFamily:
    """A registered ``(TU, AU, EU)`` triple.

    ``evaluate(atoms, weights, offsets, w)`` maps a packed batch of mixtures
    to an ``(n, 3)`` array. It must accept atoms restricted to a subset of
    labels (rows need not sum to one) for the partition axiom.
    """

    name: str
    evaluate: Callable
    tol: float
    strict_spread: bool
    uses_weights: bool


FAMILIES: dict[str, MeasureFamily] = {}


def register_family(family: MeasureFamily) -> None:
    FAMILIES[family.name] = family


register_family(MeasureFamily("variance", _variance_family, EXACT_MARGIN, True, True))
register_family(MeasureFamily("entropy", _entropy_family, LOG_MARGIN, False, False))

# verdicts the literature predicts when they differ from "hold"
EXPECTED = {("A5", "entropy"): "fail", ("A4", "entropy"): "report"}


def measure(family: str | MeasureFamily, Q: AtomMixture, w=None, labels=None) -> np.ndarray:
    """``[tu, au, eu]`` of ``Q``; with ``labels``, of its unrenormalized restriction."""
    fam = FAMILIES[family] if isinstance(family, str) else family
    w = np.ones(Q.K) if w is None else np.asarray(w, dtype=np.float64)
    atoms = Q.atoms
    if labels is not None:
        atoms, w = np.ascontiguousarray(atoms[:, labels]), w[labels]
    return fam.evaluate(atoms, Q.weights, np.array([0, len(Q)], dtype=np.int64), w)[0]


@dataclass(frozen=True)
class GeneratorConfig:
    k_min: int = 2
    k_max: int = 6
    atoms_min: int = 1
    atoms_max: int = 16
    cases: int = 1000
    seed: int = 0
    concentration: float = 1.0
    # draw label weights from U(weight_low, weight_high) where an axiom allows it
    random_weights: bool = True
    weight_low: float = 0.5
    weight_high: float = 2.0
    # fixed spread epsilon; None draws one per case from U(0.05, 1)
    spread_epsilon: float | None = None

    def rng(self, case: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, case])

    def draw(self, rng, min_atoms=None):
        K = int(rng.integers(self.k_min, self.k_max + 1))
        M = int(rng.integers(max(self.atoms_min, min_atoms or 1), self.atoms_max + 1))
        atoms = rng.dirichlet(np.full(K, self.concentration), M)
        weights = rng.dirichlet(np.ones(M)) if M > 1 else np.ones(1)
        return AtomMixture(atoms, weights)

    def label_weights(self, rng, K, allowed=True):
        if allowed and self.random_weights:
            return rng.uniform(self.weight_low, self.weight_high, K)
        return np.ones(K)


@dataclass
class AxiomReport:
    axiom: str
    family: str
    cases: int
    violations: int
    worst_margin: float
    seed: int
    skipped: int = 0
    expected: str = "hold"
    components: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if self.expected == "report":
            return "REPORT"
        if self.expected == "fail":
            return "EXPECTED-FAIL" if self.violations else "UNEXPECTED-PASS"
        return "PASS" if self.violations == 0 else "FAIL"

    @property
    def ok(self) -> bool:
        return self.verdict in ("PASS", "EXPECTED-FAIL", "REPORT")

    def to_line(self) -> str:
        comps = ",".join(f"{k}:{v}" for k, v in self.components.items()) or "-"
        return (
            f"axiom={self.axiom} family={self.family} cases={self.cases} "
            f"violations={self.violations} worst_margin={self.worst_margin:.6e} seed={self.seed} "
            f"skipped={self.skipped} expected={self.expected} verdict={self.verdict} components={comps}"
        )


class _Tally:
    def __init__(self, names):
        self.viol = {n: 0 for n in names}
        self.worst = np.inf
        self.cases = 0
        self.bad = 0
        self.skipped = 0

    def add(self, **slacks_and_limits):
        """Each kwarg is ``name=(slack, limit)``; slack < limit is a violation."""
        self.cases += 1
        broke = False
        for name, (slack, limit) in slacks_and_limits.items():
            self.worst = min(self.worst, slack)
            if slack < limit:
                self.viol[name] += 1
                broke = True
        self.bad += broke

    def report(self, axiom, family, seed):
        worst = float(self.worst) if self.cases else float("nan")
        return AxiomReport(
            axiom, family, self.cases, self.bad, worst, seed, self.skipped,
            EXPECTED.get((axiom, family), "hold"), dict(self.viol),
        )


def _uniform_pair_case(n=1000, seed=0):
    """The U[0.3, 0.7] -> U[0.6, 1.0] location shift on a Bernoulli parameter."""
    theta = 0.3 + 0.4 * np.random.default_rng(seed).random(n)
    Q = AtomMixture(np.column_stack([theta, 1.0 - theta]))
    return Q, np.array([0.3, -0.3])


def _check_a0(fam, cfg, t):
    for c in range(cfg.cases):
        rng = cfg.rng(c)
        Q = cfg.draw(rng)
        v = measure(fam, Q, cfg.label_weights(rng, Q.K))
        t.add(tu=(v[0], -EXACT_MARGIN), au=(v[1], -EXACT_MARGIN), eu=(v[2], -EXACT_MARGIN))


def _check_a1(fam, cfg, t):
    for c in range(cfg.cases):
        rng = cfg.rng(c)
        Q = cfg.draw(rng, min_atoms=2)
        w = cfg.label_weights(rng, Q.K)
        # same atom repeated with random multiplicity and weights is still a Dirac
        D = AtomMixture(np.repeat(Q.atoms[:1], len(Q), axis=0), Q.weights)
        eu_dirac = measure(fam, D, w)[2]
        eu_spread = measure(fam, Q, w)[2]
        t.add(dirac=(-eu_dirac, -EXACT_MARGIN), nondegenerate=(eu_spread, fam.tol))


def _check_a3(fam, cfg, t):
    for c in range(cfg.cases):
        rng = cfg.rng(c)
        Q = cfg.draw(rng)
        w = cfg.label_weights(rng, Q.K)
        eps = cfg.spread_epsilon if cfg.spread_epsilon is not None else rng.uniform(0.05, 1.0)
        try:
            Q2 = mean_preserving_spread(Q, SpreadSpec(eps, int(rng.integers(2**63))))
        except (CannotSpreadError, ValueError):
            t.skipped += 1
            continue
        d = measure(fam, Q2, w) - measure(fam, Q, w)
        if fam.strict_spread:
            t.add(eu=(d[2], EXACT_MARGIN), tu=(d[0], EXACT_MARGIN))
        else:
            t.add(eu=(d[2], -LOG_MARGIN), tu=(d[0], -LOG_MARGIN))


def _check_a4(fam, cfg, t):
    for c in range(cfg.cases):
        rng = cfg.rng(c)
        Q = cfg.draw(rng)
        direction = np.full(Q.K, 1.0 / Q.K) - mean(Q).probs
        s_max = min(max_shift_scale(Q, direction), 1.0) if np.any(direction != 0) else 0.0
        if s_max <= 0:
            t.skipped += 1
            continue
        lam = 1.0 - rng.uniform(0.05, 0.95) * s_max
        try:
            Q2 = center_shift(Q, lam)
        except InfeasibleShiftError:
            t.skipped += 1
            continue
        d = measure(fam, Q2) - measure(fam, Q)
        t.add(au=(d[1], fam.tol), tu=(d[0], fam.tol))


def _check_a5(fam, cfg, t):
    for c in range(cfg.cases):
        rng = cfg.rng(c)
        if c == 0:
            Q, z = _uniform_pair_case(seed=cfg.seed)
            w = np.ones(2)
        else:
            Q = cfg.draw(rng)
            w = cfg.label_weights(rng, Q.K)
            d = rng.standard_normal(Q.K)
            d -= d.mean()
            s_max = max_shift_scale(Q, d)
            if s_max <= 0:
                t.skipped += 1
                continue
            z = rng.uniform(0.05, 0.95) * s_max * d
        try:
            Q2 = location_shift(Q, z - z.mean())
        except InfeasibleShiftError:
            t.skipped += 1
            continue
        delta = abs(measure(fam, Q2, w)[2] - measure(fam, Q, w)[2])
        t.add(eu=(-delta, -fam.tol))


def _check_a6(fam, cfg, t):
    for c in range(cfg.cases):
        rng = cfg.rng(c)
        K = int(rng.integers(cfg.k_min, cfg.k_max + 1))
        Q = dirac_mixture(rng.dirichlet(np.ones(K)))
        au = measure(fam, Q, cfg.label_weights(rng, K))[1]
        # exact zero required: any nonzero AU is a violation
        t.add(au=(-abs(au), 0.0))


def _check_a7(fam, cfg, t):
    for c in range(cfg.cases):
        rng = cfg.rng(c)
        Q = cfg.draw(rng)
        w = cfg.label_weights(rng, Q.K)
        perm = rng.permutation(Q.K)
        cut = int(rng.integers(1, Q.K))
        first, second = np.sort(perm[:cut]), np.sort(perm[cut:])
        whole = measure(fam, Q, w)
        parts = measure(fam, Q, w, first) + measure(fam, Q, w, second)
        if fam.strict_spread:
            gap = -np.abs(whole - parts)
            lim = -EXACT_MARGIN
        else:
            gap = parts - whole
            lim = -LOG_MARGIN
        t.add(tu=(gap[0], lim), au=(gap[1], lim), eu=(gap[2], lim))


_CHECKS = {"A0": _check_a0, "A1": _check_a1, "A3": _check_a3, "A4": _check_a4,
           "A5": _check_a5, "A6": _check_a6, "A7": _check_a7}
_COMPONENTS = {"A0": ("tu", "au", "eu"), "A1": ("dirac", "nondegenerate"), "A3": ("eu", "tu"),
               "A4": ("au", "tu"), "A5": ("eu",), "A6": ("au",), "A7": ("tu", "au", "eu")}


def check_axiom(axiom: str, family: str = "variance", config: GeneratorConfig = GeneratorConfig()) -> AxiomReport:
    """Run one axiom against one measure family.

    The A3 check for a family with strict spreads requires *both* EU and TU to
    increase; the report's ``components`` field shows which part broke.
    """
    if axiom not in _CHECKS:
        raise ValueError(f"unknown axiom {axiom!r}; choose from {AXIOMS}")
    if family not in FAMILIES:
        raise ValueError(f"unknown measure family {family!r}; choose from {sorted(FAMILIES)}")
    t = _Tally(_COMPONENTS[axiom])
    _CHECKS[axiom](FAMILIES[family], config, t)
    return t.report(axiom, family, config.seed)


def check_proposition_mps_entropy(config: GeneratorConfig = GeneratorConfig()) -> AxiomReport:
    """Entropy EU must not decrease under a mean-preserving spread."""
    fam = FAMILIES["entropy"]
    t = _Tally(("eu",))
    for c in range(config.cases):
        rng = config.rng(c)
        Q = config.draw(rng)
        eps = config.spread_epsilon if config.spread_epsilon is not None else rng.uniform(0.05, 1.0)
        try:
            Q2 = mean_preserving_spread(Q, SpreadSpec(eps, int(rng.integers(2**63))))
        except (CannotSpreadError, ValueError):
            t.skipped += 1
            continue
        t.add(eu=(measure(fam, Q2)[2] - measure(fam, Q)[2], -LOG_MARGIN))
    return t.report("P1", "entropy", config.seed)


def check_beta_maximizer(n: int = 100, ks=(2, 3, 4), seed: int = 0, weight_low: float = 1.0,
                         weight_high: float = 3.0, tol: float = 1e-4) -> AxiomReport:
    """Closed-form maximizer vs. lattice search, l-infinity distance <= ``tol``."""
    t = _Tally(("linf",))
    for c in range(n):
        rng = np.random.default_rng([seed, c])
        K = int(ks[c % len(ks)])
        w = rng.uniform(weight_low, weight_high, K)
        gap = np.max(np.abs(beta_maximizer(w).probs - grid_maximize(w).probs))
        t.add(linf=(-gap, -tol))
    return t.report("L1", "variance", seed)


def check_corollary(n: int = 100, ks=(2, 3, 4), seed: int = 0, weight_low: float = 1.0,
                    weight_high: float = 3.0, max_atoms: int = 16) -> AxiomReport:
    """Shifting the mean toward the weighted maximizer strictly raises AU and TU."""
    t = _Tally(("au", "tu"))
    fam = FAMILIES["variance"]
    for c in range(n):
        rng = np.random.default_rng([seed, c])
        K = int(ks[c % len(ks)])
        w = rng.uniform(weight_low, weight_high, K)
        beta = beta_maximizer(w)
        Q = AtomMixture(rng.dirichlet(np.ones(K), int(rng.integers(1, max_atoms + 1))))
        direction = beta.probs - mean(Q).probs
        s_max = min(max_shift_scale(Q, direction), 1.0)
        if s_max <= 0:
            t.skipped += 1
            continue
        Q2 = center_shift(Q, 1.0 - rng.uniform(0.05, 0.95) * s_max, target=beta)
        d = measure(fam, Q2, w) - measure(fam, Q, w)
        t.add(au=(d[1], EXACT_MARGIN), tu=(d[0], EXACT_MARGIN))
    return t.report("C1", "variance", seed)


def run_suite(families=("variance", "entropy"), config: GeneratorConfig = GeneratorConfig()) -> list[AxiomReport]:
    reports = [check_axiom(a, f, config) for f in families for a in AXIOMS]
    if "entropy" in families:
        reports.append(check_proposition_mps_entropy(config))
    if "variance" in families:
        reports.append(check_beta_maximizer(seed=config.seed))
        reports.append(check_corollary(seed=config.seed))
    return reports


def probe_a2(K: int = 2, n: int = 20_000, seed: int = 0) -> dict:
    """Compare the uniform second-order distribution with the uniform mixture of
    vertex Diracs. Both share the barycenter as mean, so TU ties while EU is
    larger for the vertex mixture in both families: the uniform Q does not
    maximize EU. Values only, no verdict."""
    uniform = sample_dirichlet_q(np.ones(K), n, seed)
    vertices = dirac_mixture(np.full(K, 1.0 / K))
    out = {}
    for fam in ("variance", "entropy"):
        out[fam] = {
            "uniform": dict(zip(("tu", "au", "eu"), measure(fam, uniform).tolist())),
            "vertex_mixture": dict(zip(("tu", "au", "eu"), measure(fam, vertices).tolist())),
        }
    return out
