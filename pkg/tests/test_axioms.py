import numpy as np
import pytest

from varuq.axioms import (AXIOMS, AxiomReport, GeneratorConfig, check_axiom, check_beta_maximizer,
                          check_corollary, check_proposition_mps_entropy, measure, probe_a2)
from varuq import AtomMixture, dirac, dirac_mixture
from varuq.transforms import SpreadSpec, mean_preserving_spread

SMALL = GeneratorConfig(cases=200, seed=11)


class TestVarianceFamily:
    @pytest.mark.parametrize("axiom", ["A0", "A1", "A4", "A5", "A6", "A7"])
    def test_holds(self, axiom):
        r = check_axiom(axiom, "variance", SMALL)
        assert r.violations == 0, r.to_line()
        assert r.verdict == "PASS"

    def test_a3_epistemic_part_strict(self):
        r = check_axiom("A3", "variance", SMALL)
        assert r.components["eu"] == 0

    def test_a3_total_part_is_flat(self):
        # total variance only sees the mean, which a mean-preserving spread keeps
        rng = np.random.default_rng(0)
        for case in range(100):
            q = AtomMixture(rng.dirichlet(np.ones(4), 3))
            q2 = mean_preserving_spread(q, SpreadSpec(0.8, case))
            assert abs(measure("variance", q2)[0] - measure("variance", q)[0]) <= 1e-12

    def test_a6_exact(self):
        assert measure("variance", dirac_mixture([0.2, 0.3, 0.5]))[1] == 0.0

    def test_a7_equality(self):
        q = AtomMixture(np.random.default_rng(2).dirichlet(np.ones(5), 6))
        w = np.arange(1.0, 6.0)
        parts = measure("variance", q, w, [0, 3]) + measure("variance", q, w, [1, 2, 4])
        np.testing.assert_allclose(parts, measure("variance", q, w), atol=1e-12)


class TestEntropyFamily:
    def test_a5_fails_on_uniform_pair(self):
        r = check_axiom("A5", "entropy", GeneratorConfig(cases=1))
        assert r.violations >= 1 and r.verdict == "EXPECTED-FAIL" and r.ok

    def test_a4_is_reported(self):
        assert check_axiom("A4", "entropy", SMALL).verdict == "REPORT"

    @pytest.mark.parametrize("axiom", ["A0", "A1", "A3", "A6", "A7"])
    def test_holds(self, axiom):
        assert check_axiom(axiom, "entropy", SMALL).violations == 0

    def test_proposition(self):
        r = check_proposition_mps_entropy(SMALL)
        assert r.axiom == "P1" and r.violations == 0

    def test_dirac_spread_strict(self):
        q = dirac([0.3, 0.3, 0.4])
        q2 = mean_preserving_spread(q, SpreadSpec(0.5, 1))
        assert measure("entropy", q)[2] == 0.0 and measure("entropy", q2)[2] > 0

    def test_zero_epsilon_is_skipped(self):
        r = check_proposition_mps_entropy(GeneratorConfig(cases=20, spread_epsilon=0.0))
        assert r.skipped == 20 and r.cases == 0


class TestLemmaAndCorollary:
    def test_beta_maximizer(self):
        r = check_beta_maximizer(n=30)
        assert r.violations == 0 and r.worst_margin > -1e-4

    def test_corollary(self):
        assert check_corollary(n=50).violations == 0


class TestReports:
    def test_reproducible(self):
        a = check_axiom("A3", "entropy", SMALL)
        b = check_axiom("A3", "entropy", SMALL)
        assert a.to_line() == b.to_line()

    def test_seed_changes_cases(self):
        a = check_axiom("A4", "variance", GeneratorConfig(cases=50, seed=1))
        b = check_axiom("A4", "variance", GeneratorConfig(cases=50, seed=2))
        assert a.worst_margin != b.worst_margin

    def test_line_format(self):
        line = AxiomReport("A0", "variance", 3, 0, 0.5, 7, components={"tu": 0}).to_line()
        assert line.startswith("axiom=A0 family=variance cases=3 violations=0")
        assert "verdict=PASS" in line and "components=tu:0" in line

    def test_unknowns(self):
        with pytest.raises(ValueError):
            check_axiom("A2")
        with pytest.raises(ValueError):
            check_axiom("A0", "brier")

    def test_axiom_list(self):
        assert "A2" not in AXIOMS and len(AXIOMS) == 7


def test_a2_probe_uniform_is_not_maximal():
    probe = probe_a2(seed=0)
    for fam in ("variance", "entropy"):
        assert probe[fam]["vertex_mixture"]["eu"] > probe[fam]["uniform"]["eu"]
        assert probe[fam]["vertex_mixture"]["tu"] == pytest.approx(probe[fam]["uniform"]["tu"], abs=1e-3)
