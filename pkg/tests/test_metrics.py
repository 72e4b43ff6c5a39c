import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varuq.harness.metrics import (MEASURES, arc, auroc, correctness, default_grid, histogram_split, n_rejected,
                                   ood_report, parse_grid, score, score_all)
from varuq.harness.records import make_record

from . import naive


def _records(rng, n=60, K=3, M=4):
    return [make_record(f"r{i}", int(rng.integers(K)), rng.dirichlet(np.full(K, 0.7), M)) for i in range(n)]


class TestScore:
    def test_identical_members(self):
        rec = make_record("a", 0, [[0.2, 0.3, 0.5]] * 4)
        s = score_all([rec])
        assert s["eu_var"][0] == 0 and s["eu_ent"][0] == 0

    def test_opposite_vertices(self):
        rec = make_record("a", 0, [[1, 0], [0, 1]])
        s = score_all([rec])
        assert (s["tu_var"][0], s["eu_var"][0], s["au_var"][0]) == (0.5, 0.5, 0.0)
        assert s["eu_ent"][0] == pytest.approx(1.0, abs=1e-15)

    def test_score_returns_labelwise(self, rng):
        recs = _records(rng, 5)
        vals, (tu, au, eu) = score(recs, "eu_var")
        np.testing.assert_allclose(vals, eu.sum(axis=1), atol=1e-15)
        assert tu.shape == (5, 3)

    def test_weights(self, rng):
        recs = _records(rng, 5)
        plain = score_all(recs)["eu_var"]
        _, (_, _, eu) = score(recs, "eu_var")
        np.testing.assert_allclose(score_all(recs, [1, 1, 2])["eu_var"], plain + eu[:, 2], atol=1e-15)

    def test_unknown_measure(self, rng):
        with pytest.raises(ValueError):
            score(_records(rng, 2), "mi")

    def test_additive_per_instance(self, rng):
        s = score_all(_records(rng))
        np.testing.assert_allclose(s["tu_var"], s["au_var"] + s["eu_var"], atol=1e-12)
        np.testing.assert_allclose(s["tu_ent"], s["au_ent"] + s["eu_ent"], atol=1e-10)

    def test_prediction_tie_picks_lowest_index(self):
        s = score_all([make_record("a", 1, [[0.5, 0.5]])])
        assert s.predictions[0] == 0
        assert not correctness([make_record("a", 1, [[0.5, 0.5]])])[0]

    def test_all_measures_present(self, rng):
        assert set(score_all(_records(rng, 3)).values) == set(MEASURES)


class TestArc:
    def test_constant_scores(self, rng):
        recs = _records(rng)
        c = arc(recs, np.zeros(len(recs)), [0, 0.5])
        assert c.accuracies[0] == pytest.approx(np.mean(correctness(recs)))
        ok = correctness(recs)
        # ties reject earliest records first, so the kept half is the second half
        assert c.accuracies[1] == pytest.approx(np.mean(ok[30:]))

    def test_oracle_scores(self, rng):
        recs = _records(rng, 80)
        ok = correctness(recs)
        err = 1 - ok.mean()
        c = arc(recs, 1.0 - ok, [0.0, err])
        assert c.accuracies[0] == pytest.approx(ok.mean())
        assert c.accuracies[1] == 1.0

    def test_matches_brute_force(self, rng):
        recs = _records(rng, 37)
        ok = correctness(recs)
        scores = rng.integers(0, 5, len(recs)).astype(float)
        c = arc(recs, scores)
        for r, a in zip(c.fractions, c.accuracies):
            assert a == pytest.approx(naive.arc_accuracy(list(scores), list(ok), r), abs=1e-15, nan_ok=True)

    def test_full_rejection_is_nan(self, rng):
        recs = _records(rng, 4)
        c = arc(recs, np.arange(4.0), [0.0, 1.0])
        assert math.isnan(c.accuracies[1]) and c.kept[1] == 0

    def test_grid_validation(self, rng):
        recs = _records(rng, 4)
        with pytest.raises(ValueError):
            arc(recs, np.zeros(4), [0.5, 0.2])
        with pytest.raises(ValueError):
            arc(recs, np.zeros(4), [1.5])

    def test_rejection_count(self):
        assert n_rejected(0.07, 100) == 7
        assert n_rejected(0.5, 3) == 2
        assert n_rejected(0.0, 10) == 0

    def test_grids(self):
        g = default_grid()
        assert len(g) == 100 and g[0] == 0 and g[-1] == 0.99
        np.testing.assert_array_equal(parse_grid("0:0.99:0.01"), g)
        np.testing.assert_array_equal(parse_grid("0,0.5"), [0, 0.5])

    def test_permutation_invariant_with_distinct_scores(self, rng):
        recs = _records(rng, 50)
        scores = rng.random(50)
        perm = rng.permutation(50)
        a = arc(recs, scores)
        b = arc([recs[i] for i in perm], scores[perm])
        np.testing.assert_array_equal(a.accuracies, b.accuracies)


class TestAuroc:
    def test_perfect(self):
        assert auroc([0, 0], [1, 1]) == 1.0

    def test_identical(self):
        assert auroc([1, 2, 2, 5], [5, 2, 1, 2]) == 0.5

    def test_worked_example(self):
        assert auroc([1, 2, 3], [2, 3, 4]) == naive.auroc_pairs([1, 2, 3], [2, 3, 4]) == 7 / 9

    def test_empty(self):
        with pytest.raises(ValueError):
            auroc([], [1])

    @given(st.lists(st.integers(-3, 3), min_size=1, max_size=20), st.lists(st.integers(-3, 3), min_size=1, max_size=20))
    def test_matches_pair_counting(self, a, b):
        assert auroc(a, b) == naive.auroc_pairs(a, b)

    @given(st.lists(st.integers(-50, 50), min_size=1, max_size=20),
           st.lists(st.integers(-50, 50), min_size=1, max_size=20))
    def test_monotone_transform_invariant(self, a, b):
        # exact in floating point for these integers, so strictly increasing
        f = lambda x: np.asarray(x, float) ** 3 + 5 * np.asarray(x, float)
        assert auroc(f(a), f(b)) == auroc(a, b)

    def test_report(self):
        rep = ood_report([0.1, 0.2, 0.3], [0.5, 0.6])
        assert rep.auroc == 1.0 and rep.id_summary == (0.1, 0.2, 0.3) and rep.ood_summary[1] == 0.55


class TestHistograms:
    def test_all_correct(self):
        recs = [make_record(f"r{i}", 0, [[0.9, 0.1]]) for i in range(10)]
        h = histogram_split(recs, np.linspace(0, 1, 10))
        assert h.incorrect.sum() == 0 and h.correct.sum() == 10 and len(h.edges) == 31

    def test_counts_sum(self, rng):
        recs = _records(rng)
        h = histogram_split(recs, rng.random(len(recs)), bins=7)
        assert h.correct.sum() + h.incorrect.sum() == len(recs)

    def test_oracle_scores_top_bin(self, rng):
        recs = _records(rng)
        ok = correctness(recs)
        h = histogram_split(recs, 1.0 - ok)
        assert h.incorrect[-1] == (~ok).sum() and h.incorrect[:-1].sum() == 0

    def test_bins_validated(self, rng):
        with pytest.raises(ValueError):
            histogram_split(_records(rng, 3), [0, 1, 2], bins=1)
