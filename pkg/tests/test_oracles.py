import numpy as np
import pytest

from varuq import AtomMixture, labelwise
from varuq.oracles import (SamplerSpec, dirichlet_moments, evaluate_measure, grid_maximize, mc_estimate, sample_q,
                           sample_theta, stream_seeds)


class TestSamplers:
    def test_dirac_mix_is_exact(self):
        q = sample_q(SamplerSpec("dirac_mix", (0.5, 0.5)))
        assert len(q) == 2
        np.testing.assert_array_equal(q.weights, [0.5, 0.5])

    def test_uniform_epistemic_variance(self):
        q = sample_q(SamplerSpec("uniform_interval", (0.0, 1.0), n=200_000, seed=1))
        np.testing.assert_allclose(labelwise(q).eu, 1 / 12, atol=1e-3)

    def test_width_04_uniforms_share_epistemic_variance(self):
        a = sample_q(SamplerSpec("uniform_interval", (0.3, 0.7), seed=5))
        b = sample_q(SamplerSpec("uniform_interval", (0.6, 1.0), seed=5))
        np.testing.assert_allclose(labelwise(a).eu, labelwise(b).eu, atol=1e-12)

    @pytest.mark.parametrize("c", [0.1, 0.25, -0.2])
    def test_common_random_number_equivariance(self, c):
        a = sample_q(SamplerSpec("uniform_interval", (0.3, 0.7), n=500, seed=9))
        b = sample_q(SamplerSpec("uniform_interval", (0.3 + c, 0.7 + c), n=500, seed=9))
        np.testing.assert_allclose(b.atoms, a.atoms + [c, -c], atol=1e-12)

    def test_truncated_gaussian_in_range(self):
        theta = sample_theta(SamplerSpec("truncated_gaussian", (0.9, 0.2), n=5000))
        assert theta.min() >= 0 and theta.max() <= 1

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            SamplerSpec("cauchy", (0, 1))

    def test_stream_seeds_distinct_and_stable(self):
        s = stream_seeds(0, 10)
        assert len(set(s)) == 10 and s == stream_seeds(0, 10)


class TestDirichletMoments:
    def test_flat(self):
        tu, au, eu = dirichlet_moments([1, 1])
        np.testing.assert_allclose([tu, au, eu], [[0.25] * 2, [1 / 6] * 2, [1 / 12] * 2], atol=1e-15)

    def test_82(self):
        tu, au, eu = dirichlet_moments([8, 2])
        assert tu[0] == pytest.approx(0.16) and au[0] == pytest.approx(16 / 110) and eu[0] == pytest.approx(16 / 1100)

    def test_82_monte_carlo(self):
        ests = [labelwise(AtomMixture(np.random.default_rng(s).dirichlet([8, 2], 100_000))) for s in range(10)]
        target = dirichlet_moments([8, 2])
        for part, exact in zip(("tu", "au", "eu"), target):
            vals = np.array([getattr(e, part)[0] for e in ests])
            se = vals.std(ddof=1) / np.sqrt(len(vals))
            assert abs(vals.mean() - exact[0]) <= 3 * se + 1e-15

    def test_concentration_limit(self):
        assert np.all(dirichlet_moments([1e6] * 3)[2] < 1e-5)

    def test_invalid_alpha(self):
        with pytest.raises(ValueError):
            dirichlet_moments([1, 0])

    def test_error_shrinks_with_n(self):
        exact = dirichlet_moments([8, 2])[2][0]
        medians = []
        for n in (1_000, 10_000, 100_000):
            errs = [abs(evaluate_measure("eu_var@0", sample_q(SamplerSpec("beta", (8, 2), n, s))) - exact)
                    for s in range(10)]
            medians.append(np.median(errs))
        assert medians[0] > medians[1] > medians[2]


class TestMCEstimate:
    def test_beta_epistemic(self):
        est = mc_estimate("eu_var@0", SamplerSpec("beta", (8, 2), n=100_000))
        assert est.within(16 / 1100)

    def test_dirac_mix_aleatoric_entropy(self):
        assert mc_estimate("au_ent", SamplerSpec("dirac_mix", (0.5, 0.5))).mean == 0.0

    def test_uniform_total_entropy(self):
        est = mc_estimate("tu_ent", SamplerSpec("uniform_interval", (0, 1), n=10_000))
        assert est.within(1.0)

    def test_measure_id_validation(self):
        q = sample_q(SamplerSpec("dirac_mix", (0.5, 0.5)))
        for bad in ("xu_var", "eu_ent@0", "eu_var@5"):
            with pytest.raises(ValueError):
                evaluate_measure(bad, q)


class TestGridMaximize:
    def test_unit_weights(self):
        np.testing.assert_allclose(grid_maximize([1, 1, 1]).probs, 1 / 3, atol=1e-6)

    def test_112(self):
        np.testing.assert_allclose(grid_maximize([1, 1, 2]).probs, [0.3, 0.3, 0.4], atol=1e-4)

    def test_binary(self):
        np.testing.assert_allclose(grid_maximize([3, 0.5]).probs, [0.5, 0.5], atol=1e-12)

    def test_limits(self):
        with pytest.raises(ValueError):
            grid_maximize(np.ones(6))
        with pytest.raises(ValueError):
            grid_maximize([1, 1, 1], resolution=10)
