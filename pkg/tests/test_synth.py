import numpy as np
import pytest

from varuq import DivergenceError
from varuq.harness.metrics import auroc, correctness, score_all
from varuq.harness.records import dumps_jsonl
from varuq.harness.synth import SyntheticConfig, nearest_mean_accuracy, synth_run

SMALL = SyntheticConfig(n_train=80, n_test=80, n_ood=120, steps=150)


@pytest.fixture(scope="module")
def run():
    return synth_run(SMALL)


class TestSynth:
    def test_shapes(self, run):
        assert len(run.train) == 240 and len(run.test) == 240 and len(run.ood) == 120
        assert run.test[0].M == 5 and run.test[0].K == 3
        assert {r.split for r in run.ood} == {"ood"}

    def test_accuracy_near_oracle(self, run):
        acc = correctness(run.test).mean()
        assert nearest_mean_accuracy(SMALL) >= 0.95
        assert acc >= 0.95

    def test_ood_has_more_epistemic(self, run):
        s_id, s_ood = score_all(run.test), score_all(run.ood)
        assert s_ood["eu_var"].mean() > s_id["eu_var"].mean()
        assert auroc(s_id["eu_var"], s_ood["eu_var"]) > 0.9

    def test_ood_far_from_classes(self):
        cfg = SyntheticConfig()
        d = np.linalg.norm(cfg.class_means() - cfg.ood_center(), axis=1)
        assert d.min() >= 10 * cfg.sigma
        m = cfg.class_means()
        assert min(np.linalg.norm(m[i] - m[j]) for i in range(3) for j in range(i)) >= 6 * cfg.sigma

    def test_single_member_has_no_epistemic(self):
        r = synth_run(SyntheticConfig(n_train=30, n_test=10, n_ood=10, steps=50, members=1))
        assert np.all(score_all(r.test)["eu_var"] == 0) and np.all(score_all(r.ood)["eu_ent"] == 0)

    def test_deterministic(self):
        cfg = SyntheticConfig(n_train=30, n_test=10, n_ood=10, steps=50, seed=4)
        assert dumps_jsonl(synth_run(cfg).test) == dumps_jsonl(synth_run(cfg).test)

    def test_seed_matters(self):
        a = synth_run(SyntheticConfig(n_train=30, n_test=10, n_ood=10, steps=50, seed=1))
        b = synth_run(SyntheticConfig(n_train=30, n_test=10, n_ood=10, steps=50, seed=2))
        assert dumps_jsonl(a.test) != dumps_jsonl(b.test)

    def test_divergence_names_learning_rate(self):
        with pytest.raises(DivergenceError, match="1000"):
            synth_run(SyntheticConfig(n_train=30, n_test=10, n_ood=10, steps=50, learning_rate=1000.0))

    @pytest.mark.parametrize("kw", [{"n_classes": 1}, {"members": 0}, {"bootstrap_fraction": 0.0},
                                    {"learning_rate": -1.0}])
    def test_config_validation(self, kw):
        with pytest.raises(ValueError):
            SyntheticConfig(**kw)
