import numpy as np
import pytest

from varuq.figure1 import COLUMNS, figure1_table, format_table, table_csv


@pytest.fixture(scope="module")
def rows():
    return {r.panel: r for r in figure1_table(n=5000, seed=0)}


class TestFigure1:
    def test_uniform_unit_interval(self, rows):
        a = rows["a"]
        assert a.mean("au_var/norm") == pytest.approx(2 / 3, abs=0.01)
        assert a.mean("eu_var/norm") == pytest.approx(1 / 3, abs=0.01)

    def test_width_04_panels(self, rows):
        d, e = rows["d"], rows["e"]
        np.testing.assert_allclose(d.values["eu_var/norm"], e.values["eu_var/norm"], rtol=0, atol=1e-12)
        assert abs(d.mean("eu_ent") - e.mean("eu_ent")) > 10 * max(d.se("eu_ent"), e.se("eu_ent"))

    def test_wider_uniform_has_more_epistemic(self, rows):
        assert rows["a"].mean("eu_var/norm") > rows["d"].mean("eu_var/norm")

    def test_vertex_mixture_panel(self, rows):
        f = rows["f"]
        assert f.mean("au_var/norm") == 0.0 and f.mean("eu_var/norm") == 1.0 and f.se("eu_var/norm") == 0.0

    def test_beta_panel(self, rows):
        # raw eu per label 16/1100, two labels, normalized by 1/2
        assert rows["c"].mean("eu_var/norm") == pytest.approx(4 * 16 / 1100, abs=3e-3)

    def test_formatting(self, rows):
        ordered = [rows[p] for p in "abcdef"]
        text = format_table(ordered)
        assert len(text.splitlines()) == 7
        csv = table_csv(ordered).splitlines()
        assert csv[0].count(",") == 1 + 2 * len(COLUMNS)
        assert csv[6].startswith("f,")

    def test_deterministic(self):
        a = table_csv(figure1_table(n=500, seed=3, n_streams=3))
        assert a == table_csv(figure1_table(n=500, seed=3, n_streams=3))
