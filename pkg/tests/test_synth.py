import numpy as np
import pytest

from growthdecay.errors import (
    InvalidParameterError,
    ParamsPartitionMismatchError,
    YearNotCoveredError,
)
from growthdecay.model import CompositeModel, eval_composite
from growthdecay.segment import paper_partitions
from growthdecay.synth import (
    NoiseSpec,
    SpikeEvent,
    default_spikes,
    expenses_params,
    generate,
    generate_paper_expenses,
    generate_paper_income,
    income_params,
    model_values,
)

INCOME, EXPENSES, VISUAL = paper_partitions()


class TestTables:
    def test_income_regime_3(self):
        p = income_params()[2]
        assert (p.A, p.alpha, 2 * p.T, p.b) == (0.09e6, 0.059, 74, 1.0725e4)

    def test_expenses_fit_T(self):
        p = expenses_params("T")
        assert (p[0].A, p[0].alpha) == (0.09e6, 0.062)
        assert p[0].b == pytest.approx(10**3.5)
        assert [2 * q.T for q in p] == [38, 54, 68]

    def test_unknown_label(self):
        with pytest.raises(InvalidParameterError):
            expenses_params("Q")


class TestGenerate:
    def test_noiseless_matches_model(self):
        s = generate_paper_income()
        for year, value in s:
            regime = INCOME.regime_for(year)
            p = income_params()[regime.index - 1]
            expected = eval_composite(p, year - regime.start_year, year - 1920)
            assert value == max(expected, 1.0)

    def test_expenses_origin_is_floored(self):
        s = generate_paper_expenses("R")
        assert s.years[0] == 1920
        assert model_values(EXPENSES, expenses_params("R"), [1920])[1][0] == 0.0
        assert s.values[0] == 1.0

    def test_strictly_positive(self):
        for label in "RSTU":
            assert np.all(generate_paper_expenses(label).values > 0)
        assert np.all(generate_paper_income(NoiseSpec.lognormal(0.3, 1)).values > 0)

    def test_paper_expenses_have_no_negative_model_values(self):
        # apart from the zero at the origin, every model value is above the floor
        for label in "RSTU":
            _, raw = model_values(EXPENSES, expenses_params(label), range(1921, 2001))
            assert np.all(raw > 1.0)

    def test_seed_determinism(self):
        a = generate_paper_income(NoiseSpec.lognormal(0.15, 7))
        b = generate_paper_income(NoiseSpec.lognormal(0.15, 7))
        c = generate_paper_income(NoiseSpec.lognormal(0.15, 8))
        assert a == b and a != c

    def test_lognormal_scatter(self):
        clean = generate_paper_income()
        noisy = generate_paper_income(NoiseSpec.lognormal(0.15, 0))
        log_resid = np.log(noisy.values / clean.values)
        assert len(log_resid) >= 75
        assert 0.10 <= np.std(log_resid, ddof=1) <= 0.20

    def test_noise_median_is_model(self):
        clean = generate_paper_income()
        ratios = []
        for seed in range(200):
            ratios.append(generate_paper_income(NoiseSpec.lognormal(0.2, seed)).values / clean.values)
        med = np.median(np.array(ratios), axis=0)
        np.testing.assert_allclose(med, 1.0, atol=0.06)

    def test_spikes_only_touch_their_year(self):
        clean = generate_paper_income()
        spiked = generate_paper_income(spikes=default_spikes())
        changed = clean.years[clean.values != spiked.values].tolist()
        assert changed == [1986, 1987]
        k = clean.years.tolist().index(1986)
        assert spiked.values[k] == 3.0 * clean.values[k]

    def test_duplicate_spike(self):
        with pytest.raises(InvalidParameterError):
            generate_paper_income(spikes=[SpikeEvent(1990, 2.0), SpikeEvent(1990, 3.0)])

    def test_spike_multiplier_above_one(self):
        with pytest.raises(InvalidParameterError):
            SpikeEvent(1990, 1.0)

    def test_year_not_covered(self):
        with pytest.raises(YearNotCoveredError):
            generate(INCOME, income_params(), years=[1921])

    def test_params_mismatch(self):
        with pytest.raises(ParamsPartitionMismatchError):
            generate(INCOME, income_params()[:2])

    def test_visual_partition_shared_year(self):
        params = income_params()
        s = generate(VISUAL, params, years=range(1920, 2005))
        k = s.years.tolist().index(1939)
        # 1939 belongs to regime 2, whose oscillation starts there
        assert s.values[k] == pytest.approx(params[1].b * 19)

    def test_noise_kind_validated(self):
        with pytest.raises(InvalidParameterError):
            NoiseSpec("gaussian", 0.1)
        with pytest.raises(InvalidParameterError):
            NoiseSpec.lognormal(-0.1)

    def test_round_trip_consumable(self):
        s = generate_paper_income()
        r = s.window(1941, 1965)
        m = CompositeModel(1941)
        pred = m.predict(m.pack(income_params()[1]), r.years)
        np.testing.assert_array_equal(pred, r.values)
