import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from growthdecay.errors import InvalidParameterError, YearOutOfRegimeError
from growthdecay.model import (
    CompositeModel,
    CompositeParams,
    LinearDriftModel,
    LogisticDriftParams,
    LogisticModel,
    LogisticParams,
    TrendModel,
    TrendParams,
    eval_composite,
    eval_linear_drift,
    eval_logistic,
    eval_logistic_drift,
    eval_logistic_drift_linear,
    eval_logistic_drift_ratio,
    eval_series,
    eval_sine,
    eval_trend,
)
from growthdecay.segment import RegimeSpec

# reference values computed with mpmath at 30 digits
EXP_078 = 2.18147226549820111662884954254
LOGISTIC_1990 = 0.999993855825397785282174426178
LOGISTIC_DRIFT_40 = 1.49999999845413478476421447312
REGIME1_WAVE = 192670.286095846743069486406004
REGIME1_TOTAL = 223145.286095846743069486406004

INCOME_1 = CompositeParams.from_full_period(0.11e6, 0.059, 38, 0.265e4)

finite_t = st.floats(-200, 200, allow_nan=False)


class TestTrend:
    def test_origin(self):
        assert eval_trend(TrendParams(1, 0.078), 0) == 1

    def test_ten_years(self):
        assert eval_trend(TrendParams(1, 0.078), 10) == pytest.approx(EXP_078, rel=1e-14)

    @given(finite_t)
    def test_strictly_positive(self, t):
        assert eval_trend(TrendParams(3.0, 0.078), t) > 0


class TestSine:
    @pytest.mark.parametrize("t,expected", [(0, 0.0), (19, 1.0), (38, 0.0)])
    def test_quarter_points(self, t, expected):
        assert eval_sine(38, 0, t) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("T", [0, -3])
    def test_rejects_nonpositive_semi_period(self, T):
        with pytest.raises(InvalidParameterError):
            eval_sine(T, 0, 1.0)

    @given(st.floats(1, 100), st.floats(-math.pi, math.pi), finite_t)
    def test_periodic_in_2T(self, T, phi, t):
        assert abs(eval_sine(T, phi, t) - eval_sine(T, phi, t + 2 * T)) < 1e-9

    @given(st.floats(1, 100), finite_t)
    def test_bounded(self, T, t):
        assert -1 <= eval_sine(T, 0.3, t) <= 1


class TestLogistic:
    def test_midpoint(self):
        assert eval_logistic(LogisticParams(2, 0.3, 1950), 1950) == 1

    def test_far_right(self):
        p = LogisticParams(1, 0.3, 1950)
        assert eval_logistic(p, 1990) == pytest.approx(LOGISTIC_1990, rel=1e-14)
        assert eval_logistic(p, 1e6) == pytest.approx(1.0)

    def test_monotone(self):
        p = LogisticParams(1, 0.3, 1950)
        assert eval_logistic(p, 1960) > eval_logistic(p, 1940)

    def test_decay_for_negative_rate(self):
        p = LogisticParams(1, -0.3, 1950)
        assert eval_logistic(p, 1960) < eval_logistic(p, 1940)

    @given(st.floats(1, 1e7), st.floats(0.01, 2), st.floats(1900, 2000), st.floats(0, 50))
    def test_symmetry(self, y_max, rate, t_mid, d):
        p = LogisticParams(y_max, rate, t_mid)
        total = eval_logistic(p, t_mid + d) + eval_logistic(p, t_mid - d)
        assert abs(total - y_max) <= 1e-9 * y_max

    @given(st.floats(0.01, 1), st.floats(1900, 2000), st.floats(-30, 30), st.floats(0.1, 5))
    def test_strictly_increasing(self, rate, t_mid, t, dt):
        p = LogisticParams(10.0, rate, t_mid)
        assert eval_logistic(p, t_mid + t + dt) > eval_logistic(p, t_mid + t)


class TestLogisticDrift:
    def test_origin(self):
        assert eval_logistic_drift(LogisticDriftParams(1, 1, 0.1), 0) == 0.5

    def test_saturation(self):
        p = LogisticDriftParams(3, 2, 0.5)
        assert eval_logistic_drift(p, 40) == pytest.approx(LOGISTIC_DRIFT_40, rel=1e-14)
        assert eval_logistic_drift(p, 1e4) == pytest.approx(1.5)

    def test_derived_constants(self):
        p = LogisticDriftParams(3, 2, 0.5)
        assert (p.B3, p.B4) == (1.5, 0.5)

    @given(st.floats(0.1, 1e6), st.floats(0.01, 100), st.floats(-0.5, 0.5), st.floats(-80, 80))
    def test_two_forms_agree(self, B1, B2, beta, t):
        p = LogisticDriftParams(B1, B2, beta)
        a, b = eval_logistic_drift(p, t), eval_logistic_drift_ratio(p, t)
        assert abs(a - b) <= 1e-10 * abs(b)

    def test_linearization_is_first_order(self):
        p = LogisticDriftParams(2.0, 0.5, 0.3)
        err = [abs(eval_logistic_drift(p, t) - eval_logistic_drift_linear(p, t)) for t in (0.01, 0.005)]
        assert err[0] < 1e-4
        # second-order remainder: halving t quarters the error
        assert err[0] / err[1] == pytest.approx(4.0, rel=0.01)


class TestLinearDrift:
    def test_values(self):
        assert eval_linear_drift(0, 0.265e4, 0) == 0
        assert eval_linear_drift(0, 0.265e4, 20) == 53000
        assert eval_linear_drift(5, 0, 100) == 5


class TestComposite:
    def test_vanishes_at_both_origins(self):
        p = CompositeParams(A=7e4, alpha=0.05, T=23, b=1234.0)
        assert eval_composite(p, 0, 0) == 0

    def test_income_regime_1_point(self):
        got = eval_composite(INCOME_1, 9.5, 11.5)
        assert INCOME_1.T == 19
        assert got - eval_linear_drift(0, 0.265e4, 11.5) == pytest.approx(REGIME1_WAVE, rel=1e-13)
        assert got == pytest.approx(REGIME1_TOTAL, rel=1e-13)

    def test_rejects_nonpositive_T(self):
        with pytest.raises(InvalidParameterError):
            eval_composite(CompositeParams(1, 0, 0), 1, 1)

    @given(st.floats(0, 1e5), st.floats(0, 1e4), st.floats(0, 80), st.floats(0, 80))
    def test_zero_amplitude_is_pure_drift(self, B, b, tr, tg):
        p = CompositeParams(A=0.0, alpha=0.06, T=19, B=B, b=b)
        assert eval_composite(p, tr, tg) == eval_linear_drift(B, b, tg)

    @given(st.floats(1, 1e6), st.floats(0, 0.2), st.floats(5, 60))
    def test_crest_matches_trend(self, A, alpha, T):
        # phi = pi/2 puts the crest at t_regime = 2T, where sin = 1
        p = CompositeParams(A=A, alpha=alpha, T=T, phi=math.pi / 2)
        t = 2 * T
        assert eval_composite(p, t, 0) == pytest.approx(eval_trend(TrendParams(A, alpha), t), rel=1e-12)

    def test_clocks_are_independent(self):
        p = CompositeParams(A=1e5, alpha=0.05, T=20, b=1000.0)
        shift = eval_composite(p, 5, 30) - eval_composite(p, 5, 10)
        assert shift == pytest.approx(20 * 1000.0)


class TestSeries:
    regime = RegimeSpec(1, 1922, 1940, 19.0)

    def test_empty(self):
        assert len(eval_series(INCOME_1, self.regime, [])) == 0

    def test_start_year_is_zero(self):
        p = CompositeParams(A=1e5, alpha=0.05, T=19)
        s = eval_series(p, self.regime, [1922], origin=1922)
        assert s.values.tolist() == [0.0]

    def test_pointwise(self):
        s = eval_series(INCOME_1, self.regime, range(1922, 1941))
        assert len(s) == 19
        assert s.unit == "BEF"
        for year, value in s:
            assert value == eval_composite(INCOME_1, year - 1922, year - 1920)

    def test_year_outside_regime(self):
        with pytest.raises(YearOutOfRegimeError):
            eval_series(INCOME_1, self.regime, [1941])


class TestModels:
    def test_composite_predict_matches_evaluator(self):
        m = CompositeModel(1922)
        years = np.arange(1922, 1941)
        pred = m.predict(m.pack(INCOME_1), years)
        np.testing.assert_array_equal(pred, eval_composite(INCOME_1, years - 1922, years - 1920))

    def test_batched_predict(self):
        m = CompositeModel(1922)
        theta = np.vstack([m.pack(INCOME_1), m.pack(INCOME_1) * 1.1])
        out = m.predict(theta, np.arange(1922, 1930))
        assert out.shape == (2, 8)
        np.testing.assert_allclose(out[0], m.predict(theta[0], np.arange(1922, 1930)))

    def test_default_freezes_phase_and_offset(self):
        assert CompositeModel(1922).free == ("A", "alpha", "T", "b")
        assert CompositeModel(1922, fixed={}).free == ("A", "alpha", "T", "phi", "B", "b")

    def test_freeze_and_roundtrip(self):
        m = CompositeModel(1922).freeze(T=19.0)
        assert m.free == ("A", "alpha", "b")
        assert m.unpack(m.pack(INCOME_1)) == INCOME_1

    def test_unknown_fixed_name(self):
        with pytest.raises(InvalidParameterError):
            CompositeModel(1922, fixed={"gamma": 1})

    def test_other_models(self):
        years = np.array([1920.0, 1930.0])
        assert TrendModel().predict([2.0, 0.1], years)[1] == pytest.approx(2 * math.e)
        assert LinearDriftModel().predict([1.0, 2.0], years).tolist() == [1.0, 21.0]
        assert LogisticModel().predict([2.0, 0.3, 1930.0], years)[1] == 1.0
