"""Fit, segment and generate growth-decay financial time series.

The model is an exponentially modulated sinusoid on a regime-local clock
plus a linear population drift on a global 1920 clock, fitted regime by
regime with a damped Gauss-Newton (Levenberg-Marquardt) solver.
"""

from .errors import GrowthDecayError
from .model import (
    ORIGIN_YEAR,
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
    eval_series,
    eval_sine,
    eval_trend,
)
from .optimize import (
    FitConfig,
    FitResult,
    distinct_solutions,
    fit_loglinear_trend,
    integer_polish,
    jacobian_fd,
    lm_fit,
    multi_start_fit,
    residuals,
)
from .segment import (
    Partition,
    RegimeSpec,
    boundary_search,
    paper_partitions,
    progression_check,
    semiperiod_sum_check,
)
from .series import TimeSeries, load_csv, save_csv
from .synth import NoiseSpec, SpikeEvent, generate, generate_paper_expenses, generate_paper_income

__version__ = "0.1.0"
