"""Synthetic income and expense series built from the published fit tables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidParameterError,
    ParamsPartitionMismatchError,
    YearNotCoveredError,
)
from .model import ORIGIN_YEAR, CompositeParams, eval_composite, eval_trend
from .segment import paper_partitions
from .series import TimeSeries

FLOOR_BEF = 1.0
DEFAULT_SIGMA = 0.15

# the expenses table prints two slopes as "x 10^3.5"; taken literally
_TEN_TO_3_5 = 10.0**3.5

# Table 2: (A, alpha, full period 2T, b) for income regimes 1..3
INCOME_TABLE = (
    (0.11e6, 0.059, 38.0, 0.265e4),
    (0.11e6, 0.059, 56.0, 0.615e4),
    (0.09e6, 0.059, 74.0, 1.0725e4),
)

# Table 1: (A, alpha, b) per fit label; full periods 38, 54, 68 from its caption
EXPENSES_TABLE = {
    "R": (0.11e6, 0.056, 0.25e4),
    "S": (0.11e6, 0.059, 0.625e4),
    "T": (0.09e6, 0.062, 1.00 * _TEN_TO_3_5),
    "U": (0.09e6, 0.053, 1.375 * _TEN_TO_3_5),
}
EXPENSES_FULL_PERIODS = (38.0, 54.0, 68.0)


@dataclass(frozen=True)
class NoiseSpec:
    kind: str = "none"  # "none" | "multiplicative-lognormal"
    sigma: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "multiplicative-lognormal"):
            raise InvalidParameterError(f"unknown noise kind {self.kind!r}")
        if self.sigma < 0:
            raise InvalidParameterError("sigma must be >= 0")

    @classmethod
    def lognormal(cls, sigma, rng_seed=0):
        return cls("multiplicative-lognormal", sigma, rng_seed)


@dataclass(frozen=True)
class SpikeEvent:
    year: int
    multiplier: float

    def __post_init__(self):
        if not self.multiplier > 1:
            raise InvalidParameterError("spike multiplier must be > 1")


def default_spikes():
    """Two consecutive windfall years near the third-regime peak (illustration only)."""
    return [SpikeEvent(1986, 3.0), SpikeEvent(1987, 3.0)]


def income_params():
    return [CompositeParams.from_full_period(A, alpha, two_T, b) for A, alpha, two_T, b in INCOME_TABLE]


def expenses_params(fit_label):
    try:
        A, alpha, b = EXPENSES_TABLE[fit_label]
    except KeyError:
        raise InvalidParameterError(
            f"unknown expenses fit {fit_label!r}; expected one of {sorted(EXPENSES_TABLE)}"
        ) from None
    return [CompositeParams.from_full_period(A, alpha, w, b) for w in EXPENSES_FULL_PERIODS]


def model_values(partition, params, years, origin=ORIGIN_YEAR):
    """Noiseless, unfloored model values, one per year."""
    if len(params) != len(partition):
        raise ParamsPartitionMismatchError(
            f"{len(params)} parameter sets for {len(partition)} regimes"
        )
    years = np.asarray(list(years), dtype=np.int64)
    out = np.empty(years.size)
    for k, year in enumerate(years.tolist()):
        regime = partition.regime_for(year)
        if regime is None:
            raise YearNotCoveredError(f"year {year} is not covered by any regime")
        p = params[partition.regimes.index(regime)]
        out[k] = eval_composite(p, year - regime.start_year, year - origin)
    return years, out


def generate(partition, params, years=None, noise=None, spikes=(), origin=ORIGIN_YEAR, label=""):
    """Forward-evaluate the composite model with optional noise and spikes.

    Values below 1 BEF are floored so the series stays strictly positive.
    """
    noise = noise or NoiseSpec()
    if years is None:
        years = range(partition.start_year, partition.end_year + 1)
    years, values = model_values(partition, params, years, origin)
    values = np.maximum(values, FLOOR_BEF)
    if noise.kind == "multiplicative-lognormal" and noise.sigma > 0:
        rng = np.random.default_rng(noise.rng_seed)
        values = values * rng.lognormal(0.0, noise.sigma, values.size)
    spike_years = {}
    for spike in spikes:
        if spike.year in spike_years:
            raise InvalidParameterError(f"two spikes on year {spike.year}")
        spike_years[spike.year] = spike.multiplier
    for k, year in enumerate(years.tolist()):
        if year in spike_years:
            values[k] *= spike_years[year]
    return TimeSeries(years, values, label)


def generate_paper_income(noise=None, spikes=()):
    income, _, _ = paper_partitions()
    return generate(income, income_params(), noise=noise, spikes=spikes, label="paper-income")


def generate_paper_expenses(fit_label="T", noise=None, spikes=()):
    _, expenses, _ = paper_partitions()
    return generate(
        expenses,
        expenses_params(fit_label),
        noise=noise,
        spikes=spikes,
        label=f"paper-expenses-{fit_label}",
    )


def generate_trend(params, years, noise=None, origin=ORIGIN_YEAR, label="trend"):
    """Pure exponential trend ``A exp(alpha (year - origin))`` with optional noise."""
    noise = noise or NoiseSpec()
    years = np.asarray(list(years), dtype=np.int64)
    values = np.atleast_1d(eval_trend(params, years - origin)).astype(float)
    if noise.kind == "multiplicative-lognormal" and noise.sigma > 0:
        rng = np.random.default_rng(noise.rng_seed)
        values = values * rng.lognormal(0.0, noise.sigma, values.size)
    return TimeSeries(years, values, label)
