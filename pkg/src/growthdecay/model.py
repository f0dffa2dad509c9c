"""
Growth-decay model evaluators.

Every function here is pure and accepts scalars or numpy arrays. Two clocks
are in play for the composite model: the oscillation runs on a regime-local
clock (years since the regime's first year) and the drift on a global clock
(years since ``ORIGIN_YEAR``).

The second half of the module wraps the evaluators as parameterized models
that the optimizer can fit: each model knows its parameter names, default
bounds, and which parameters are held fixed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import InvalidParameterError, YearOutOfRegimeError
from .series import TimeSeries

ORIGIN_YEAR = 1920


@dataclass(frozen=True)
class TrendParams:
    A: float
    alpha: float


@dataclass(frozen=True)
class LogisticParams:
    y_max: float
    rate: float
    t_mid: float


@dataclass(frozen=True)
class LogisticDriftParams:
    B1: float
    B2: float
    beta: float

    @property
    def B3(self):
        return self.B1 / self.B2

    @property
    def B4(self):
        return 1.0 / self.B2


@dataclass(frozen=True)
class CompositeParams:
    """One regime of the composite model.

    ``T`` is the semi-period: the full oscillation period is ``2 * T``.
    ``phi`` and ``B`` conventionally stay at zero.
    """

    A: float
    alpha: float
    T: float
    phi: float = 0.0
    B: float = 0.0
    b: float = 0.0

    @classmethod
    def from_full_period(cls, A, alpha, two_T, b, phi=0.0, B=0.0):
        return cls(A=A, alpha=alpha, T=two_T / 2.0, phi=phi, B=B, b=b)

    @property
    def full_period(self):
        return 2.0 * self.T


def _check_semi_period(T):
    if np.any(np.asarray(T) <= 0):
        raise InvalidParameterError(f"semi-period T must be > 0, got {T}")


def eval_trend(p, t):
    return p.A * np.exp(p.alpha * np.asarray(t, dtype=float))


def eval_sine(T, phi, t):
    _check_semi_period(T)
    return np.sin(np.pi * np.asarray(t, dtype=float) / T + phi)


def eval_logistic(p, t):
    # 0.5*(1+tanh(x/2)) is the overflow-free form of 1/(1+exp(-x))
    x = p.rate * (np.asarray(t, dtype=float) - p.t_mid)
    return p.y_max * 0.5 * (1.0 + np.tanh(0.5 * x))


def eval_logistic_drift(p, t):
    """Saturating drift ``B1 e^{beta t} / (1 + B2 e^{beta t})``."""
    with np.errstate(over="ignore", invalid="ignore"):
        growth = np.exp(p.beta * np.asarray(t, dtype=float))
        value = p.B1 * growth / (1.0 + p.B2 * growth)
    # inf/inf once exp overflows: the limit is the saturation level
    return np.where(np.isinf(growth), p.B3, value)


def eval_logistic_drift_ratio(p, t):
    """The algebraic rewriting ``B3 / (1 + B4 e^{-beta t})``."""
    return p.B3 / (1.0 + p.B4 * np.exp(-p.beta * np.asarray(t, dtype=float)))


def eval_logistic_drift_linear(p, t):
    """First-order expansion of the logistic drift around t = 0."""
    level = p.B1 / (1.0 + p.B2)
    return level * (1.0 + p.beta * np.asarray(t, dtype=float) / (1.0 + p.B2))


def eval_linear_drift(B, b, t):
    return B + b * np.asarray(t, dtype=float)


def eval_composite(p, t_regime, t_global):
    _check_semi_period(p.T)
    t_regime = np.asarray(t_regime, dtype=float)
    wave = p.A * np.exp(p.alpha * t_regime) * np.sin(np.pi * t_regime / p.T + p.phi)
    return wave + eval_linear_drift(p.B, p.b, t_global)


def eval_series(p, regime, years, origin=ORIGIN_YEAR, label=""):
    """Evaluate ``p`` at each calendar year of ``regime``."""
    years = np.asarray(list(years), dtype=np.int64)
    outside = years[(years < regime.start_year) | (years > regime.end_year)]
    if outside.size:
        raise YearOutOfRegimeError(
            f"year {int(outside[0])} outside regime {regime.index} "
            f"[{regime.start_year}, {regime.end_year}]"
        )
    values = eval_composite(p, years - regime.start_year, years - origin)
    return TimeSeries(years, np.atleast_1d(values), label)


# --------------------------------------------------------------------------
# parameterized models for fitting
# --------------------------------------------------------------------------


class Model:
    """A parameterized evaluator with optionally frozen parameters.

    ``predict`` broadcasts over a leading axis of the free-parameter array,
    so ``theta`` of shape ``(m, n_free)`` yields predictions of shape
    ``(m, n_years)``. The optimizer relies on this to evaluate all
    finite-difference probes in one call.
    """

    params_type: type = None
    default_bounds: dict = {}

    def __init__(self, fixed=None):
        self.names = tuple(f.name for f in fields(self.params_type))
        fixed = dict(fixed or {})
        unknown = set(fixed) - set(self.names)
        if unknown:
            raise InvalidParameterError(f"unknown parameters {sorted(unknown)}")
        self.fixed = fixed
        self.free = tuple(n for n in self.names if n not in fixed)

    def _config(self):
        return {}

    def freeze(self, **values):
        return type(self)(fixed={**self.fixed, **values}, **self._config())

    def __repr__(self):
        cfg = ", ".join(f"{k}={v!r}" for k, v in self._config().items())
        return f"{type(self).__name__}({cfg}, fixed={self.fixed!r})"

    def pack(self, params):
        values = asdict(params)
        return np.array([values[n] for n in self.free], dtype=float)

    def unpack(self, theta):
        theta = np.asarray(theta, dtype=float)
        values = dict(self.fixed)
        values.update(zip(self.free, theta.tolist()))
        return self.params_type(**values)

    def bounds(self, overrides=None):
        """(lower, upper) arrays for the free parameters."""
        table = {**self.default_bounds, **(overrides or {})}
        lo = np.array([table.get(n, (-np.inf, np.inf))[0] for n in self.free], dtype=float)
        hi = np.array([table.get(n, (-np.inf, np.inf))[1] for n in self.free], dtype=float)
        return lo, hi

    def _columns(self, theta):
        theta = np.asarray(theta, dtype=float)
        batched = theta.ndim == 2
        cols = {}
        for j, name in enumerate(self.free):
            cols[name] = theta[:, j : j + 1] if batched else theta[j]
        for name, value in self.fixed.items():
            cols[name] = float(value)
        return cols

    def predict(self, theta, years):
        years = np.asarray(years, dtype=float)
        return self._evaluate(self._columns(theta), years)

    def _evaluate(self, c, years):
        raise NotImplementedError


class TrendModel(Model):
    params_type = TrendParams
    default_bounds = {"A": (1e-12, np.inf), "alpha": (-1.0, 1.0)}

    def __init__(self, origin=ORIGIN_YEAR, fixed=None):
        self.origin = origin
        super().__init__(fixed)

    def _config(self):
        return {"origin": self.origin}

    def _evaluate(self, c, years):
        return c["A"] * np.exp(c["alpha"] * (years - self.origin))


@dataclass(frozen=True)
class LinearDriftParams:
    B: float
    b: float


class LinearDriftModel(Model):
    params_type = LinearDriftParams

    def __init__(self, origin=ORIGIN_YEAR, fixed=None):
        self.origin = origin
        super().__init__(fixed)

    def _config(self):
        return {"origin": self.origin}

    def _evaluate(self, c, years):
        return c["B"] + c["b"] * (years - self.origin)


class LogisticModel(Model):
    params_type = LogisticParams
    default_bounds = {
        "y_max": (1.0, 1e12),
        "rate": (-2.0, 2.0),
        "t_mid": (1800.0, 2200.0),
    }

    def _evaluate(self, c, years):
        x = c["rate"] * (years - c["t_mid"])
        return c["y_max"] * 0.5 * (1.0 + np.tanh(0.5 * x))


class CompositeModel(Model):
    """The composite regime model on calendar years.

    ``phi`` and ``B`` are frozen at zero unless ``fixed`` says otherwise.
    """

    params_type = CompositeParams
    default_bounds = {
        "A": (1.0, 1e8),
        "alpha": (0.0, 0.2),
        "T": (5.0, 100.0),
        "phi": (-np.pi, np.pi),
        "B": (0.0, 1e7),
        "b": (0.0, 1e5),
    }

    def __init__(self, regime_start, origin=ORIGIN_YEAR, fixed=None):
        self.regime_start = int(regime_start)
        self.origin = origin
        if fixed is None:
            fixed = {"phi": 0.0, "B": 0.0}
        super().__init__(fixed)

    def _config(self):
        return {"regime_start": self.regime_start, "origin": self.origin}

    def _evaluate(self, c, years):
        t_regime = years - self.regime_start
        T = c["T"]
        if np.any(np.asarray(T) <= 0):
            return np.full(np.broadcast(T, years).shape, np.nan)
        wave = c["A"] * np.exp(c["alpha"] * t_regime) * np.sin(np.pi * t_regime / T + c["phi"])
        return wave + c["B"] + c["b"] * (years - self.origin)
