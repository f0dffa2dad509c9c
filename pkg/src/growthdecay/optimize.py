"""
Damped nonlinear least squares for the growth-decay models.

The fitter is a Levenberg-Marquardt loop written against ``Model`` objects:
the damping term is ``lambda * diag(J^T J)`` (Marquardt scaling), trial
steps are projected onto the parameter bounds, and a trial is accepted
only if it strictly lowers the sum of squared residuals. Jacobians are
central finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    EmptyDataError,
    FitError,
    GrowthDecayError,
    InsufficientDataError,
    InvalidParameterError,
    NonFiniteEvaluationError,
    NonPositiveValueError,
)
from .model import ORIGIN_YEAR, TrendParams

EQUIVALENT_SSE_FRACTION = 0.05


@dataclass(frozen=True)
class FitConfig:
    max_iterations: int = 500
    gradient_tolerance: float = 1e-10
    step_tolerance: float = 1e-10
    damping_init: float = 1e-3
    damping_up_factor: float = 10.0
    damping_down_factor: float = 0.1
    fd_step_relative: float = 1e-6
    n_starts: int = 32
    rng_seed: int = 0
    bounds: dict = field(default_factory=dict)  # name -> (lower, upper), overrides model defaults
    equivalent_fraction: float = EQUIVALENT_SSE_FRACTION

    def __post_init__(self):
        if self.max_iterations < 1:
            raise InvalidParameterError("max_iterations must be >= 1")
        if self.gradient_tolerance <= 0 or self.step_tolerance <= 0:
            raise InvalidParameterError("tolerances must be > 0")
        if self.damping_init <= 0:
            raise InvalidParameterError("damping_init must be > 0")
        if not self.damping_up_factor > 1:
            raise InvalidParameterError("damping_up_factor must be > 1")
        if not 0 < self.damping_down_factor < 1:
            raise InvalidParameterError("damping_down_factor must be in (0, 1)")
        if not 1e-12 < self.fd_step_relative < 1e-2:
            raise InvalidParameterError("fd_step_relative must be in (1e-12, 1e-2)")
        if self.n_starts < 1:
            raise InvalidParameterError("n_starts must be >= 1")
        if self.equivalent_fraction < 0:
            raise InvalidParameterError("equivalent_fraction must be >= 0")

    def to_dict(self):
        out = {k: getattr(self, k) for k in self.__dataclass_fields__}
        out["bounds"] = {k: list(v) for k, v in self.bounds.items()}
        return out


@dataclass
class FitResult:
    params: object
    sse: float
    rmse: float
    n_points: int
    converged: bool
    iterations: int
    residuals: np.ndarray
    start_index: int = 0
    sse_trace: list = field(default_factory=list)
    equivalent: bool = False
    model: object = None
    message: str = ""

    @property
    def theta(self):
        return self.model.pack(self.params)


def _observed(data):
    if len(data) == 0:
        raise EmptyDataError("time series is empty")
    return np.asarray(data.years, dtype=float), np.asarray(data.values, dtype=float)


def residuals(model, theta, data):
    """Observed minus predicted, in data order."""
    years, observed = _observed(data)
    if not isinstance(theta, np.ndarray):
        theta = model.pack(theta) if hasattr(theta, "__dataclass_fields__") else np.asarray(theta)
    return observed - model.predict(theta, years)


def _probe_steps(theta, fd_step_relative):
    return fd_step_relative * np.maximum(np.abs(theta), 1.0)


def jacobian_fd(model, theta, data, fd_step_relative=1e-6):
    """Central-difference Jacobian of the model prediction, shape (n_points, n_free)."""
    if not 1e-12 < fd_step_relative < 1e-2:
        raise InvalidParameterError("fd_step_relative must be in (1e-12, 1e-2)")
    years, _ = _observed(data)
    if hasattr(theta, "__dataclass_fields__"):
        theta = model.pack(theta)
    return _jacobian(model, np.asarray(theta, dtype=float), years, fd_step_relative)


def _jacobian(model, theta, years, rel):
    h = _probe_steps(theta, rel)
    p = theta.size
    probes = np.repeat(theta[None, :], 2 * p, axis=0)
    idx = np.arange(p)
    probes[idx, idx] += h
    probes[p + idx, idx] -= h
    with np.errstate(all="ignore"):
        f = model.predict(probes, years)
    if not np.all(np.isfinite(f)):
        raise NonFiniteEvaluationError("model is not finite at a finite-difference probe")
    return ((f[:p] - f[p:]) / (2.0 * h[:, None])).T


def _relative_step(delta, theta):
    # parameters near zero (phase, offset) are measured on an absolute scale
    return np.max(np.abs(delta) / np.maximum(np.abs(theta), 1.0))


def _sse(r):
    return float(r @ r)


def _make_result(model, theta, data_years, observed, **kw):
    r = observed - model.predict(theta, data_years)
    sse = _sse(r)
    n = r.size
    return FitResult(
        params=model.unpack(theta),
        sse=sse,
        rmse=math.sqrt(sse / n),
        n_points=n,
        residuals=r,
        model=model,
        **kw,
    )


def lm_fit(model, data, init, config=None, start_index=0):
    """Levenberg-Marquardt fit of ``model`` to ``data`` starting from ``init``.

    ``init`` is either a params dataclass or an array of free parameters.
    Returns a ``FitResult``; numerical trouble ends the run as non-converged
    rather than raising.
    """
    config = config or FitConfig()
    years, observed = _observed(data)
    theta = model.pack(init) if hasattr(init, "__dataclass_fields__") else np.array(init, float)
    p = theta.size
    if years.size < p:
        raise InsufficientDataError(f"{years.size} points for {p} free parameters")
    lo, hi = model.bounds(config.bounds)
    if np.any(theta < lo) or np.any(theta > hi):
        raise InvalidParameterError("initial parameters outside bounds")

    with np.errstate(all="ignore"):
        r = observed - model.predict(theta, years)
    sse = _sse(r)
    if not math.isfinite(sse):
        raise NonFiniteEvaluationError("model is not finite at the initial parameters")
    trace = [sse]
    lam = config.damping_init
    converged = False
    message = "max iterations reached"
    iterations = 0

    while iterations < config.max_iterations:
        if sse == 0.0:
            converged, message = True, "zero residual"
            break
        try:
            J = _jacobian(model, theta, years, config.fd_step_relative)
        except NonFiniteEvaluationError:
            message = "non-finite jacobian"
            break
        g = J.T @ r
        col_norms = np.sqrt(np.einsum("ij,ij->j", J, J))
        r_norm = math.sqrt(sse)
        # cosine between residual and each Jacobian column; scale-free
        with np.errstate(all="ignore"):
            cosines = np.where(col_norms > 0, np.abs(g) / (col_norms * r_norm), 0.0)
        # components pinned at a bound with the gradient pushing outward do not count
        pinned = ((theta <= lo) & (g < 0)) | ((theta >= hi) & (g > 0))
        if np.max(np.where(pinned, 0.0, cosines), initial=0.0) < config.gradient_tolerance:
            converged, message = True, "gradient tolerance"
            break

        # solve only for coordinates not held at a bound
        act = ~pinned
        JtJ = (J.T @ J)[np.ix_(act, act)]
        diag = np.maximum(np.diag(JtJ), 1e-300)
        g_act = g[act]
        accepted = stalled = False
        while iterations < config.max_iterations:
            iterations += 1
            try:
                step = np.zeros(p)
                step[act] = np.linalg.solve(JtJ + lam * np.diag(diag), g_act)
            except np.linalg.LinAlgError:
                step = None
            if step is not None and np.all(np.isfinite(step)):
                trial = np.clip(theta + step, lo, hi)
                with np.errstate(all="ignore"):
                    r_trial = observed - model.predict(trial, years)
                sse_trial = _sse(r_trial)
                if math.isfinite(sse_trial) and sse_trial < sse:
                    moved = trial - theta
                    theta, r, sse = trial, r_trial, sse_trial
                    trace.append(sse)
                    lam = max(lam * config.damping_down_factor, 1e-15)
                    accepted = True
                    break
                rel_step = _relative_step(trial - theta, theta)
                if rel_step < config.step_tolerance:
                    stalled = True
                    break
            lam *= config.damping_up_factor
            if lam > 1e20:
                stalled = True
                break
        if not accepted:
            # no decrease even for vanishing steps: a stationary point at float resolution
            if stalled:
                converged, message = True, "no further decrease"
            break
        rel_step = _relative_step(moved, theta)
        if rel_step < config.step_tolerance:
            converged, message = True, "step tolerance"
            break

    return _make_result(
        model,
        theta,
        years,
        observed,
        converged=converged,
        iterations=iterations,
        start_index=start_index,
        sse_trace=trace,
        message=message,
    )


def sample_starts(model, config):
    """Deterministic starting points: log-uniform for A, uniform otherwise."""
    rng = np.random.default_rng(config.rng_seed)
    lo, hi = model.bounds(config.bounds)
    if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise InvalidParameterError("multi-start needs finite bounds for every free parameter")
    starts = np.empty((config.n_starts, lo.size))
    for j, name in enumerate(model.free):
        if name in ("A", "y_max") and lo[j] > 0:
            starts[:, j] = np.exp(rng.uniform(np.log(lo[j]), np.log(hi[j]), config.n_starts))
        else:
            starts[:, j] = rng.uniform(lo[j], hi[j], config.n_starts)
    return starts


def multi_start_fit(model, data, config=None, starts=None):
    """Run ``lm_fit`` from every start; return (winner, candidates sorted by SSE).

    Candidates whose SSE is within ``config.equivalent_fraction`` of the
    winner are flagged ``equivalent``.
    """
    config = config or FitConfig()
    if starts is None:
        starts = sample_starts(model, config)
    results = []
    errors = []
    for k, start in enumerate(starts):
        try:
            results.append(lm_fit(model, data, start, config, start_index=k))
        except (InsufficientDataError, EmptyDataError):
            raise
        except GrowthDecayError as exc:
            errors.append(exc)
    if not results:
        raise FitError(f"all {len(starts)} starts failed: {errors[0]}")
    results.sort(key=lambda res: (res.sse, res.start_index))
    best = results[0].sse
    limit = best * (1.0 + config.equivalent_fraction)
    for res in results:
        res.equivalent = res.sse <= limit
    return results[0], results


def distinct_solutions(candidates, alpha_tol=1e-3, only_equivalent=True):
    """One representative per basin among converged candidates.

    Candidates are taken in SSE order; one is kept if its ``alpha`` differs
    from every kept one by more than ``alpha_tol``.
    """
    kept = []
    for res in candidates:
        if not res.converged or (only_equivalent and not res.equivalent):
            continue
        if all(abs(res.params.alpha - k.params.alpha) > alpha_tol for k in kept):
            kept.append(res)
    return kept


def integer_polish(model, data, result, config=None):
    """Round the semi-period to whole years, freeze it, refit the rest."""
    config = config or FitConfig()
    fitted_model = result.model or model
    T_int = float(round(result.params.T))
    lo, hi = fitted_model.bounds(config.bounds) if "T" in fitted_model.free else (None, None)
    if "T" in fitted_model.free:
        j = fitted_model.free.index("T")
        T_int = float(min(max(T_int, math.ceil(lo[j])), math.floor(hi[j])))
    frozen = fitted_model.freeze(T=T_int)
    init = frozen.pack(replace(result.params, T=T_int))
    flo, fhi = frozen.bounds(config.bounds)
    init = np.clip(init, flo, fhi)
    polished = lm_fit(frozen, data, init, config, start_index=result.start_index)
    polished.equivalent = result.equivalent
    return polished


def fit_loglinear_trend(data, origin=ORIGIN_YEAR):
    """Ordinary least squares on (t, ln y); returns ``TrendParams``."""
    years, values = _observed(data)
    if np.any(values <= 0):
        raise NonPositiveValueError("log-linear trend needs strictly positive values")
    if years.size < 2:
        raise InsufficientDataError("trend fit needs at least two points")
    t = years - origin
    design = np.column_stack([np.ones_like(t), t])
    (intercept, slope), *_ = np.linalg.lstsq(design, np.log(values), rcond=None)
    return TrendParams(A=float(np.exp(intercept)), alpha=float(slope))


def profile_starts(model, data, config=None, n_best=3, n_alpha=21, T_step=1.0):
    """Grid-seeded starts for the composite model.

    With ``alpha`` and ``T`` pinned on a grid, the model is linear in ``A``
    and ``b``; those are solved in closed form for every grid node at once
    and the ``n_best`` nodes by SSE are returned as starting points.
    Returns an empty array when the free set is not a subset of
    ``{A, alpha, T, b}``.
    """
    config = config or FitConfig()
    free = set(model.free)
    if not {"A", "alpha", "T"} <= free or not free <= {"A", "alpha", "T", "b"}:
        return np.empty((0, len(model.free)))
    years, y = _observed(data)
    lo, hi = model.bounds(config.bounds)
    j = {name: k for k, name in enumerate(model.free)}
    alphas = np.linspace(lo[j["alpha"]], hi[j["alpha"]], n_alpha)
    Ts = np.arange(lo[j["T"]], hi[j["T"]] + 0.5 * T_step, T_step)
    a_grid, T_grid = (g.reshape(-1, 1) for g in np.meshgrid(alphas, Ts, indexing="ij"))

    fixed = model.fixed
    t_reg = years - model.regime_start
    y = y - fixed.get("B", 0.0)
    wave = np.exp(a_grid * t_reg) * np.sin(np.pi * t_reg / T_grid + fixed.get("phi", 0.0))
    if "b" in free:
        drift = years - model.origin
        s_ww = np.einsum("ij,ij->i", wave, wave)
        s_wd = wave @ drift
        s_dd = drift @ drift
        s_wy = wave @ y
        s_dy = drift @ y
        det = s_ww * s_dd - s_wd**2
        with np.errstate(all="ignore"):
            A = (s_wy * s_dd - s_wd * s_dy) / det
            b = (s_ww * s_dy - s_wd * s_wy) / det
    else:
        y = y - fixed.get("b", 0.0) * (years - model.origin)
        with np.errstate(all="ignore"):
            A = (wave @ y) / np.einsum("ij,ij->i", wave, wave)
        b = np.zeros_like(A)
    A = np.clip(np.nan_to_num(A, nan=lo[j["A"]]), lo[j["A"]], hi[j["A"]])
    b = np.clip(np.nan_to_num(b), *(model.bounds(config.bounds)[0][j["b"]], hi[j["b"]])) if "b" in free else b
    pred = A[:, None] * wave + (b[:, None] * (years - model.origin) if "b" in free else 0.0)
    sse = np.sum((y - pred) ** 2, axis=1)
    order = np.argsort(sse, kind="stable")[:n_best]
    starts = np.empty((order.size, len(model.free)))
    starts[:, j["A"]] = A[order]
    starts[:, j["alpha"]] = a_grid[order, 0]
    starts[:, j["T"]] = T_grid[order, 0]
    if "b" in free:
        starts[:, j["b"]] = b[order]
    return starts
