"""Per-partition fitting workflow, fit reports, and plot-data emission."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InsufficientDataError
from .model import ORIGIN_YEAR, CompositeModel, CompositeParams, eval_composite
from .optimize import FitConfig, integer_polish, multi_start_fit
from .segment import Partition, RegimeSpec

SCHEMA = "growthdecay.fit-report/1"


@dataclass
class RegimeFit:
    regime: RegimeSpec
    result: object
    candidates: list

    @property
    def equivalent_count(self):
        return sum(1 for c in self.candidates if c.equivalent)


def fit_partition(data, partition, config=None, polish=False, free=(), origin=ORIGIN_YEAR):
    """Fit the composite model independently on every regime of ``partition``.

    ``free`` lists conventionally-zero parameters (``phi``, ``B``) to release.
    """
    config = config or FitConfig()
    fixed = {name: 0.0 for name in ("phi", "B") if name not in free}
    fits = []
    for regime in partition:
        sub = data.window(regime.start_year, regime.end_year)
        model = CompositeModel(regime.start_year, origin=origin, fixed=fixed)
        if len(sub) < len(model.free):
            raise InsufficientDataError(
                f"regime {regime.index} [{regime.start_year}, {regime.end_year}] has "
                f"{len(sub)} data points for {len(model.free)} parameters"
            )
        best, candidates = multi_start_fit(model, sub, config)
        if polish:
            best = integer_polish(model, sub, best, config)
        fits.append(RegimeFit(regime, best, candidates))
    return fits


def _params_dict(params):
    return {k: float(v) for k, v in asdict(params).items()}


def build_report(fits, partition, config, model_name="composite", extra_config=None):
    """Machine-readable report: config echo, per-regime fits, totals, candidates."""
    regimes = []
    total_sse = 0.0
    total_n = 0
    for fit in fits:
        res = fit.result
        total_sse += res.sse
        total_n += res.n_points
        regimes.append(
            {
                "index": fit.regime.index,
                "start_year": fit.regime.start_year,
                "end_year": fit.regime.end_year,
                "n_points": res.n_points,
                "params": _params_dict(res.params),
                "full_period": 2.0 * float(res.params.T),
                "sse": res.sse,
                "rmse": res.rmse,
                "converged": bool(res.converged),
                "iterations": res.iterations,
                "start_index": res.start_index,
                "equivalent_count": fit.equivalent_count,
                "candidates": [
                    {
                        "start_index": c.start_index,
                        "sse": c.sse,
                        "converged": bool(c.converged),
                        "equivalent": bool(c.equivalent),
                        "params": _params_dict(c.params),
                    }
                    for c in fit.candidates
                ],
            }
        )
    return {
        "schema": SCHEMA,
        "model": model_name,
        "config": {**config.to_dict(), **(extra_config or {})},
        "partition": partition.to_dict(),
        "regimes": regimes,
        "total": {
            "sse": total_sse,
            "rmse": math.sqrt(total_sse / total_n) if total_n else 0.0,
            "n_points": total_n,
        },
        "converged": all(r["converged"] for r in regimes),
    }


def dumps_report(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _bef(x):
    return f"{int(round(x)):d}"


def render_table(report):
    """Text table laid out like the published parameter tables (BEF as integers)."""
    header = f"{'i':>2}  {'[t0;t1]':<11}  {'A':>10}  {'alpha':>7}  {'2T[y]':>6}  {'phi':>6}  {'B':>9}  {'b':>9}  {'rmse':>9}  conv  equiv"
    lines = [f"model: {report['model']}   partition: {report['partition']['mode']}", header, "-" * len(header)]
    for r in report["regimes"]:
        p = r["params"]
        two_T = r["full_period"]
        two_T_text = f"{two_T:.0f}" if float(two_T).is_integer() else f"{two_T:.1f}"
        lines.append(
            f"{r['index']:>2}  [{r['start_year']};{r['end_year']}]  {_bef(p['A']):>10}  "
            f"{p['alpha']:>7.4f}  {two_T_text:>6}  {p['phi']:>6.3f}  {_bef(p['B']):>9}  "
            f"{_bef(p['b']):>9}  {_bef(r['rmse']):>9}  {'yes' if r['converged'] else 'NO':>4}  "
            f"{r['equivalent_count']:>5}"
        )
    total = report["total"]
    lines.append(f"total SSE {total['sse']:.6g} BEF^2, RMSE {_bef(total['rmse'])} BEF over {total['n_points']} points")
    return "\n".join(lines) + "\n"


def partition_from_report(report):
    return Partition.from_dict(report["partition"])


def _format_t(t):
    return f"{t:.2f}".rstrip("0").rstrip(".")


def emit_plot_data(data, fits, step=0.25, origin=ORIGIN_YEAR):
    """Return (observed_csv, fitted_csv).

    The fitted curve is sampled every ``step`` years across each regime,
    oscillation clock at the regime start and drift clock at ``origin``.
    ``fits`` holds ``RegimeFit`` objects or ``(RegimeSpec, params)`` pairs.
    """
    if not step > 0:
        raise ValueError("step must be > 0")
    observed = ["year,value"] + [f"{y},{v!r}" for y, v in data]
    fitted = ["t,value,regime"]
    for fit in fits:
        if isinstance(fit, RegimeFit):
            regime, params = fit.regime, fit.result.params
        else:
            regime, params = fit
        n = int(math.floor((regime.end_year - regime.start_year) / step + 1e-9))
        t = regime.start_year + step * np.arange(n + 1)
        values = eval_composite(params, t - regime.start_year, t - origin)
        fitted.extend(f"{_format_t(tk)},{float(vk)!r},{regime.index}" for tk, vk in zip(t, values))
    return "\n".join(observed) + "\n", "\n".join(fitted) + "\n"


def params_from_dict(doc):
    if "two_T" in doc and "T" not in doc:
        doc = {**doc, "T": doc["two_T"] / 2.0}
        doc.pop("two_T")
    return CompositeParams(**{k: float(v) for k, v in doc.items()})
