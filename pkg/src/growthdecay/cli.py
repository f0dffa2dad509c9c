"""Command-line entry point: generate | fit | segment | trend | check | report.

Exit codes: 0 success, 1 usage error, 2 data error, 3 fit non-convergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import synth
from .errors import GrowthDecayError
from .optimize import FitConfig, fit_loglinear_trend
from .report import (
    RegimeFit,
    build_report,
    dumps_report,
    emit_plot_data,
    fit_partition,
    params_from_dict,
    render_table,
)
from .segment import Partition, boundary_search, paper_partitions, progression_check, semiperiod_sum_check
from .series import TimeSeries, dumps_csv, load_csv, write_atomic

SEED_ENV = "GROWTHDECAY_SEED"
GDP_ALPHA = 0.078
PRESETS = ("paper-income",) + tuple(f"paper-expenses-{k}" for k in "RSTU")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NONCONVERGED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _seed(args):
    return args.seed if args.seed is not None else _default_seed()


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


def _parse_spikes(text):
    if text is None:
        return []
    if text == "default":
        return synth.default_spikes()
    spikes = []
    for item in text.split(","):
        try:
            year, mult = item.split(":")
            spikes.append(synth.SpikeEvent(int(year), float(mult)))
        except ValueError:
            raise UsageError(f"bad spike {item!r}; expected YEAR:MULTIPLIER") from None
    return spikes


def _resolve_partition(name):
    income, expenses, visual = paper_partitions()
    named = {"income": income, "expenses": expenses, "visual": visual}
    if name in named:
        return named[name]
    if not os.path.exists(name):
        raise UsageError(f"--partition must be income, expenses, visual, or a JSON file; got {name!r}")
    with open(name, encoding="utf-8") as fh:
        return Partition.from_dict(json.load(fh))


def cmd_generate(args):
    noise = synth.NoiseSpec.lognormal(args.noise_sigma, _seed(args)) if args.noise_sigma else None
    spikes = _parse_spikes(args.spikes)
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            doc = json.load(fh)
        partition = Partition.from_dict(doc["partition"])
        params = [params_from_dict(p) for p in doc["params"]]
        years = range(doc["years"][0], doc["years"][1] + 1) if "years" in doc else None
        series = synth.generate(partition, params, years, noise, spikes, label=doc.get("label", ""))
    elif args.preset == "paper-income":
        series = synth.generate_paper_income(noise, spikes)
    elif args.preset:
        series = synth.generate_paper_expenses(args.preset.rsplit("-", 1)[1], noise, spikes)
    else:
        raise UsageError("generate needs --preset or --config")
    if noise is not None:
        # the CSV comment line records how the scatter was drawn
        tag = f"noise=lognormal sigma={noise.sigma:g} seed={noise.rng_seed}"
        series = TimeSeries(series.years, series.values, f"{series.label} {tag}".strip())
    _emit(dumps_csv(series), args.out)
    return EXIT_OK


def _fit_config(args):
    return FitConfig(n_starts=args.starts, rng_seed=_seed(args))


def cmd_fit(args):
    data = load_csv(args.csv)
    partition = _resolve_partition(args.partition)
    config = _fit_config(args)
    free = tuple(args.free.split(",")) if args.free else ()
    fits = fit_partition(data, partition, config, polish=args.integer_polish, free=free)
    report = build_report(
        fits,
        partition,
        config,
        extra_config={"integer_polish": args.integer_polish, "free": list(free), "input": os.path.basename(args.csv)},
    )
    if args.json_out:
        _emit(dumps_report(report), args.json_out)
    sys.stdout.write(render_table(report))
    if args.plot_prefix:
        observed, fitted = emit_plot_data(data, fits)
        write_atomic(args.plot_prefix + "observed.csv", observed)
        write_atomic(args.plot_prefix + "fitted.csv", fitted)
    return EXIT_OK if report["converged"] else EXIT_NONCONVERGED


def cmd_segment(args):
    data = load_csv(args.csv)
    config = FitConfig(n_starts=args.starts, rng_seed=_seed(args))
    found = boundary_search(data, args.regimes, args.min_width, config)
    fits = [RegimeFit(r, f, [f]) for r, f in zip(found.partition, found.fits)]
    report = build_report(
        fits,
        found.partition,
        config,
        extra_config={"regimes": args.regimes, "min_width": args.min_width, "n_candidates": found.n_candidates},
    )
    if args.json_out:
        _emit(dumps_report(report), args.json_out)
    for r in found.partition:
        sys.stdout.write(f"regime {r.index}: [{r.start_year};{r.end_year}]\n")
    sys.stdout.write(f"total SSE {found.total_sse:.6g} over {found.n_candidates} candidate partitions\n")
    return EXIT_OK if report["converged"] else EXIT_NONCONVERGED


def cmd_trend(args):
    data = load_csv(args.csv)
    trend = fit_loglinear_trend(data, origin=args.origin)
    sys.stdout.write(f"A = {trend.A:.6g} BEF\nalpha = {trend.alpha:.6f} per year\n")
    sys.stdout.write(f"alpha - {GDP_ALPHA} (Belgian GDP) = {trend.alpha - GDP_ALPHA:+.6f}\n")
    return EXIT_OK


def cmd_check(args):
    _, _, visual = paper_partitions()
    prog = progression_check(visual)
    for row in prog.rows:
        status = "ok" if row.matches else "MISMATCH"
        sys.stdout.write(f"regime {row.index}: width {row.actual}, expected 10+9*{row.index} = {row.expected}  {status}\n")
    ok_sum, info = semiperiod_sum_check([38, 54, 68], 80)
    sys.stdout.write(
        f"expense windows {'+'.join(map(str, info['windows']))} = {info['sum']}, "
        f"2*(2000-1920) = {info['target']}  {'ok' if ok_sum else 'MISMATCH'}\n"
    )
    ok_income, info = semiperiod_sum_check([38, 56, 74], 80)
    sys.stdout.write(f"income windows sum to {info['sum']} (informational; not {info['target']})\n")
    passed = prog.all_match and ok_sum
    sys.stdout.write("PASS\n" if passed else "FAIL\n")
    return EXIT_OK if passed else EXIT_DATA


def cmd_report(args):
    with open(args.json, encoding="utf-8") as fh:
        report = json.load(fh)
    if args.format == "json":
        sys.stdout.write(dumps_report(report))
    else:
        sys.stdout.write(render_table(report))
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="growthdecay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a synthetic series as CSV")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--config", help="JSON with partition, params, optional [first, last] years")
    p.add_argument("--noise-sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--spikes", help="'default' or YEAR:MULT[,YEAR:MULT...]")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("fit", help="fit the composite model per regime")
    p.add_argument("csv")
    p.add_argument("--partition", default="income")
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--seed", type=int)
    p.add_argument("--integer-polish", action="store_true")
    p.add_argument("--free", help="comma-separated conventionally-zero parameters to fit (phi,B)")
    p.add_argument("--json-out")
    p.add_argument("--plot-prefix", help="write <prefix>observed.csv and <prefix>fitted.csv")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("segment", help="exhaustive regime boundary search")
    p.add_argument("csv")
    p.add_argument("--regimes", type=int, default=3)
    p.add_argument("--min-width", type=int, default=10)
    p.add_argument("--starts", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--json-out")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("trend", help="log-linear exponential trend")
    p.add_argument("csv")
    p.add_argument("--origin", type=int, default=1920)
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("check", help="structural checks on the published regime constants")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("report", help="render a JSON fit report")
    p.add_argument("json")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"growthdecay {args.command}: {exc}\n")
        return EXIT_USAGE
    except GrowthDecayError as exc:
        sys.stderr.write(f"growthdecay {args.command}: {exc}\n")
        return exc.exit_code
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"growthdecay {args.command}: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
