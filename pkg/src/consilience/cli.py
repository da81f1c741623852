"""Command-line front end.

Subcommands: analyze, null, enumerate, critical, compare, plot.  JSON is the
canonical report format; text tables and SVG plots are projections of it.
Exit codes: 0 ok, 2 parse failure, 3 degenerate data, 4 usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from ._version import __version__
from .analysis import analyze, compare, render_compare_text, render_text
from .critical import TABULATED_ALPHAS, critical_c, is_calibrated, nomogram_table
from .dataio import (
    DEFAULT_MAX_ROWS,
    SCALAR_KINDS,
    AnalysisConfig,
    apply_config,
    load_config,
    parse_dataset,
)
from .errors import (
    ConsilienceError,
    DegenerateDataError,
    ParseError,
    UntabulatedAlphaError,
)
from .nullmodels import NULL_KINDS, NullSpec, enumerate_randmix, null_distribution

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_USAGE = 4

SEED_ENV_VAR = "CONSILIENCE_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 4, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _add_data_args(sub, with_scalar=True):
    sub.add_argument("data", help="input CSV (case,<name>_obs,<name>_mod[,<name>_se],...)")
    sub.add_argument("--config", help="sidecar JSON config file")
    sub.add_argument("--max-rows", type=int, default=None,
                     help=f"row limit override (default {DEFAULT_MAX_ROWS})")
    if with_scalar:
        sub.add_argument("--scalar", choices=SCALAR_KINDS, default=None,
                         help="error scalar (overrides config; default stdev)")


def _add_out_dir(sub):
    sub.add_argument("--out-dir", default=".", help="directory for output files")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="consilience",
                     description="holistic goodness-of-fit: error decomposition, "
                                 "joint scoring, null models, critical values")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="decompose, weight, and score a dataset")
    _add_data_args(p)
    _add_out_dir(p)
    p.add_argument("--alpha", action="append", type=float, default=None,
                   help="significance level(s) to report (repeatable)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("null", help="sample the null distribution of C / joint C")
    _add_data_args(p)
    _add_out_dir(p)
    p.add_argument("--kind", choices=NULL_KINDS, default="randnorm")
    p.add_argument("--reps", type=int, default=None,
                   help="replicates (default from config, else 1000)")
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (fallback: config, then ${SEED_ENV_VAR}; "
                        "a generated seed is recorded in the output)")
    p.set_defaults(func=cmd_null)

    p = sub.add_parser("enumerate",
                       help="exact RandMix moments by full enumeration (N <= 8)")
    _add_data_args(p)
    _add_out_dir(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("critical", help="critical value C'(alpha) at a sample size")
    p.add_argument("--alpha", type=float, default=None,
                   help=f"one of the tabulated levels {TABULATED_ALPHAS}")
    p.add_argument("--mn", type=float, default=None,
                   help="the sample-size product M * effN")
    p.add_argument("--export-nomogram", metavar="CSV",
                   help="write C' vs M*effN per alpha to a CSV file")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("compare",
                       help="consilience next to R^2, residual regression, "
                            "signed-rank and MSSD")
    _add_data_args(p)
    _add_out_dir(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="render SVG plots from a JSON report")
    p.add_argument("report", help="report.json produced by analyze")
    _add_out_dir(p)
    p.set_defaults(func=cmd_plot)

    return parser


def _read_inputs(args):
    path = Path(args.data)
    raw = path.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    config = load_config(args.config) if args.config else AnalysisConfig()
    max_rows = args.max_rows if args.max_rows is not None else DEFAULT_MAX_ROWS
    dataset = parse_dataset(raw.decode("utf-8"), max_rows=max_rows)
    dataset = apply_config(dataset, config)
    scalar = getattr(args, "scalar", None) or config.scalar
    return dataset, config, scalar, digest


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}", file=sys.stderr)


def _json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _resolve_seed(args, config) -> tuple[int, str]:
    if args.seed is not None:
        return args.seed, "flag"
    if config.seed is not None:
        return config.seed, "config"
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env), "env"
        except ValueError:
            raise ParseError(f"${SEED_ENV_VAR} must be an integer, got {env!r}")
    return int.from_bytes(os.urandom(8), "big"), "generated"


def cmd_analyze(args) -> int:
    dataset, config, scalar, digest = _read_inputs(args)
    alphas = tuple(args.alpha) if args.alpha else config.alphas
    report = analyze(dataset, scalar=scalar, alphas=alphas, seed=config.seed,
                     source=Path(args.data).name, input_sha256=digest,
                     config_echo=config.to_dict())
    out = Path(args.out_dir)
    _write(out / "report.json", _json_dumps(report))
    text = render_text(report)
    _write(out / "report.txt", text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_null(args) -> int:
    dataset, config, scalar, digest = _read_inputs(args)
    seed, seed_source = _resolve_seed(args, config)
    reps = args.reps if args.reps is not None else config.replicates
    spec = NullSpec(kind=args.kind, seed=seed, replicates=reps)
    dist = null_distribution(dataset, spec, kind=scalar)
    out = Path(args.out_dir)
    _write(out / "null.csv",
           "c\n" + "".join(f"{v!r}\n" for v in dist.c_values.tolist()))
    summary = {
        "kind": spec.kind,
        "replicates": spec.replicates,
        "seed": seed,
        "seed_source": seed_source,
        "scalar": scalar,
        "source": Path(args.data).name,
        "input_sha256": digest,
        "mean_c": dist.mean_c,
        "quantiles": {f"{p:g}": dist.q(p)
                      for p in (0.01, 0.05, 0.10, 0.25, 0.50,
                                0.75, 0.90, 0.95, 0.99)},
    }
    _write(out / "null.json", _json_dumps(summary))
    print(f"{spec.kind} null, {reps} replicates, seed {seed}: "
          f"mean C = {dist.mean_c:.6g}, 95th percentile = {dist.q(0.95):.6g}")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    dataset, config, scalar, digest = _read_inputs(args)
    entries = []
    for series in dataset.series:
        y_obs, _ = series.pairs()
        result = enumerate_randmix(y_obs, scalar)
        entries.append({
            "name": series.name,
            "n": result.n,
            "n_pairings": result.n_pairings,
            "has_ties": result.has_ties,
            "mean_mse_sys": result.mean_mse_sys,
            "mean_mse_ran": result.mean_mse_ran,
            "mean_mse_tot": result.mean_mse_tot,
            "mean_c": result.mean_c,
        })
        print(f"series {series.name}: {result.n_pairings} pairings, "
              f"mean C = {result.mean_c:.6g}, "
              f"mean MSEtot = {result.mean_mse_tot:.6g}"
              + (" (ties present)" if result.has_ties else ""))
    _write(Path(args.out_dir) / "enumeration.json",
           _json_dumps({"scalar": scalar, "source": Path(args.data).name,
                        "input_sha256": digest, "series": entries}))
    return EXIT_OK


def cmd_critical(args) -> int:
    did_something = False
    if args.export_nomogram:
        sizes = np.logspace(np.log10(2.0), 3.0, 121).tolist()
        rows = nomogram_table(sizes)
        header = ["m_effn"] + [f"critical_c_{a:g}" for a in TABULATED_ALPHAS]
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(f"{row[h]:.10g}" for h in header))
        _write(Path(args.export_nomogram), "\n".join(lines) + "\n")
        did_something = True
    if args.alpha is not None or args.mn is not None:
        if args.alpha is None or args.mn is None:
            print("consilience: critical needs both --alpha and --mn",
                  file=sys.stderr)
            return EXIT_USAGE
        value = critical_c(args.alpha, 1.0, args.mn)
        note = "" if is_calibrated(1.0, args.mn) else \
            "  (outside calibrated range; extrapolated)"
        print(f"critical C at alpha = {args.alpha:g}, M*effN = {args.mn:g}: "
              f"{value:.6g}{note}")
        did_something = True
    if not did_something:
        print("consilience: critical needs --alpha/--mn or --export-nomogram",
              file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def cmd_compare(args) -> int:
    dataset, config, scalar, digest = _read_inputs(args)
    report = compare(dataset, scalar=scalar)
    report["source"] = Path(args.data).name
    report["input_sha256"] = digest
    out = Path(args.out_dir)
    _write(out / "compare.json", _json_dumps(report))
    text = render_compare_text(report)
    _write(out / "compare.txt", text)
    sys.stdout.write(text)
    return EXIT_OK


def _safe_name(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name)


def cmd_plot(args) -> int:
    from .svgplot import nomogram_svg, scatter_svg

    with open(args.report) as fh:
        report = json.load(fh)
    out = Path(args.out_dir)
    for entry in report["series"]:
        _write(out / f"scatter_{_safe_name(entry['name'])}.svg",
               scatter_svg(entry))
    _write(out / "nomogram.svg", nomogram_svg(report))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"consilience: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UntabulatedAlphaError as exc:
        print(f"consilience: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateDataError as exc:
        print(f"consilience: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ConsilienceError as exc:
        print(f"consilience: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"consilience: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"consilience: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
