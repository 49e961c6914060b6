"""Command-line front end: ``tracedist predict|sample|syk|ising|combinatorics-table``.

Flags override fields of an optional ``--config`` JSON document.  Exit codes:
0 success, 2 invalid configuration or arguments, 1 runtime failure.
"""
from __future__ import annotations

import argparse
import sys

from .harness import DEFAULT_SEED, ConfigError, ExperimentConfig, emit_csv, emit_gnuplot, load_config, run

# CSV columns per subcommand; N and N_B lead so multi-size sweeps stay readable
COLUMNS = {
    "predict": ("N", "N_B", "f", "Q", "D1", "P_discrimination"),
    "sample": ("N", "N_B", "f", "Q", "samples", "mean_D1", "stderr", "stddev", "analytic_reference", "analytic_page", "analytic_q0"),
    "syk": ("N", "N_B", "f", "samples", "mean_D1", "stddev", "stderr", "analytic_page", "analytic_q0"),
    "ising": ("N", "N_B", "f", "samples", "mean_D1", "stddev", "stderr", "analytic_page", "analytic_q0"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _f_grid(text):
    if text == "all":
        return None
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'all' or comma-separated fractions, got {text!r}") from None


def _window(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo,hi, got {text!r}") from None
    return [lo, hi]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tracedist", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    S = argparse.SUPPRESS

    def common(sp, seeded=True):
        sp.add_argument("--config", help="JSON experiment config; flags override its fields")
        sp.add_argument("--out", default=S, help="CSV output path (default: stdout)")
        sp.add_argument("--gnuplot", help="also write a gnuplot-style data file")
        sp.add_argument("--workers", type=int, default=S, help="worker processes (default 1)")
        sp.add_argument("--f-grid", dest="f_grid", type=_f_grid, default=S,
                        help="'all' or comma-separated f values, each a multiple of 1/N")
        if seeded:
            sp.add_argument("--seed", type=int, default=S, help=f"master seed (default {DEFAULT_SEED})")

    sp = sub.add_parser("predict", help="closed-form averages")
    sp.add_argument("--model", choices=("page", "q0", "qgen"), default=S)
    sp.add_argument("--n", type=_int_list, default=S, help="qubit count(s), comma-separated")
    sp.add_argument("--q", type=float, default=S, help="total charge measured from the spectrum peak")
    sp.add_argument("--gamma", type=float, default=S, help="charge spectrum width per sqrt(qubit)")
    common(sp, seeded=False)

    sp = sub.add_parser("sample", help="Monte Carlo over random state pairs")
    sp.add_argument("--ensemble", choices=("page", "charge"), default=S, help="default page, or the config's experiment")
    sp.add_argument("--n", type=_int_list, default=S)
    sp.add_argument("--samples", type=int, default=S, help="state pairs per point (default 500)")
    sp.add_argument("--q", type=float, default=S, help="Hamming weight minus N/2 (charge ensemble)")
    common(sp)

    sp = sub.add_parser("syk", help="SYK band-center eigenstates")
    sp.add_argument("--n-majorana", dest="n", type=_int_list, default=S)
    sp.add_argument("--realizations", type=int, default=S, help="default 50 (10 above 18 Majoranas)")
    sp.add_argument("--states", type=int, default=S, help="eigenstates per realization (default 10)")
    common(sp)

    sp = sub.add_parser("ising", help="Ising-chain momentum-sector eigenstates")
    sp.add_argument("--n", type=_int_list, default=S)
    sp.add_argument("--k", type=int, default=S, help="momentum index (default 0)")
    sp.add_argument("--states", type=int, default=S, help="eigenstates (default 7)")
    sp.add_argument("--window", type=_window, default=S, help="per-site energy window lo,hi")
    common(sp, seeded=False)

    sp = sub.add_parser("combinatorics-table", help="non-crossing permutation counts")
    sp.add_argument("--n", type=_int_list, default=S)
    sp.add_argument("--kind", choices=("narayana", "even", "kreweras"), default=S)
    sp.add_argument("--config")
    sp.add_argument("--out", default=S)
    return p


def _experiment(args) -> str | None:
    if args.command != "sample":
        return args.command
    if hasattr(args, "ensemble"):
        return f"sample-{args.ensemble}"
    # without --ensemble a config file decides, falling back to page
    return None if args.config else "sample-page"


def config_from_args(args) -> ExperimentConfig:
    skip = {"command", "config", "gnuplot", "ensemble"}
    overrides = {k: v for k, v in vars(args).items() if k not in skip}
    experiment = _experiment(args)
    if experiment is not None:
        overrides["experiment"] = experiment
    if not args.config:
        return ExperimentConfig.from_dict(overrides)
    cfg = load_config(args.config, overrides)
    if args.command == "sample" and not cfg.experiment.startswith("sample-"):
        raise ConfigError(f"'{cfg.experiment}' does not match subcommand 'sample'", "experiment", source=args.config)
    return cfg


def _print_table(rows, out):
    header = ("k", "count") + (("cycle types",) if any(r.breakdown for r in rows) else ())
    body = [(str(r.k), str(r.count)) + ((r.breakdown,) if len(header) == 3 else ()) for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header[:2])]
    last_n = None
    for r, b in zip(rows, body):
        if r.n != last_n:
            if last_n is not None:
                out.write("\n")
            out.write(f"n = {r.n}\n")
            out.write("  ".join(h.rjust(w) for h, w in zip(header, widths + [0])).rstrip() + "\n")
            last_n = r.n
        out.write("  ".join(c.rjust(w) if w else c for c, w in zip(b, widths + [0])) + "\n")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"tracedist: error: {exc}", file=sys.stderr)
        return 2
    try:
        rows = run(cfg)
        if args.command == "combinatorics-table":
            _print_table(rows, sys.stdout)
            if cfg.out:
                emit_csv(rows, cfg.out)
            return 0
        columns = COLUMNS[args.command]
        emit_csv(rows, cfg.out if cfg.out else sys.stdout, columns)
        if args.gnuplot:
            emit_gnuplot(rows, args.gnuplot, columns)
    except ConfigError as exc:
        print(f"tracedist: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures map to exit code 1
        print(f"tracedist: runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
