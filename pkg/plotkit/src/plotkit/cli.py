"""Command-line entry points: plot-trace, plot-orders, plot-disorder.

Each tool reads run-artifact CSVs, writes one figure file (``--out``), and
prints the written path.  Schema violations exit with status 2 and an
error message on stderr that names the offending file.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable, Sequence

from .figures import plot_disorder_delta, plot_energy_trace, plot_order_profile
from .schemas import Reference, SchemaError

__all__ = ["main_trace", "main_orders", "main_disorder"]


def _parse_reference(text: str) -> Reference:
    """Parse ``LABEL=VALUE`` or a bare number into a Reference."""
    label, sep, value = text.partition("=")
    try:
        if sep:
            return Reference(label=label, value=float(value))
        return Reference(label=text, value=float(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected NUMBER or LABEL=NUMBER, got {text!r}"
        ) from exc


def _run(build: Callable[[], object]) -> int:
    try:
        out = build()
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def main_trace(argv: Sequence[str] | None = None) -> int:
    """Energy-vs-time figure from one or more trace CSV exports."""
    parser = argparse.ArgumentParser(
        prog="plot-trace",
        description=(
            "Plot energy vs wall time (with stderr bands) from training-log "
            "CSV exports; optional horizontal reference lines."
        ),
    )
    parser.add_argument("csv", nargs="+", help="trace CSV file(s)")
    parser.add_argument("--out", required=True, help="output figure file")
    parser.add_argument(
        "--ref",
        action="append",
        default=[],
        type=_parse_reference,
        metavar="LABEL=VALUE",
        help="horizontal reference line (repeatable); bare numbers work too",
    )
    parser.add_argument(
        "--label",
        action="append",
        default=None,
        metavar="NAME",
        help="series label, once per CSV (default: file stem)",
    )
    parser.add_argument(
        "--log-time", action="store_true", help="logarithmic time axis"
    )
    parser.add_argument("--title", default=None, help="figure title")
    args = parser.parse_args(argv)
    if args.label is not None and len(args.label) != len(args.csv):
        parser.error(
            f"got {len(args.label)} --label values for {len(args.csv)} CSV files"
        )
    return _run(
        lambda: plot_energy_trace(
            args.csv,
            references=args.ref,
            out=args.out,
            labels=args.label,
            log_time=args.log_time,
            title=args.title,
        )
    )


def main_orders(argv: Sequence[str] | None = None) -> int:
    """Interaction-order magnitude figure from an order-profile CSV."""
    parser = argparse.ArgumentParser(
        prog="plot-orders",
        description=(
            "Plot coefficient magnitude per interaction order from an "
            "order-profile CSV (columns site,order,max_abs,l1)."
        ),
    )
    parser.add_argument("csv", help="order-profile CSV file")
    parser.add_argument("--out", required=True, help="output figure file")
    parser.add_argument(
        "--site",
        default="all",
        help="site label to plot: a site index or 'all' (default)",
    )
    parser.add_argument(
        "--value",
        choices=("max_abs", "l1"),
        default="max_abs",
        help="which magnitude column to plot (default: max_abs)",
    )
    parser.add_argument(
        "--linear",
        action="store_true",
        help="linear magnitude axis (default: log scale)",
    )
    parser.add_argument("--title", default=None, help="figure title")
    args = parser.parse_args(argv)
    return _run(
        lambda: plot_order_profile(
            args.csv,
            out=args.out,
            site=args.site,
            value=args.value,
            log_scale=not args.linear,
            title=args.title,
        )
    )


def main_disorder(argv: Sequence[str] | None = None) -> int:
    """Disorder-average figure from one or more summary CSVs."""
    parser = argparse.ArgumentParser(
        prog="plot-disorder",
        description=(
            "Plot disorder-averaged final energy (mean ± stderr) vs coupling "
            "strength from summary CSVs (columns "
            "g,mean_energy,stderr,n_ok,n_failed)."
        ),
    )
    parser.add_argument("csv", nargs="+", help="disorder-summary CSV file(s)")
    parser.add_argument("--out", required=True, help="output figure file")
    parser.add_argument("--title", default=None, help="figure title")
    args = parser.parse_args(argv)
    return _run(
        lambda: plot_disorder_delta(args.csv, out=args.out, title=args.title)
    )
