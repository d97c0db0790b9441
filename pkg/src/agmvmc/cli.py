"""Command-line entry point.

Subcommands: train, ed, exact-learn, hyperopt, disorder-sweep,
export-csv.  Exit codes: 0 ok, 2 config error, 3 numeric fault.
"""

import argparse
import sys
from dataclasses import replace

from .config import load_config
from .errors import ConfigError, NumericFault
from .harness import (cmd_disorder_sweep, cmd_ed, cmd_exact_learn, cmd_export_csv,
                      cmd_hyperopt, cmd_train)


def _add_common(p, need_config=True):
    p.add_argument("--config", required=need_config, help="path to the JSON experiment config")
    p.add_argument("--seed", type=int, default=None,
                   help="override the train seed and search seed")
    p.add_argument("--out", default=None, help="output directory (default: output.run_dir)")


def build_parser():
    ap = argparse.ArgumentParser(prog="agmvmc",
                                 description="variational ground-state solver for stoquastic spin models")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("train", "ed", "exact-learn", "hyperopt", "disorder-sweep"):
        _add_common(sub.add_parser(name))
    pe = sub.add_parser("export-csv")
    pe.add_argument("log", help="path to a train.jsonl run log")
    pe.add_argument("--out", default=None, help="directory for the CSV (default: alongside the log)")
    return ap


def _load(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        if cfg.train is not None:
            cfg.train = replace(cfg.train, seed=args.seed)
        cfg.search_seed = args.seed
    return cfg


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "export-csv":
            dest = cmd_export_csv(args.log, args.out)
            print(dest)
            return 0
        cfg = _load(args)
        fn = {"train": cmd_train, "ed": cmd_ed, "exact-learn": cmd_exact_learn,
              "hyperopt": cmd_hyperopt, "disorder-sweep": cmd_disorder_sweep}[args.command]
        report = fn(cfg, args.out)
        for key in sorted(report):
            print(f"{key}: {report[key]}")
        return 0
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except NumericFault as e:
        print(f"numeric fault: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
