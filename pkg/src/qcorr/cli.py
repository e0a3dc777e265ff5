"""``qcorr ground|thermal|teleport|verify`` command-line front end.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 numeric failure.
FLAGGED verify items are findings and do not change the exit code.
"""
import argparse
import json
import logging
import sys

import numpy as np

from .errors import ConfigError, DomainError, InvalidArgument, UnsupportedParameters
from .sweep import PRESETS, emit_csv, emit_json, preset_config, run_sweep, spec_from_dict, write_csv
from .verify import render_text, report_json, verify_report

log = logging.getLogger("qcorr")

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(prog="qcorr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in ("ground", "thermal", "teleport", "verify"):
        p = sub.add_parser(mode)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--preset", help=f"built-in figure preset ({', '.join(sorted(PRESETS))})")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--workers", type=int, default=1, help="parallel worker processes for sweeps")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def load_spec(args):
    overrides = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
        try:
            overrides = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(overrides, dict):
            raise ConfigError("configuration must be a JSON object")
    if args.preset:
        cfg = preset_config(args.preset, overrides)
    elif args.config or args.mode == "verify":
        cfg = dict(overrides)
    else:
        raise ConfigError("give --config and/or --preset", field="config")
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.samples is not None:
        cfg["samples"] = args.samples
    cfg.setdefault("mode", args.mode)
    return spec_from_dict(cfg, mode=args.mode)


def run(args):
    spec = load_spec(args)
    if spec.mode == "verify":
        report = verify_report(spec.seed, spec.samples)
        text = report_json(report) if args.format == "json" else render_text(report)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            sys.stdout.write(render_text(report))
        else:
            sys.stdout.write(text)
        return EXIT_OK
    rows = run_sweep(spec, workers=args.workers)
    failed = sum(1 for r in rows if r.error)
    if failed:
        log.warning("%d of %d grid points failed; see the error column", failed, len(rows))
    if args.out:
        (emit_json if args.format == "json" else emit_csv)(rows, args.out)
    elif args.format == "json":
        from .sweep import rows_to_json

        sys.stdout.write(rows_to_json(rows) + "\n")
    else:
        write_csv(rows, sys.stdout)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.samples is not None and args.samples < 0:
        log.error("--samples must be non-negative")
        return EXIT_VALIDATION
    try:
        return run(args)
    except (ConfigError, InvalidArgument, UnsupportedParameters) as exc:
        log.error("validation error: %s", exc)
        return EXIT_VALIDATION
    except OSError as exc:
        log.error("I/O error: %s", exc)
        return EXIT_IO
    except (DomainError, ArithmeticError, np.linalg.LinAlgError) as exc:
        log.error("numeric failure: %s", exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
