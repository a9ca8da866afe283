"""Command line entry point: ``pvbounds <command> ...``.

Exit codes: 0 when no record failed, 1 when at least one did, 2 on a usage
or configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import charsum, lfunc
from .harness import (ConfigError, config_from_mapping, emit_report, exit_code, load_config,
                      load_report, run_sweep, summary_lines, write_report)
from .records import Summary
from .statements import DEFAULT_SEED, STATEMENTS

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(p):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pvbounds", description="Numerical verification of explicit character-sum bounds.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="run one statement, optionally with key=value range overrides")
    p.add_argument("statement")
    p.add_argument("ranges", nargs="*", metavar="key=value")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--timing", action="store_true")
    _common(p)

    p = sub.add_parser("sweep", help="run the statements selected by a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    _common(p)

    p = sub.add_parser("scan-pv", help="CSV of S(chi)/(sqrt q log q) for primitive characters")
    p.add_argument("--qmax", type=int, required=True)
    p.add_argument("--qmin", type=int, default=3)
    _common(p)

    p = sub.add_parser("scan-zeros", help="real-zero scans for fundamental discriminants |d| <= dmax")
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--sigma-lo", type=float, default=0.8)
    p.add_argument("--sigma-hi", type=float, default=0.999)
    p.add_argument("--step", type=float, default=1e-3)
    _common(p)

    p = sub.add_parser("constants", help="closed-form right-hand sides at (q, ell, alpha)")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--alpha", type=float, default=25.0)
    _common(p)

    p = sub.add_parser("report", help="re-emit a saved record file and summarize it")
    p.add_argument("input")
    p.add_argument("--format", choices=("csv", "json"), required=True)
    _common(p)

    sub.add_parser("list", help="list statement ids")
    return parser


def _write(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_config(cfg) -> int:
    summary, records = run_sweep(cfg)
    if not cfg.out:
        sys.stdout.write(emit_report(records, cfg.format))
    for line in summary_lines(summary):
        print(line, file=sys.stderr)
    return exit_code(summary)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"pvbounds: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pvbounds: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _overrides(args, **extra):
    out = {"seed": args.seed, "workers": args.workers, "out": args.out}
    out.update(extra)
    return out


def _dispatch(args) -> int:
    if args.command == "list":
        for sid, st in STATEMENTS.items():
            print(f"{sid}\t{st.description}")
        return EXIT_OK
    if args.command == "verify":
        kv = {"statements": args.statement}
        for item in args.ranges:
            if "=" not in item:
                raise ConfigError(f"range override {item!r} is not key=value")
            k, v = item.split("=", 1)
            kv[k.strip()] = v.strip()
        cfg = config_from_mapping(kv, **_overrides(args, format=args.format,
                                                    timing="true" if args.timing else None))
        return _run_config(cfg)
    if args.command == "sweep":
        return _run_config(load_config(args.config, **_overrides(args, format=args.format)))
    if args.command == "scan-pv":
        fh = open(args.out, "w") if args.out else sys.stdout
        try:
            charsum.write_pv_csv(range(args.qmin, args.qmax + 1), fh)
        finally:
            if args.out:
                fh.close()
        return EXIT_OK
    if args.command == "scan-zeros":
        reports = [lfunc.scan_real_zeros(d, args.sigma_lo, args.sigma_hi, args.step)
                   for d in lfunc.fundamental_discriminants(-args.dmax, args.dmax)]
        _write("[\n" + ",\n".join("  " + r.to_json() for r in reports) + "\n]\n", args.out)
        found = sum(len(r.brackets) for r in reports)
        print(f"discriminants: {len(reports)}  sign changes: {found}  "
              f"indeterminate points: {sum(len(r.indeterminate) for r in reports)}", file=sys.stderr)
        return EXIT_FAIL if found else EXIT_OK
    if args.command == "constants":
        if args.q < 16 or args.ell < 1:
            raise ConfigError("need q >= 16 and ell >= 1")
        _write(json.dumps(charsum.constants_table(args.q, args.ell, args.alpha), indent=2, sort_keys=True) + "\n",
               args.out)
        return EXIT_OK
    if args.command == "report":
        try:
            records = load_report(args.input)
        except (ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot parse {args.input}: {exc}") from exc
        if args.out:
            write_report(records, args.out, args.format)
        else:
            sys.stdout.write(emit_report(records, args.format))
        summary = Summary.of(records)
        for line in summary_lines(summary):
            print(line, file=sys.stderr)
        return exit_code(summary)
    raise ConfigError(f"unknown command {args.command}")


if __name__ == "__main__":
    raise SystemExit(main())
