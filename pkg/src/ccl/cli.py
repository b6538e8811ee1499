"""Command-line interface.

Subcommands: build (enumerate and cache), counts (fixed-dimension table
plus the exponent product check), verify <identity>, and report (the full
suite as a JSON array).  Exit codes: 0 all passed, 1 a verification
failed, 2 usage or configuration error.  Reports go to stdout; diagnostics
go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .angles import McConfig
from .cache import cache_path_for, load_or_enumerate, save_group
from .errors import CclError, FeatureDisabledError, UnsupportedGroupError
from .groups import enumerate_group, solomon_check
from .linalg import ToleranceConfig
from .roots import SUPPORTED_TYPES, GroupType, build
from .verify import SUITE_IDENTITIES, run_suite

USAGE_ERROR = 2


def _add_common(p: argparse.ArgumentParser, need_group: bool = True):
    p.add_argument("--group", required=need_group,
                   help="group spec, e.g. A2, B4, D4, I2(7), H3, F4, H4")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=1_000_000,
                   help="Monte Carlo samples per measured cone")
    p.add_argument("--trials", type=int, default=100,
                   help="generic-point trials per counting check")
    p.add_argument("--chunk-size", type=int, default=65_536)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--k", type=int, default=None,
                   help="restrict k-indexed identities to one k")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cache-path", type=Path, default=None)
    p.add_argument("--no-cache", action="store_true",
                   help="always enumerate in memory")
    p.add_argument("--enable-h4", action="store_true",
                   help="allow the 14400-element H4 group")
    p.add_argument("--eps-membership", type=float, default=None)
    p.add_argument("--eps-rank", type=float, default=None)
    p.add_argument("--eps-root-match", type=float, default=None)
    p.add_argument("--generic-margin", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ccl",
        description="chamber cone angle measures of finite reflection groups")
    ap.add_argument("--version", action="version", version=f"ccl {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="enumerate a group and write its cache file")
    _add_common(p)

    p = sub.add_parser("counts", help="print the |W^k| table and exponent check")
    _add_common(p)

    p = sub.add_parser("verify", help="verify one identity (or all) for a group")
    p.add_argument("identity", choices=SUITE_IDENTITIES + ("all",))
    _add_common(p)

    p = sub.add_parser("report", help="run the full suite; emit a JSON array")
    _add_common(p, need_group=False)
    p.add_argument("--all-groups", action="store_true",
                   help="run over the whole supported catalog")
    return ap


def _tolerances(args) -> ToleranceConfig:
    kw = {}
    if args.eps_membership is not None:
        kw["eps_membership"] = args.eps_membership
    if args.eps_rank is not None:
        kw["eps_rank"] = args.eps_rank
    if args.eps_root_match is not None:
        kw["eps_root_match"] = args.eps_root_match
    if args.generic_margin is not None:
        kw["generic_margin"] = args.generic_margin
    return ToleranceConfig(**kw)


def _get_group(args, tol: ToleranceConfig, spec: str):
    t = GroupType.parse(spec)
    rs = build(t, tol, enable_h4=args.enable_h4)
    if args.no_cache:
        return rs, enumerate_group(rs)
    path = args.cache_path or cache_path_for(t)
    return rs, load_or_enumerate(rs, path)


REPORT_SCHEMA_VERSION = 1


def _report_dict(r, identity: str) -> dict:
    d = r.to_dict()
    d["identity"] = identity
    d["tool_version"] = __version__
    d["schema_version"] = REPORT_SCHEMA_VERSION
    return d


def _emit(reports, fmt: str, out) -> None:
    if fmt == "json":
        docs = [_report_dict(r, r.identity_name) for r in reports]
        json.dump(docs, out, sort_keys=True, indent=2)
        out.write("\n")
        return
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        kpart = "-" if r.k is None else str(r.k)
        out.write(
            f"{status} {r.identity_name:<13s} {r.group:<7s} k={kpart:<2s} "
            f"lhs={r.lhs:.12g} rhs={r.rhs_numerator}/{r.rhs_denominator} "
            f"err={r.abs_error:.3g} stderr={r.combined_stderr:.3g} "
            f"seed={r.seed}\n")


def _cmd_build(args, tol) -> int:
    t = GroupType.parse(args.group)
    rs = build(t, tol, enable_h4=args.enable_h4)
    g = enumerate_group(rs)
    path = args.cache_path or cache_path_for(t)
    save_group(g, path)
    print(f"wrote {path} (|W| = {g.order}, {rs.num_roots} roots)")
    return 0


def _cmd_counts(args, tol) -> int:
    rs, g = _get_group(args, tol, args.group)
    ok = solomon_check(g, rs.exponents)
    if args.format == "json":
        doc = {
            "group": str(rs.group_type),
            "order": g.order,
            "counts_by_fixed_dim": list(g.counts_by_fixed_dim),
            "exponents": list(rs.exponents),
            "exponent_product_check": ok,
            "num_positive_roots": rs.num_positive_roots,
            "tool_version": __version__,
            "schema_version": REPORT_SCHEMA_VERSION,
        }
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        print(f"group {rs.group_type}: |W| = {g.order}, "
              f"{rs.num_positive_roots} positive roots")
        for k, c in enumerate(g.counts_by_fixed_dim):
            print(f"  |W^{k}| = {c}")
        print(f"exponents {rs.exponents}: "
              f"product check {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _cmd_verify(args, tol) -> int:
    rs, g = _get_group(args, tol, args.group)
    mc = McConfig(samples=args.samples, seed=args.seed,
                  chunk_size=args.chunk_size, workers=args.workers)
    names = SUITE_IDENTITIES if args.identity == "all" else (args.identity,)
    reports = run_suite(rs, g, names, k=args.k, mc=mc, trials=args.trials,
                        seed=args.seed, tol=tol)
    _emit(reports, args.format, sys.stdout)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_report(args, tol) -> int:
    if args.all_groups:
        specs = [str(t) for t in SUPPORTED_TYPES
                 if t.family != "H4" or args.enable_h4]
    elif args.group:
        specs = [args.group]
    else:
        raise UnsupportedGroupError("report needs --group or --all-groups")
    mc = McConfig(samples=args.samples, seed=args.seed,
                  chunk_size=args.chunk_size, workers=args.workers)
    docs = []
    all_ok = True
    for spec in specs:
        rs, g = _get_group(args, tol, spec)
        reports = run_suite(rs, g, k=args.k, mc=mc, trials=args.trials,
                            seed=args.seed, tol=tol)
        all_ok &= all(r.passed for r in reports)
        if args.format == "text":
            _emit(reports, "text", sys.stdout)
        else:
            docs.extend(_report_dict(r, r.identity_name) for r in reports)
    if args.format != "text":
        json.dump(docs, sys.stdout, sort_keys=True, indent=2)
        sys.stdout.write("\n")
    return 0 if all_ok else 1


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(exc.code or 0)
    try:
        tol = _tolerances(args)
        if args.command == "build":
            return _cmd_build(args, tol)
        if args.command == "counts":
            return _cmd_counts(args, tol)
        if args.command == "verify":
            return _cmd_verify(args, tol)
        if args.command == "report":
            return _cmd_report(args, tol)
        raise UnsupportedGroupError(f"unknown command {args.command}")
    except (UnsupportedGroupError, FeatureDisabledError) as exc:
        print(f"ccl: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except CclError as exc:
        print(f"ccl: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
