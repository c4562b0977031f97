"""
qvanish command line.

Exit codes: 0 success or verified, 1 a mathematical check failed, 2 usage or
parameter error. Payloads go to stdout; status lines and errors to stderr.

Values that start with '-' must be attached with '=', e.g. --num=-4,-5:9 or --pre=-1:-2.
"""
import argparse
import sys
from typing import List, Optional

from src.cli.parsing import parse_product, parse_range
from src.core.products import BilateralSpecialization, cancellation_check, expand_product, verify_1psi1, verify_jtp
from src.partitions.restricted import (
    RestrictedPartitionSpec,
    count_parity_split,
    count_restricted,
    enumerate_restricted,
    parity_split_spec,
    parity_zero_residue,
    parse_residues,
    partitions_to_json,
    signed_sum,
    verify_parity_identity,
)
from src.theorems.catalog import verify_catalog
from src.theorems.vanishing import (
    AlladiGordonParams,
    AndrewsBressoudParams,
    McLaughlinParams,
    SIGNS,
    alladi_gordon_counterpart,
    andrews_bressoud_counterpart,
    params_from_dict,
    scan,
    verify_vanishing,
)
from src.utils.config import OUTPUT_FORMATS, RunConfig, load_config
from src.utils.console import error, info, progress
from src.utils.data_loader import dumps_json, load_jsonl, write_csv, write_jsonl
from src.utils.errors import InvalidParams, QSeriesError

REPORT_HEADER = ["family", "params", "r", "order", "zero_class", "verified", "violation_count"]

_REQUIRED = {
    "ab": ("k", "r"),
    "mcl": ("k", "m", "s", "t"),
    "ag": ("m", "k", "s"),
    "1psi1": ("m", "k", "t", "r"),
    "jtp": ("M", "a"),
    "lambert-cancel": ("m", "k", "s", "t"),
    "signed-sum": ("m", "k", "s", "t"),
    "parity": ("m", "k", "s", "t"),
}


def _require(args, what: str):
    missing = [f"-{name}" for name in _REQUIRED[what] if getattr(args, name, None) is None]
    if missing:
        raise InvalidParams(f"{what} needs {' '.join(missing)}")


def _report_row(report) -> list:
    params = " ".join(f"{k}={v}" for k, v in report.params.items())
    return [report.family, params, report.r, report.order, str(report.zero_class),
            report.verified, len(report.violations)]


def _write_reports_csv(reports):
    write_csv(sys.stdout, REPORT_HEADER, (_report_row(r) for r in reports))


# --- expand ---------------------------------------------------------------------

def cmd_expand(args, config: RunConfig) -> int:
    spec = parse_product(args.num, args.den, args.pre)
    series = expand_product(spec, config.order)
    pairs = [(e, c) for e, c in series.items() if c != 0 or not args.nonzero]
    if config.format == "json":
        print(dumps_json({
            "product": str(spec),
            "valuation": series.valuation,
            "order": series.order,
            "coefficients": [[e, str(c)] for e, c in pairs],
        }))
    elif config.format == "csv":
        write_csv(sys.stdout, ["exponent", "coefficient"], pairs)
    elif args.compact:
        print(series)
    else:
        for e, c in pairs:
            print(f"{e} {c}")
    return 0


# --- verify ---------------------------------------------------------------------

def _theorem_params(args):
    _require(args, args.family)
    if args.family == "ab":
        return AndrewsBressoudParams(k=args.k, r=args.r)
    if args.family == "mcl":
        return McLaughlinParams(k=args.k, m=args.m, s=args.s, t=args.t, sign=args.sign)
    return AlladiGordonParams(m=args.m, k=args.k, s=args.s, sign=args.sign)


def cmd_verify(args, config: RunConfig) -> int:
    params = _theorem_params(args)
    report = verify_vanishing(params, config.order, config.min_class_samples)
    if config.format == "json":
        print(dumps_json(report.to_dict(config.violation_preview)))
    elif config.format == "csv":
        _write_reports_csv([report])
    else:
        print(report.summary_line(config.violation_preview))
        print(f"product: {report.product}")
        observed = ", ".join(str(c) for c in report.observed_zero_classes) or "none"
        print(f"observed zero classes mod {report.zero_class.modulus}: {observed}")
        if isinstance(params, McLaughlinParams):
            for label, other in (("Alladi-Gordon", alladi_gordon_counterpart(params)),
                                 ("Andrews-Bressoud", andrews_bressoud_counterpart(params))):
                if other is not None:
                    fields = " ".join(f"{k}={v}" for k, v in other.describe().items())
                    print(f"{label} counterpart: {fields}, class {other.zero_class()}")
    return 0 if report.verified else 1


# --- scan -----------------------------------------------------------------------

def cmd_scan(args, config: RunConfig) -> int:
    k_range = parse_range(args.k_range, "--k-range")
    if args.m_range is None:
        if args.family != "ab":
            raise InvalidParams(f"--m-range is required for family {args.family}")
        m_range = range(0)
    else:
        m_range = parse_range(args.m_range, "--m-range")

    result = scan(k_range, m_range, config.order, args.family, sign=args.sign, workers=config.workers,
                  show_progress=config.progress, min_class_samples=config.min_class_samples)

    if args.output:
        written = write_jsonl(args.output, (r.to_dict(config.violation_preview) for r in result.reports))
        info(f"Wrote {written} reports to {args.output}")

    if config.format == "json":
        print(dumps_json({
            "family": result.family,
            "order": result.order,
            "checked": len(result.reports),
            "violated": len(result.violated),
            "skipped": [{"params": params, "reason": reason} for params, reason in result.skipped],
            "reports": [r.to_dict(config.violation_preview) for r in result.reports],
        }))
    elif config.format == "csv":
        _write_reports_csv(result.reports)
    else:
        for report in (result.reports if args.verbose else result.violated):
            print(report.summary_line(config.violation_preview))
        print(result.summary_line())
    return 0 if result.all_verified else 1


# --- recheck --------------------------------------------------------------------

def cmd_recheck(args, config: RunConfig) -> int:
    try:
        rows = load_jsonl(args.reports)
    except OSError as e:
        raise InvalidParams(f"cannot read {args.reports}: {e.strerror}")
    if not rows:
        raise InvalidParams(f"no reports found in {args.reports}")
    instances = []
    for row in rows:
        try:
            instances.append(params_from_dict(row["family"], row["params"]))
        except (KeyError, TypeError) as e:
            raise InvalidParams(f"{args.reports}: malformed report {row!r} ({e})")

    reports = [verify_vanishing(p, config.order, config.min_class_samples)
               for p in progress(instances, desc="Rechecking", enabled=config.progress)]
    violated = [r for r in reports if not r.verified]
    if config.format == "json":
        print(dumps_json({
            "order": config.order,
            "checked": len(reports),
            "violated": len(violated),
            "reports": [r.to_dict(config.violation_preview) for r in reports],
        }))
    elif config.format == "csv":
        _write_reports_csv(reports)
    else:
        for report in (reports if args.verbose else violated):
            print(report.summary_line(config.violation_preview))
        print(f"{len(reports)} reports rechecked, {len(violated)} violated (order {config.order})")
    return 0 if not violated else 1


# --- partitions -----------------------------------------------------------------

def _restricted_spec(args) -> RestrictedPartitionSpec:
    return RestrictedPartitionSpec(modulus=args.modulus, repeatable_residues=parse_residues(args.rep),
                                   distinct_residues=parse_residues(args.dist), max_part=args.max_part)


def _print_partitions(partitions, fmt: str, n: int, label: Optional[str] = None) -> dict:
    if fmt == "text":
        if label:
            print(f"{label} ({len(partitions)}):")
        for p in partitions:
            print(p)
    return {"n": n, "count": len(partitions), "partitions": partitions_to_json(partitions)}


def _partitions_count(args, config: RunConfig) -> int:
    count = count_restricted(_restricted_spec(args), args.n)
    if config.format == "json":
        print(dumps_json({"n": args.n, "count": count}))
    elif config.format == "csv":
        write_csv(sys.stdout, ["n", "count"], [(args.n, count)])
    else:
        print(count)
    return 0


def _partitions_enumerate(args, config: RunConfig) -> int:
    found = enumerate_restricted(_restricted_spec(args), args.n, cap=config.enumeration_cap, parity=args.parity)
    if config.format == "csv":
        write_csv(sys.stdout, ["partition", "num_parts"], ((str(p), p.num_parts) for p in found))
        return 0
    payload = _print_partitions(found, config.format, args.n)
    if config.format == "json":
        print(dumps_json(payload))
    return 0


def _partitions_signed_sum(args, config: RunConfig) -> int:
    _require(args, "signed-sum")
    result = signed_sum(args.m, args.k, args.s, args.t, args.n)
    if config.format == "json":
        print(dumps_json({
            "params": {"m": args.m, "k": args.k, "s": args.s, "t": args.t, "n": args.n},
            "terms": [{"j": t.j, "argument": t.argument, "count": t.count, "signed": t.signed_count}
                      for t in result.terms],
            "total": result.total,
        }))
    elif config.format == "csv":
        write_csv(sys.stdout, ["j", "argument", "count", "signed"],
                  ((t.j, t.argument, t.count, t.signed_count) for t in result.terms))
    else:
        if args.show_terms:
            print(f"{'j':>4} {'argument':>9} {'(-1)^j p(argument)':>20}")
            for t in result.terms:
                print(f"{t.j:>4} {t.argument:>9} {t.signed_count:>20}")
        print(f"sum = {result.total}")
    return 0 if result.total == 0 else 1


def _partitions_parity(args, config: RunConfig) -> int:
    _require(args, "parity")
    if args.n_max is not None:
        report = verify_parity_identity(args.m, args.k, args.s, args.t, args.n_max)
        if config.format == "json":
            print(dumps_json({
                "params": {"m": args.m, "k": args.k, "s": args.s, "t": args.t},
                "n_max": report.n_max,
                "zero_class": {"mod": args.k, "res": report.residue},
                "checked": report.checked,
                "verified": report.verified,
                "violations": [[n, pair.even_count, pair.odd_count] for n, pair in report.violations],
            }))
        elif config.format == "csv":
            write_csv(sys.stdout, ["n", "even", "odd"],
                      ((n, pair.even_count, pair.odd_count) for n, pair in report.violations))
        else:
            print(report.summary_line())
        return 0 if report.verified else 1

    if args.n is None:
        raise InvalidParams("partitions parity needs -n or --n-max")
    pair = count_parity_split(args.m, args.k, args.s, args.t, args.n)
    in_class = args.n % args.k == parity_zero_residue(args.m, args.k, args.s, args.t)
    payload = {"n": args.n, "even": pair.even_count, "odd": pair.odd_count, "in_zero_class": in_class}

    if config.format == "csv":
        write_csv(sys.stdout, ["n", "even", "odd"], [(args.n, pair.even_count, pair.odd_count)])
    else:
        if config.format == "text":
            print(f"p^e({args.n}) = {pair.even_count}, p^o({args.n}) = {pair.odd_count}")
        if args.enumerate:
            spec = parity_split_spec(args.m, args.k, args.s, args.t)
            for parity in ("odd", "even"):
                found = enumerate_restricted(spec, args.n, cap=config.enumeration_cap, parity=parity)
                payload[parity + "_partitions"] = _print_partitions(found, config.format, args.n, parity)["partitions"]
        if config.format == "json":
            print(dumps_json(payload))
    return 1 if in_class and pair.difference else 0


_PARTITION_COMMANDS = {
    "count": _partitions_count,
    "enumerate": _partitions_enumerate,
    "signed-sum": _partitions_signed_sum,
    "parity": _partitions_parity,
}


def cmd_partitions(args, config: RunConfig) -> int:
    return _PARTITION_COMMANDS[args.partitions_command](args, config)


# --- identity -------------------------------------------------------------------

def cmd_identity(args, config: RunConfig) -> int:
    _require(args, args.which)
    if args.which == "jtp":
        check = verify_jtp(args.M, args.a, config.order)
    elif args.which == "1psi1":
        check = verify_1psi1(BilateralSpecialization(args.m, args.k, args.t, args.r), config.order)
    else:
        r = args.r if args.r is not None else args.s * args.m + args.t
        check = cancellation_check(BilateralSpecialization(args.m, args.k, args.t, r), args.s, config.order)

    if config.format == "json":
        print(dumps_json(check.to_dict()))
    elif config.format == "csv":
        write_csv(sys.stdout, ["identity", "order", "holds", "exponent", "left", "right"],
                  [(check.name, check.order, check.holds, check.exponent, check.left, check.right)])
    else:
        print(check.describe())
    return 0 if check.holds else 1


# --- named catalog --------------------------------------------------------------

def cmd_catalog(args, config: RunConfig) -> int:
    checks = verify_catalog(config.order, args.names, config.min_class_samples)
    passed = sum(c.passed for c in checks)
    if config.format == "json":
        print(dumps_json([{
            "name": c.entry.name,
            "description": c.entry.description,
            "product": str(c.entry.displayed),
            "zero_class": c.entry.zero_class.to_dict(),
            "spec_matches": c.spec_matches,
            "class_matches": c.class_matches,
            "passed": c.passed,
            "report": c.report.to_dict(config.violation_preview),
        } for c in checks]))
    elif config.format == "csv":
        write_csv(sys.stdout, ["name", "product", "zero_class", "passed"],
                  ((c.entry.name, c.entry.displayed, c.entry.zero_class, c.passed) for c in checks))
    else:
        for c in checks:
            print(c.summary_line())
        print(f"{passed}/{len(checks)} catalog entries passed at order {config.order}")
    return 0 if passed == len(checks) else 1


# --- parser ---------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="YAML config (default: config/default.yaml).")
    common.add_argument("--order", type=int, default=None, help="Truncation order N; coefficients below q^N are exact.")
    common.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="Output format.")
    return common


def _theorem_args(parser: argparse.ArgumentParser, letters: str):
    for name in letters:
        parser.add_argument(f"-{name}", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qvanish", description="Exact q-series expansion and vanishing-coefficient checks.")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("expand", parents=[common], help="Expand a quotient of q-Pochhammer products.")
    p.add_argument("--num", action="append", default=[], help="Numerator group 'a,b,...:M'; '-a' negates the argument.")
    p.add_argument("--den", action="append", default=[], help="Denominator group 'a,b,...:M'.")
    p.add_argument("--pre", default=None, help="Monomial prefactor 'sign:exponent', e.g. --pre=-1:-2.")
    p.add_argument("--nonzero", action="store_true", help="List nonzero coefficients only.")
    p.add_argument("--compact", action="store_true", help="Print the series as one line (text format).")
    p.set_defaults(handler=cmd_expand)

    p = commands.add_parser("verify", parents=[common], help="Check one theorem instance.")
    p.add_argument("--family", choices=("ab", "mcl", "ag"), required=True)
    p.add_argument("--sign", choices=SIGNS, default="plus")
    _theorem_args(p, "kmstr")
    p.set_defaults(handler=cmd_verify)

    p = commands.add_parser("scan", parents=[common], help="Verify every valid tuple of a parameter grid.")
    p.add_argument("--family", choices=("plus", "minus", "ab", "ag"), required=True)
    p.add_argument("--sign", choices=SIGNS, default="plus", help="Denominator sign for family ag.")
    p.add_argument("--k-range", required=True, help="'a..b' or a single integer.")
    p.add_argument("--m-range", default=None, help="'a..b' or a single integer (not used by ab).")
    p.add_argument("--workers", type=int, default=None, help="Worker processes.")
    p.add_argument("--output", default=None, help="Also write every report to this JSONL file.")
    p.add_argument("--verbose", action="store_true", help="List every report, not only violations.")
    p.set_defaults(handler=cmd_scan)

    p = commands.add_parser("recheck", parents=[common], help="Re-verify the reports of a scan JSONL file.")
    p.add_argument("reports", help="JSONL file written by scan --output.")
    p.add_argument("--verbose", action="store_true", help="List every report, not only violations.")
    p.set_defaults(handler=cmd_recheck)

    p = commands.add_parser("partitions", help="Restricted partition counts and listings.")
    sub = p.add_subparsers(dest="partitions_command", required=True)
    for name in ("count", "enumerate"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--modulus", type=int, required=True)
        q.add_argument("--rep", default="", help="Residues of repeatable parts, e.g. 0,1,29.")
        q.add_argument("--dist", default="", help="Residues of parts used at most once.")
        q.add_argument("--max-part", type=int, default=None)
        q.add_argument("-n", type=int, required=True)
        if name == "enumerate":
            q.add_argument("--parity", choices=("even", "odd"), default=None, help="Keep partitions with this many parts.")
            q.add_argument("--cap", type=int, default=None, help="Refuse to list more partitions than this.")
    q = sub.add_parser("signed-sum", parents=[common])
    _theorem_args(q, "mkst")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("--show-terms", action="store_true")
    q = sub.add_parser("parity", parents=[common])
    _theorem_args(q, "mkst")
    q.add_argument("-n", type=int, default=None)
    q.add_argument("--n-max", type=int, default=None, help="Check p^e = p^o on the zero class up to this n.")
    q.add_argument("--enumerate", action="store_true", help="List the odd and even partitions of n.")
    q.add_argument("--cap", type=int, default=None)
    p.set_defaults(handler=cmd_partitions)

    p = commands.add_parser("identity", parents=[common], help="Compare both sides of an identity.")
    p.add_argument("which", choices=("1psi1", "jtp", "lambert-cancel"))
    _theorem_args(p, "mkstraM")
    p.set_defaults(handler=cmd_identity)

    p = commands.add_parser("catalog", parents=[common], help="Verify the catalog of named products.")
    p.add_argument("names", nargs="*", help="Catalog entries to check (default: all).")
    p.set_defaults(handler=cmd_catalog)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        config = load_config(args.config).with_overrides(
            order=args.order,
            format=args.format,
            workers=getattr(args, "workers", None),
            enumeration_cap=getattr(args, "cap", None),
        )
        return args.handler(args, config)
    except QSeriesError as e:
        error(str(e))
        return 2
