"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 property
violation found, 4 interrupted (checkpoint kept).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import kernels
from .boolfun import (
    LocalRule,
    TruthTable,
    algebraic_degree,
    is_balanced,
    mobius_transform,
    nonlinearity,
    truth_table_from_wolfram,
)
from .ca import are_orthogonal, latin_square_from_rule, superposition_sbox
from .codes import ORIENTATION_NOTE, Gf2Poly, divides, generator_from_basis
from .errors import CheckpointError, DomainError
from .sbox import is_bijective, linear_components_space, sbox_nonlinearity
from .search import SearchConfig, SearchReport, run_search, stderr_progress

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_FINDING, EXIT_INTERRUPTED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class _RuleAction(argparse.Action):
    """Collect --wolfram/--tt values in command-line order."""

    def __call__(self, parser, namespace, values, option_string=None):
        rules = list(getattr(namespace, "rules", None) or [])
        rules.append((self.const, values))
        namespace.rules = rules


def _add_rule_flags(p):
    p.add_argument("--wolfram", action=_RuleAction, const="wolfram", metavar="DEC",
                   help="rule as a Wolfram number (decimal, any size)")
    p.add_argument("--tt", action=_RuleAction, const="tt", metavar="HEX",
                   help="rule as a hex truth table (index 2^d-1 is the top bit)")
    p.add_argument("-d", "--diameter", type=int, required=True)


def _parse_rule(kind: str, text: str, d: int) -> LocalRule:
    try:
        if kind == "wolfram":
            table = truth_table_from_wolfram(int(text, 10), d)
        else:
            table = TruthTable.from_hex(text, d)
    except ValueError as exc:
        raise UsageError(f"bad rule {text!r}: {exc}") from None
    return LocalRule.from_table(table)


def _rules(args, count: int) -> list[LocalRule]:
    specs = getattr(args, "rules", None) or []
    if len(specs) != count:
        raise UsageError(f"expected {count} rule(s) via --wolfram/--tt, got {len(specs)}")
    return [_parse_rule(kind, text, args.diameter) for kind, text in specs]


def _generating_string(rule: LocalRule) -> str:
    g = rule.generating
    if g.n_vars == 0:
        return str(g.value)
    # generating function variables are the central cells x2..x_{d-1}
    return mobius_transform(g).to_string(first_var=2)


def cmd_rule_info(args) -> int:
    (rule,) = _rules(args, 1)
    t = rule.table
    info = {
        "diameter": rule.diameter,
        "wolfram": str(rule.wolfram),
        "truth_table": t.to_hex(),
        "anf": mobius_transform(t).to_string(),
        "degree": algebraic_degree(t),
        "balanced": is_balanced(t),
        "nonlinearity": nonlinearity(t),
        "bipermutive": rule.is_bipermutive,
    }
    if rule.is_bipermutive:
        info["generating_function"] = _generating_string(rule)
        info["generating_table"] = rule.generating.to_hex()
    if args.format == "json":
        print(json.dumps(info, indent=2))
    else:
        for key, value in info.items():
            print(f"{key:20s} {value}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    f, g = _rules(args, 2)
    for rule in (f, g):
        if not rule.is_bipermutive:
            raise DomainError(f"{rule} is not bipermutive")
    orth = are_orthogonal(latin_square_from_rule(f), latin_square_from_rule(g))
    s = superposition_sbox(f, g)
    out = {
        "f": str(f.wolfram),
        "g": str(g.wolfram),
        "diameter": f.diameter,
        "orthogonal": orth,
        "bijective": is_bijective(s),
        "nonlinearity": sbox_nonlinearity(s, early_exit=False),
        "sbox": [int(v) for v in s.table],
    }
    lcs = linear_components_space(s)
    out["lcs"] = lcs.to_dict()
    if lcs.dimension:
        code = generator_from_basis(lcs.basis, s.n)
        out["lcs"]["generator_poly"] = str(code.generator) if code else None
        out["lcs"]["cyclic"] = code.cyclic if code else None
        out["lcs"]["orientation"] = ORIENTATION_NOTE
    if args.format == "json":
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(f"rules        f={f.wolfram} g={g.wolfram} (d={f.diameter})")
    print(f"orthogonal   {orth}")
    print(f"bijective    {out['bijective']}")
    print(f"nonlinearity {out['nonlinearity']}")
    print(f"sbox         {s.to_text()}")
    print(f"lcs dim      {lcs.dimension}")
    if lcs.dimension:
        print(f"lcs basis    {' '.join(lcs.hex_rows())}")
        print(f"generator    {out['lcs']['generator_poly']}  ({ORIENTATION_NOTE})")
        print(f"cyclic       {out['lcs']['cyclic']}")
    return EXIT_OK


def _parse_partition(text):
    if text is None:
        return None
    try:
        start, end = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"partition must be START:END, got {text!r}") from None
    return start, end


def _config(args) -> SearchConfig:
    if args.diameter == 6 and not args.confirm_long_run:
        raise UsageError(
            "diameter 6 scans ~4.3e9 ordered pairs (~8.4e8 after the pairwise-balanced "
            "filter) and can take a long time; pass --confirm-long-run"
        )
    try:
        return SearchConfig(
            args.diameter,
            use_pb_filter=not args.no_pb_filter,
            exclude_linear_rules=not args.include_linear_rules,
            worker_count=args.jobs,
            partition=_parse_partition(args.partition),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_or_run(args) -> SearchReport:
    if getattr(args, "report", None):
        return SearchReport.from_json(Path(args.report).read_text(encoding="utf-8"))
    if args.diameter is None:
        raise UsageError("give --diameter or --report")
    config = _config(args)
    if config.diameter == 6:
        print("diameter 6: expected ~4.3e9 raw pairs, ~8.4e8 after the filter", file=sys.stderr)
    try:
        return run_search(config, checkpoint=args.resume, progress=stderr_progress() if args.progress else None)
    except KeyboardInterrupt:
        where = f"; resume with --resume {args.resume}" if args.resume else ""
        print(f"interrupted{where}", file=sys.stderr)
        raise SystemExit(EXIT_INTERRUPTED)


def _write(path: str, text: str):
    Path(path).write_text(text, encoding="utf-8")


def cmd_search(args) -> int:
    report = _load_or_run(args)
    if args.output:
        if args.format:
            _write(args.output, report.to_json() if args.format == "json" else report.to_csv())
        else:
            stem = Path(args.output)
            _write(str(stem.with_suffix(".json")), report.to_json())
            _write(str(stem.with_suffix(".csv")), report.to_csv())
    elif args.format == "json":
        sys.stdout.write(report.to_json())
        return EXIT_OK
    elif args.format == "csv":
        sys.stdout.write(report.to_csv())
        return EXIT_OK
    pairs = report.oca_pairs_swap_reduced if args.swap_reduced else report.oca_pairs
    label = "unordered" if args.swap_reduced else "ordered"
    print(f"d={report.diameter}: {report.summary()}")
    print(f"  {label} OCA pairs: {pairs}; scanned {report.total_pairs_scanned}, "
          f"pairwise balanced {report.pb_pairs}")
    print(f"  {'d':>2} {'nl(H)':>6} {'#nl(H)':>8} {'dim':>4} {'#dim':>8}")
    for d, nl, nlc, dim, dimc in report.table_rows():
        print(f"  {d:>2} {nl:>6} {nlc:>8} {dim:>4} {dimc:>8}")
    if report.non_polynomial or report.non_bijective:
        print(f"  WARNING: {report.non_polynomial} non-polynomial LCS, "
              f"{report.non_bijective} non-bijective S-boxes")
    return EXIT_OK


def cmd_classify(args) -> int:
    report = _load_or_run(args)
    n = report.n
    if args.format == "csv":
        lines = ["diameter,dimension,generator,count"]
        lines += [f"{report.diameter},{k},{p},{c}" for k, p, c in report.generator_classes()]
        text = "\n".join(lines) + "\n"
    else:
        rows = [f"# d={report.diameter}, n={n}; {ORIENTATION_NOTE}",
                f"{'dim':>4} {'count':>8} {'cyclic':>6} {'n-k=deg':>7}  generator"]
        for k, p, c in report.generator_classes():
            cyclic = divides(p, Gf2Poly((1 << n) | 1))
            rows.append(f"{k:>4} {c:>8} {str(cyclic):>6} {str(k == n - p.degree):>7}  {p}")
        rows.append(f"non-polynomial LCS: {report.non_polynomial}")
        text = "\n".join(rows) + "\n"
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import verify_diameter

    if args.diameter not in (4, 5, 6):
        raise UsageError(f"verify needs d in 4..6 (no nonlinear OCA pairs exist at d={args.diameter})")
    if args.diameter == 6 and not args.confirm_long_run:
        raise UsageError("verify at diameter 6 is a long run; pass --confirm-long-run")
    result = verify_diameter(args.diameter)
    for finding in result.findings:
        print(finding)
    status = "all checks hold" if result.ok else f"{len(result.findings)} violation(s)"
    print(f"d={args.diameter}: {result.sboxes} OCA S-boxes, {result.linear} linear; {status}")
    return EXIT_OK if result.ok else EXIT_FINDING


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ocasbox", description=__doc__.splitlines()[0])
    parser.add_argument("--backend", action="store_true", help="print the kernel backend and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("rule-info", help="metrics of a single local rule")
    _add_rule_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_rule_info)

    p = sub.add_parser("analyze", help="superposition S-box of a rule pair (give two rules)")
    _add_rule_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_analyze)

    for name, func, helptext in (
        ("search", cmd_search, "exhaustive search over bipermutive rule pairs"),
        ("classify", cmd_classify, "generator-polynomial classes of linear OCA S-boxes"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("-d", "--diameter", type=int)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--output", help="output path (search without --format: writes PATH.json and PATH.csv)")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--no-pb-filter", action="store_true")
        p.add_argument("--include-linear-rules", action="store_true")
        order = p.add_mutually_exclusive_group()
        order.add_argument("--ordered", dest="swap_reduced", action="store_false", default=False)
        order.add_argument("--swap-reduced", dest="swap_reduced", action="store_true")
        p.add_argument("--confirm-long-run", action="store_true")
        p.add_argument("--resume", metavar="CHECKPOINT", help="checkpoint file to append to / resume from")
        p.add_argument("--partition", metavar="START:END", help="left-rule index range")
        p.add_argument("--progress", action="store_true", help="progress on stderr")
        if name == "classify":
            p.add_argument("--report", help="classify a saved JSON search report instead of searching")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="check LCS structure on every linear OCA S-box")
    p.add_argument("-d", "--diameter", type=int, required=True)
    p.add_argument("--confirm-long-run", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.backend:
        print(kernels.BACKEND)
        return EXIT_OK
    if not args.command:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ocasbox {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"ocasbox {args.command}: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except CheckpointError as exc:
        print(f"ocasbox {args.command}: checkpoint error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
