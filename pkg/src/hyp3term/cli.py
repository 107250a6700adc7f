"""Command-line interface: compute (Q, R), inspect the groups and factors,
emit the tables, and run the verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Generator
words are read left to right with the rightmost symbol acting first, so
s1s3s1s3 is the composite the source calls sigma_1313.  The environment
variable HYP3TERM_PRECISION overrides the default working precision.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import group, ladder, moebius, symmetry, verify

_WORD_TOKEN = re.compile(r"s~?[0-5]|tau")


def _parse_word(text: str, allowed_prefix: str | None = None):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _WORD_TOKEN.match(text, pos)
        if not match:
            raise ValueError(f"bad generator word {text!r} at position {pos}")
        token = match.group()
        if allowed_prefix is not None:
            if token == "tau" or not token.startswith(allowed_prefix) \
                    or (allowed_prefix == "s" and token.startswith("s~")):
                raise ValueError(
                    f"generator {token!r} does not belong to this group")
        tokens.append(token)
        pos = match.end()
    if not tokens:
        raise ValueError("empty generator word")
    return tokens


def _word_to_element(tokens):
    elem = None
    for token in tokens:
        gen = group.generator(token)
        elem = gen if elem is None else elem.compose(gen)
    return elem


def _default_precision() -> int:
    env = os.environ.get("HYP3TERM_PRECISION")
    return int(env) if env else 50


def _print_ratfunc(value, fmt: str, label: str = ""):
    if fmt == "json":
        print(json.dumps({label or "value": value.to_json_dict()}, sort_keys=True))
    elif fmt == "latex":
        prefix = f"{label} = " if label else ""
        print(f"{prefix}{value.to_latex()}")
    else:
        prefix = f"{label} = " if label else ""
        print(f"{prefix}{value}")


# -- subcommands ---------------------------------------------------------------

def cmd_qr(args) -> int:
    pair = ladder.compute_qr((args.k, args.l, args.m))
    if args.format == "json":
        print(json.dumps({"shift": [args.k, args.l, args.m],
                          "Q": pair.Q.to_json_dict(),
                          "R": pair.R.to_json_dict()}, sort_keys=True))
    else:
        _print_ratfunc(pair.Q, args.format, "Q")
        _print_ratfunc(pair.R, args.format, "R")
    return 0


def cmd_group(args) -> int:
    which = args.which
    tilde = which == "Gt"
    if args.subcommand == "list":
        table = group.group_Gt() if tilde else group.group_G()
        rows = sorted((elem.to_json_dict() for elem in table),
                      key=lambda d: (len(d["word"]), d["word"]))
        print(json.dumps(rows))
        return 0
    if args.subcommand == "verify":
        structure = group.verify_structure()
        golden = group.golden_table_check(which)
        report = {"schema": verify.SCHEMA_VERSION,
                  "order": structure["order_Gt" if tilde else "order_G"],
                  "relations_pass": structure["pass"],
                  "failed_relations": [c for c in structure["checks"]
                                       if not c["pass"]],
                  "table_pass": golden["pass"],
                  "table_discrepancies": golden["discrepancies"]}
        if args.format == "json":
            print(json.dumps(report, sort_keys=True))
        else:
            rel = "all pass" if report["relations_pass"] else "FAILURES"
            print(f"order={report['order']}, relations: {rel}, "
                  f"printed table discrepancies: "
                  f"{len(report['table_discrepancies'])}")
        if not structure["pass"]:
            return 1
        if not golden["pass"] and args.strict_tables:
            return 1
        return 0
    # element <word>
    tokens = _parse_word(args.word, "s~" if tilde else "s")
    elem = _word_to_element(tokens)
    if args.format == "json":
        print(json.dumps(elem.to_json_dict(), sort_keys=True))
    else:
        print(elem.describe())
    return 0


def cmd_lambda(args) -> int:
    which = args.which
    tokens = _parse_word(args.word, "s~" if which == "R" else "s")
    elem = _word_to_element(tokens)
    shift = (args.k, args.l, args.m)
    factor, value = symmetry.lambda_for(which, elem, shift)
    if args.structured:
        evaluated = _evaluate_structured(factor, shift)
        if args.format == "json":
            print(json.dumps({"word": args.word, "shift": list(shift),
                              "factor": factor.to_json_dict(),
                              "at_shift": evaluated.to_json_dict()},
                             sort_keys=True))
        elif args.format == "latex":
            print(evaluated.to_latex())
        else:
            print(evaluated.to_str())
    else:
        _print_ratfunc(value, args.format)
    return 0


def _evaluate_structured(factor, shift):
    """The structured factor with k, l, m replaced by their values."""
    k, l, m = shift
    atoms = {}
    for f in factor.poch:
        key = (f.arg.eval_shift(k, l, m), f.length.eval_shift(k, l, m))
        atoms[key] = atoms.get(key, 0) + f.exp
    from .symmetry import SymFactor, _canonical_poch
    return SymFactor(_canonical_poch(atoms),
                     factor.sign.eval_shift(k, l, m).mod2(),
                     factor.xexp.eval_shift(k, l, m),
                     factor.omxexp.eval_shift(k, l, m))


def _parse_rows(text: str):
    rows = set()
    for chunk in text.split(","):
        if "-" in chunk:
            lo, hi = (int(v) for v in chunk.split("-", 1))
        else:
            lo = hi = int(chunk)
        if not (1 <= lo <= hi <= 48):
            raise ValueError(f"row range {chunk!r} outside 1..48")
        rows.update(range(lo, hi + 1))
    return rows


def cmd_tables(args) -> int:
    which = "Q" if args.which == "q96" else "R"
    wanted = _parse_rows(args.rows) if args.rows else set(range(1, 49))
    out = []
    s3 = group.generator("s~3" if which == "R" else "s3")
    for n, word, elem, printed in symmetry.corollary_rows(which):
        if n not in wanted:
            continue
        factor = symmetry.lambda_symfactor(which, elem.inverse())
        # display through the printed transcription when provably equal,
        # so the emitted layout lines up with the source tables
        if factor.equivalent(printed):
            factor = printed
        out.append({"row": n, "word": word, "factor": factor})
        if args.with_sigma3:
            out.append({"row": n, "word": word + "3",
                        "factor": factor.subst(s3)})
    if args.format == "json":
        print(json.dumps([{"row": r["row"], "word": r["word"],
                           "factor": r["factor"].to_json_dict()}
                          for r in out], sort_keys=True))
    elif args.format == "latex":
        for r in out:
            print(f"({r['row']}) & \\sigma_{{{r['word']}}} & "
                  f"{r['factor'].to_latex()} \\\\")
    else:
        for r in out:
            print(f"({r['row']}) sigma_{r['word'] or 'Id'}: {r['factor']}")
    return 0


def cmd_verify(args) -> int:
    shift_set = verify.parse_shift_set(args.shifts, args.seed)
    config = verify.RunConfig(seed=args.seed, samples=args.samples,
                              precision=args.precision, shift_set=shift_set,
                              output_format=args.format, jobs=args.jobs)
    report = verify.run_suites([args.suite], config)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        for suite in report["suites"]:
            print(f"suite {suite['suite']}: "
                  f"{'PASS' if suite['pass'] else 'FAIL'} "
                  f"({suite['elapsed_seconds']}s)")
            for check in suite["checks"]:
                mark = "ok" if check["pass"] else "FAIL"
                print(f"  [{mark}] {check['check']}")
                for ce in check.get("counterexamples", [])[:10]:
                    print(f"        counterexample: {ce}")
    return 0 if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyp3term",
        description="Exact three-term relation coefficients for the Gauss "
                    "hypergeometric function and their symmetries.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json", "latex"),
                       default="text")

    p = sub.add_parser("qr", help="compute the coefficient pair (Q, R)")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-l", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    add_format(p)
    p.set_defaults(func=cmd_qr)

    p = sub.add_parser("group", help="inspect or verify the two groups")
    p.add_argument("which", choices=("G", "Gt"))
    p.add_argument("subcommand", choices=("list", "verify", "element"))
    p.add_argument("word", nargs="?", default="",
                   help="generator word for 'element', e.g. s1s3s1s3")
    p.add_argument("--strict-tables", action="store_true",
                   help="treat printed-table discrepancies as failures")
    add_format(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("lambda", help="symmetry factor of a group element")
    p.add_argument("which", choices=("Q", "R"))
    p.add_argument("word", help="generator word, e.g. s0 or s~1")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-l", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--structured", action="store_true",
                   help="print the Pochhammer-product form instead of the "
                        "expanded rational function")
    add_format(p)
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("tables", help="emit the 48-row factor tables")
    p.add_argument("which", choices=("q96", "r96"))
    p.add_argument("--rows", default="", help="e.g. 9 or 2,9,38 or 1-48")
    p.add_argument("--with-sigma3", action="store_true",
                   help="also emit the 48 interchange rows (k<->l, a<->b)")
    add_format(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=("ladder", "symQ", "symR", "numeric",
                                     "tables", "all"))
    p.add_argument("--seed", type=int, default=20240)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--precision", type=int, default=_default_precision())
    p.add_argument("--shifts", default="default10",
                   help="default10, default20, or 'k,l,m;k,l,m;...'")
    p.add_argument("--jobs", type=int, default=1)
    add_format(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "group" and args.subcommand == "element" \
            and not args.word:
        parser.error("group element requires a generator word")
    try:
        return args.func(args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
