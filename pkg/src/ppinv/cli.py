"""Command-line entry point: ``ppinv <command> ...``.

Exit status: 0 when every verdict passes, 1 when a stated claim fails,
2 on usage or parameter errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import PPInvError
from .families import catalog, instantiate
from .field import mk_field
from .verifier import (SUITES, SweepPlan, reports_to_csv, reports_to_json, run_sweep,
                       summarize, verify_instance)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _binding(text: str) -> tuple[str, int]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    try:
        return name.strip(), int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"value of {name!r} must be an integer encoding") from None


def _field_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--p", type=int, required=True, help="characteristic")
    sp.add_argument("--m", type=int, required=True, help="q = p^m; elements live in GF(q^2)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ppinv", description="Verify closed-form inverses of permutation "
                 "polynomials over GF(q^2) against brute-force tables.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list-families", help="print the family catalog")

    sp = sub.add_parser("field", help="print the GF(q^2) descriptor used for encodings")
    _field_args(sp)
    sp.add_argument("--elements", action="store_true",
                    help="also list every element with its trace and norm down to GF(q)")

    sp = sub.add_parser("verify", help="verify a single instance")
    sp.add_argument("--family", required=True)
    _field_args(sp)
    sp.add_argument("--param", type=_binding, action="append", default=[],
                    metavar="NAME=ENC", help="parameter binding (repeatable)")
    sp.add_argument("--out", help="write the JSON report here")

    sp = sub.add_parser("sweep", help="verify many instances of one or all families")
    sp.add_argument("--family", required=True, help="family id or 'all'")
    _field_args(sp)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--filter", type=_binding, action="append", default=[], metavar="NAME=ENC",
                    help="keep only tuples with this parameter value (repeatable)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("suite", help="run one of the building-block suites")
    sp.add_argument("name", choices=sorted(SUITES))
    sp.add_argument("--out", help="write the JSON result here")
    return ap


def _cmd_list(args) -> int:
    for d in catalog():
        extra = f" variants={','.join(d.variants)}" if d.variants else ""
        extra += " involution" if d.involution else ""
        print(f"{d.id}  {d.char_constraint:<5}  q>={d.min_q:<2}  {d.condition_kind:<10}  "
              f"{d.forward}{extra}")
    return EXIT_OK


def _cmd_field(args) -> int:
    ctx = mk_field(args.p, 2 * args.m)
    q = args.p**args.m
    doc = dict(ctx.descriptor(), q=q, subfield=ctx.subfield(args.m))
    print(json.dumps(doc))
    if args.elements:
        print("enc  trace  norm  in_Fq")
        for x in ctx.elements():
            print(f"{x}  {ctx.trace(x, args.m)}  {ctx.norm(x, args.m)}  "
                  f"{int(ctx.in_subfield(x, args.m))}")
    return EXIT_OK


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _cmd_verify(args) -> int:
    ctx = mk_field(args.p, 2 * args.m)
    params = dict(args.param)
    inst = instantiate(args.family, ctx, args.m, params)
    rep = verify_instance(inst)
    doc = rep.to_json()
    print(json.dumps(doc, sort_keys=True, indent=1))
    if args.out:
        _write(args.out, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def _cmd_sweep(args) -> int:
    if args.exhaustive:
        plan = SweepPlan(args.family, ((args.p, args.m),), "exhaustive", seed=args.seed,
                         filters=_filters(args.filter))
    elif args.samples is not None:
        plan = SweepPlan(args.family, ((args.p, args.m),), "sampled", samples=args.samples,
                         seed=args.seed, filters=_filters(args.filter))
    else:
        plan = SweepPlan(args.family, ((args.p, args.m),), "auto", seed=args.seed,
                         filters=_filters(args.filter))
    reports = run_sweep(plan, jobs=args.jobs)
    text = reports_to_json(reports) if args.format == "json" else reports_to_csv(reports)
    _write(args.out, text)
    for fam, s in summarize(reports).items():
        print(f"{fam}: {s['count']} instances, {s['permutations']} permutations, "
              f"{s['count'] - s['passed']} violations")
    failed = sum(not r.passed for r in reports)
    print(f"total {len(reports)} instances, {failed} violations -> {args.out}")
    return EXIT_OK if failed == 0 else EXIT_VIOLATION


def _filters(bindings) -> dict:
    out: dict = {}
    for name, value in bindings:
        out.setdefault(name, []).append(value)
    return out


def _cmd_suite(args) -> int:
    res = SUITES[args.name]()
    doc = res.to_json()
    print(f"{res.name}: {res.count} cases, {res.checks} inverse checks, "
          f"{len(res.failures)} failures")
    if args.out:
        _write(args.out, json.dumps(doc, sort_keys=True, indent=1) + "\n")
    return EXIT_OK if res.passed else EXIT_VIOLATION


COMMANDS = {"list-families": _cmd_list, "field": _cmd_field, "verify": _cmd_verify,
            "sweep": _cmd_sweep, "suite": _cmd_suite}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except PPInvError as exc:
        parser.print_usage(sys.stderr)
        print(f"ppinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ppinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
