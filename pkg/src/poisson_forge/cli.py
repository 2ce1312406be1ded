"""The poisson-forge command line.

Subcommands:
  verify all|jacobi|casimir|pdda|pullback|pl2|quotient|localization|
         torus|derivations|centre|grading   run verification suites
  bracket EXPR EXPR [--algebra FILE]        evaluate a Poisson bracket
  nf EXPR [--alpha V] [--beta V]            quotient normal form
  decompose --file SPEC.json                torus derivation decomposition
  eta                                       the eta scalars of the chain
  chain                                     dump the change of variables

Exit codes: 0 when every requested check passes, 1 on any failing check,
2 on usage, file or expression errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import g2
from .chain import localize_structure, run_chain
from .expr import ExprError
from .parse import parse_expr
from .poisson import DerivationSpec, EtaError
from .quotient import QuotientRing
from .report import Report
from .suites import DEFAULT_SEED, SUITE_NAMES, run_suites
from .torus import TorusStructure, decompose_derivation

_QUOTIENT_ALIASES = {f"X{i}": f"x{i}" for i in range(1, 7)}


class UsageError(Exception):
    pass


def _parameter_value(raw: str, which: str) -> str | Fraction:
    aliases = {"symbolic", "sym", which, which[0]}
    if raw.lower() in aliases:
        return "symbolic"
    try:
        return Fraction(raw)
    except ValueError:
        raise UsageError(
            f"--{which} expects 'symbolic' or a rational, got {raw!r}") from None


def _emit_reports(reports: list[Report], fmt: str, out) -> int:
    if fmt == "json":
        payload = {"ok": all(r.ok for r in reports),
                   "suites": [r.to_dict() for r in reports]}
        print(json.dumps(payload, indent=2), file=out)
    else:
        for report in reports:
            print(report.render_text(), file=out)
        verdict = "PASS" if all(r.ok for r in reports) else "FAIL"
        print(f"overall: {verdict}", file=out)
    return 0 if all(r.ok for r in reports) else 1


def _emit_value(payload: dict, text: str, fmt: str, out) -> int:
    if fmt == "json":
        print(json.dumps(payload, indent=2), file=out)
    else:
        print(text, file=out)
    return 0


def _cmd_verify(args, out) -> int:
    return _emit_reports(run_suites(args.suite, seed=args.seed), args.format, out)


def _cmd_bracket(args, out) -> int:
    if args.algebra:
        alg = g2.load_algebra(args.algebra)
    else:
        alg = g2.builtin_algebra()
    f = parse_expr(args.left, alg.context)
    g = parse_expr(args.right, alg.context)
    value = alg.structure.bracket(f, g)
    return _emit_value({"result": str(value)}, str(value), args.format, out)


def _cmd_nf(args, out) -> int:
    # the localised basis also covers negative x5/x6 exponents
    ring = QuotientRing(alpha=_parameter_value(args.alpha, "alpha"),
                        beta=_parameter_value(args.beta, "beta"),
                        localized=True)
    value = ring.normal_form(parse_expr(args.expr, ring.context,
                                        aliases=_QUOTIENT_ALIASES))
    return _emit_value({"result": str(value)}, str(value), args.format, out)


def _cmd_decompose(args, out) -> int:
    with open(args.file, encoding="utf-8") as handle:
        spec = json.load(handle)
    for field in ("rank", "lambda", "images"):
        if field not in spec:
            raise UsageError(f"decomposition spec misses {field!r}")
    torus = TorusStructure.make(spec["lambda"])
    if torus.rank != int(spec["rank"]):
        raise UsageError("rank does not match the lambda matrix")
    ctx = torus.context
    images = {}
    for name in torus.names:
        if name not in spec["images"]:
            raise UsageError(f"images miss generator {name!r}")
        images[name] = parse_expr(spec["images"][name], ctx)
    dec = decompose_derivation(DerivationSpec(ctx, images), torus)
    payload = {"gamma": str(dec.gamma),
               "theta": {name: str(img)
                         for name, img in sorted(dec.theta_images.items())}}
    text = [f"gamma = {dec.gamma}"]
    text += [f"theta({name}) = {img}"
             for name, img in sorted(dec.theta_images.items())]
    return _emit_value(payload, "\n".join(text), args.format, out)


def _cmd_eta(args, out) -> int:
    ore = g2.builtin_algebra().ore
    values: dict[str, str | None] = {}
    for i in range(1, 6):
        try:
            values[str(i + 1)] = str(ore.eta(i))
        except EtaError:
            values[str(i + 1)] = None
    text = "\n".join(f"eta{k}: {v if v is not None else 'undefined'}"
                     for k, v in values.items())
    return _emit_value({"eta": values}, text, args.format, out)


def _cmd_chain(args, out) -> int:
    alg = g2.builtin_algebra()
    local = localize_structure(alg.structure, ["X5", "X6"])
    stages = run_chain(local, alg.ore)
    lines = []
    for level in range(6, 1, -1):
        for i in range(1, 7):
            lines.append(f"X[{i},{level}] = {stages[level].gen(i)}")
    for i in range(1, 7):
        lines.append(f"T{i} = {stages[2].gen(i)}")
    payload = {"chain": lines}
    return _emit_value(payload, "\n".join(lines), args.format, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson-forge",
        description="Exact verification toolkit for the built-in Poisson"
                    " algebra, its deleting-derivations chain and its"
                    " normal-form quotient.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suite", nargs="+", choices=["all"] + SUITE_NAMES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="seed for the randomized torus suite")
    add_format(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bracket", help="evaluate a Poisson bracket")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--algebra", help="algebra definition JSON file")
    add_format(p)
    p.set_defaults(func=_cmd_bracket)

    p = sub.add_parser("nf", help="quotient normal form of an expression")
    p.add_argument("expr")
    p.add_argument("--alpha", default="symbolic")
    p.add_argument("--beta", default="symbolic")
    add_format(p)
    p.set_defaults(func=_cmd_nf)

    p = sub.add_parser("decompose",
                       help="decompose a torus derivation (inner + central)")
    p.add_argument("--file", required=True)
    add_format(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("eta", help="print the eta scalars")
    add_format(p)
    p.set_defaults(func=_cmd_eta)

    p = sub.add_parser("chain", help="dump the change-of-variables chain")
    add_format(p)
    p.set_defaults(func=_cmd_chain)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args, out)
    except (UsageError, ExprError, OSError, json.JSONDecodeError, KeyError,
            ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
