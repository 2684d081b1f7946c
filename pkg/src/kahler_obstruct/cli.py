"""Command line: ``kahler-obstruct {ring,galois,evaluate,obstruction,suite}``.

Exit codes: 0 success (or contradiction derived), 2 hypothesis not
certified, 3 identity mismatch, 1 internal error or failed suite,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import jsonschema

from . import __version__
from .config import ConfigError, load_config, schema
from .galois import InputError as GaloisInputError
from .galois import UndecidedError, certify_symmetric_group, distinct_pair_products, is_squarefree, \
    no_real_roots, poly_str
from .graded import dump_structure_constants, kummer_surface_ring, kunneth, pairing_ranks, pairing_rows
from .exterior import torus_ring
from .quadforms import sparse_signature
from .rewrite import InputError as ModelInputError
from .rewrite import UnsupportedMonomial, evaluate, x2_model, x3_model, x4_model, x5_model

EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _emit(doc: dict, kind: str, out: str | None):
    jsonschema.validate(doc, schema(kind))
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# ring


def _ring_from_spec(spec: str):
    s = spec.lower().replace(":", "").replace("=", "")
    if s == "kummer":
        return kummer_surface_ring()
    if s.startswith("torus") and s[5:].isdigit() and int(s[5:]) >= 1:
        return torus_ring(int(s[5:]))
    raise UsageError(f"unknown ring spec {spec!r} (use kummer or torusN)")


def cmd_ring(args) -> int:
    chosen = [x is not None and x is not False for x in (args.torus, args.kummer or None, args.kunneth)]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --torus N, --kummer, --kunneth A B")
    if args.torus is not None:
        if args.torus < 1:
            raise UsageError("--torus needs a positive dimension")
        ring = torus_ring(args.torus)
    elif args.kummer:
        ring = kummer_surface_ring()
    else:
        ring = kunneth(_ring_from_spec(args.kunneth[0]), _ring_from_spec(args.kunneth[1]))
    ranks = pairing_ranks(ring)
    betti = ring.betti()
    pairing = []
    for k in range(ring.top_degree + 1):
        entry = {"degree": k, "rank": ranks[k], "nondegenerate": ranks[k] == betti[k]}
        if 2 * k == ring.top_degree and k % 2 == 0 and betti[k]:
            rows = pairing_rows(ring, k)
            entries = {(i, j): v for i, r in enumerate(rows) for j, v in r.items()}
            entry["signature"] = sparse_signature(entries, betti[k]).to_dict()
        pairing.append(entry)
    doc = {"ring": ring.name, "top_degree": ring.top_degree, "betti": betti, "pairing": pairing}
    if args.dump:
        doc["structure_constants"] = dump_structure_constants(ring)
    _emit(doc, "ring", args.out)
    return 0


# --------------------------------------------------------------------------
# galois


def cmd_galois(args) -> int:
    try:
        f = [int(c) for c in args.coefficients]
    except ValueError:
        raise UsageError("coefficients must be integers (constant term first)") from None
    if len(f) < 2 or f[-1] == 0:
        raise UsageError("need a non-constant polynomial with nonzero leading coefficient")
    try:
        cert = certify_symmetric_group(f, args.prime_bound)
    except GaloisInputError as exc:
        raise UsageError(str(exc)) from None
    doc = cert.to_dict()
    doc["text"] = poly_str(f, "x")
    doc["no_real_roots"] = no_real_roots(f)
    if not is_squarefree(f):
        doc["distinct_products"] = "not-squarefree"
    else:
        try:
            doc["distinct_products"] = distinct_pair_products(f, args.digits)
        except UndecidedError:
            doc["distinct_products"] = "undecided"
    _emit(doc, "certificate", args.out)
    return 0


# --------------------------------------------------------------------------
# evaluate


def _model(args):
    try:
        if args.model == "x2":
            return x2_model(args.n)
        if args.model == "x3":
            return x3_model(args.n, args.m, Fraction(args.q))
        if args.model == "x4":
            return x4_model(args.t)
        return x5_model(args.t, args.d)
    except ModelInputError as exc:
        raise UsageError(str(exc)) from None


def cmd_evaluate(args) -> int:
    model = _model(args)
    if args.rule_table and args.power is None:
        sys.stdout.write(model.rule_table())
        return 0
    if args.power is None:
        raise UsageError("--power is required (or use --rule-table alone)")
    alphas = tuple(args.alpha or ["A"])
    trace: list | None = [] if args.verbose else None
    try:
        value = evaluate(model, args.power, alphas, trace=trace)
    except UnsupportedMonomial as exc:
        raise UsageError(str(exc)) from None
    doc = {"model": model.describe(), "expression": f"C^{args.power}*{'*'.join(alphas)}",
           "value": value.to_dict(), "zero": value.is_zero()}
    if args.rule_table:
        doc["rule_table"] = model.rule_table()
    if trace is not None:
        doc["trace"] = trace
        for step in trace:
            print(f"{step['monomial']} -> {step['rule']}", file=sys.stderr)
    _emit(doc, "evaluation", args.out)
    return 0


# --------------------------------------------------------------------------
# obstruction and suite


def cmd_obstruction(args) -> int:
    from .pipelines import run

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
        report = run(cfg)
    except (ConfigError, ModelInputError) as exc:
        raise UsageError(str(exc)) from None
    if args.verbose:
        for line in report.trace:
            print(line, file=sys.stderr)
    _emit(report.to_dict(), "report", args.out)
    print(f"verdict: {report.verdict} ({report.reason})", file=sys.stderr)
    return report.exit_code


def cmd_suite(args) -> int:
    from .suite import run_suite, select

    if args.filter and not select(args.filter):
        raise UsageError(f"no check matches {args.filter!r}")
    summary = run_suite(args.filter, args.seed or 0)
    if args.verbose:
        for r in summary["results"]:
            print(f"{'PASS' if r['passed'] else 'FAIL'} {r['name']}", file=sys.stderr)
    _emit(summary, "suite", args.out)
    return 0 if summary["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kahler-obstruct", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--out", "-o", help="write JSON here instead of stdout")
    common.add_argument("--verbose", "-v", action="store_true")

    r = sub.add_parser("ring", parents=[common], help="Betti numbers and pairings of a ring")
    r.add_argument("--torus", type=int, metavar="N")
    r.add_argument("--kummer", action="store_true")
    r.add_argument("--kunneth", nargs=2, metavar=("A", "B"))
    r.add_argument("--dump", action="store_true", help="include structure constants")
    r.set_defaults(func=cmd_ring)

    g = sub.add_parser("galois", parents=[common], help="certify Gal(f) = S_N and root facts")
    g.add_argument("coefficients", nargs="+", help="integer coefficients, constant term first")
    g.add_argument("--prime-bound", type=int, default=1000)
    g.add_argument("--digits", type=int, default=50)
    g.set_defaults(func=cmd_galois)

    e = sub.add_parser("evaluate", parents=[common], help="evaluate C^k * alphas on a rewrite model")
    e.add_argument("--model", choices=["x2", "x3", "x4", "x5"], default="x2")
    e.add_argument("--n", type=int, default=2)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--q", default="1", help="q(h^m) for x3 (rational)")
    e.add_argument("--t", type=int, default=10)
    e.add_argument("--d", type=int, default=1)
    e.add_argument("--power", type=int)
    e.add_argument("--alpha", action="append", help="alpha label (repeatable; default A)")
    e.add_argument("--rule-table", action="store_true")
    e.set_defaults(func=cmd_evaluate)

    o = sub.add_parser("obstruction", parents=[common], help="run an obstruction pipeline")
    o.add_argument("config", help="TOML construction config")
    o.add_argument("--seed", type=int)
    o.set_defaults(func=cmd_obstruction)

    s = sub.add_parser("suite", parents=[common], help="run the reproduction suite")
    s.add_argument("--filter", help="check name substring or glob")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"kahler-obstruct: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # expected paths are handled above; this is a bug
        print(f"kahler-obstruct: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
