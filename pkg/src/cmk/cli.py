"""Command-line entry point.

Exit codes: 0 success, 1 input error, 2 refusal (a hypothesis such as
det T' > 0 could not be confirmed).
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings

from . import catalogue
from .arquiver import ar_matrix, deleted_ar_matrix, validate
from .errors import InputError, RefusalError
from .ktheory import (
    CoefficientSpec,
    HypersurfaceWarning,
    det_deleted_matrix,
    k0_mf,
    k0_prime,
    k1_additive_category,
    k1_mf_presentation,
    k1_prime_presentation,
)
from .localization import filtration_report, k0_localization_sequence, semiperfect_view

VERBS = ("k0prime", "k0mf", "armatrix", "det", "k1prime", "k1mf", "k1cat",
         "localize", "filtration", "catalogue", "check")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _sweep(text):
    try:
        a, b = text.split("..")
        lo, hi = int(a.split("=")[-1]), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b or n=a..b, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
    return range(lo, hi + 1)


def _coefficients(text):
    try:
        return CoefficientSpec.parse(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("-o", dest="output", metavar="PATH", help="write output to PATH")
    common.add_argument("--envelope", action="store_true",
                        help="wrap JSON output with quiver name, matrix hashes and flags")

    quiver_in = argparse.ArgumentParser(add_help=False)
    quiver_in.add_argument("input", nargs="?",
                           help="quiver JSON file, '-' for stdin, or FAMILY:N such as a2n:3")
    quiver_in.add_argument("--sweep", type=_sweep, metavar="a..b",
                           help="evaluate on the a2n catalogue for n in a..b instead of INPUT")

    coeffs = argparse.ArgumentParser(add_help=False)
    coeffs.add_argument("--coefficients", type=_coefficients, default=CoefficientSpec(),
                        metavar="symbolic|ff:q")

    parser = _Parser(prog="cmk", description="K-theory of rings of finite CM type from AR quivers")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    sub.add_parser("k0prime", parents=[common, quiver_in], help="K_0'(R) = coker T")
    p = sub.add_parser("k0mf", parents=[common, quiver_in], help="K_0(MF) = coker T'")
    p.add_argument("--hypersurface", action="store_true",
                   help="assert that R is a hypersurface S/(w)")
    p = sub.add_parser("armatrix", parents=[common, quiver_in], help="the matrix T (or T')")
    p.add_argument("--deleted", action="store_true", help="print T' instead of T")
    sub.add_parser("det", parents=[common, quiver_in], help="det T' and its sign")
    sub.add_parser("k1prime", parents=[common, quiver_in, coeffs], help="K_1'(R) presentation")
    sub.add_parser("k1mf", parents=[common, quiver_in, coeffs], help="K_1(MF) presentation")
    sub.add_parser("k1cat", parents=[common, quiver_in, coeffs],
                   help="K_1 of the additive category of MCM modules")
    p = sub.add_parser("localize", parents=[common, quiver_in],
                       help="K_0 localization sequence for add(subset)")
    p.add_argument("--subcat", default="", metavar="id,id,...")
    p.add_argument("--ring", action="store_true", help="also print the semiperfect-ring view")
    p = sub.add_parser("filtration", parents=[common, quiver_in, coeffs],
                       help="subquotients of the K_1 filtration")
    p.add_argument("--order", metavar="id,id,...", help="ordering, projective first")
    p = sub.add_parser("catalogue", parents=[common], help="emit a catalogue quiver as JSON")
    p.add_argument("family", help="family name (a2n)")
    p.add_argument("--n", type=int, help="family parameter")
    p.add_argument("--sweep", type=_sweep, metavar="a..b")
    sub.add_parser("check", parents=[common, quiver_in], help="validate a quiver file")
    return parser


def _read_quiver(spec, stdin):
    if spec is None:
        raise InputError("no input quiver given")
    if spec == "-":
        return catalogue.loads(stdin.read())
    family, sep, n = spec.partition(":")
    if sep and family.lower() in catalogue.FAMILIES:
        try:
            return catalogue.family_entry(family, int(n)).quiver
        except ValueError:
            raise InputError(f"bad family parameter in {spec!r}") from None
    return catalogue.load_quiver(spec)


def _ids(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _evaluate(args, q):
    """Return (json_payload, table_text, matrices, flags) for one quiver."""
    matrices, flags = {}, []
    verb = args.verb
    if verb in ("k0prime", "k0mf", "det", "k1prime", "k1mf", "k1cat", "armatrix"):
        matrices["T"] = ar_matrix(q).matrix.digest()
        matrices["T'"] = deleted_ar_matrix(q).matrix.digest()

    if verb == "check":
        report = validate(q)
        if not report.ok:
            raise InputError(f"{q.name}: " + "; ".join(report.violations))
        return {"valid": True, "violations": []}, f"{q.name}: valid", matrices, flags
    if verb == "k0prime":
        g = k0_prime(q)
        return g.to_dict(), str(g), matrices, flags
    if verb == "k0mf":
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", HypersurfaceWarning)
            g = k0_mf(q, hypersurface=args.hypersurface)
        flags += [str(w.message) for w in caught]
        return g.to_dict(), str(g), matrices, flags
    if verb == "armatrix":
        m = deleted_ar_matrix(q) if args.deleted else ar_matrix(q)
        payload = {"row_labels": list(m.row_labels), "col_labels": list(m.col_labels),
                   "matrix": m.matrix.to_rows()}
        return payload, m.table(), matrices, flags
    if verb == "det":
        d, positive = det_deleted_matrix(q)
        return {"det": d, "positive": positive}, f"det T' = {d} ({'positive' if positive else 'NOT positive'})", matrices, flags
    if verb in ("k1prime", "k1mf", "k1cat"):
        fn = {"k1prime": k1_prime_presentation, "k1mf": k1_mf_presentation,
              "k1cat": k1_additive_category}[verb]
        pres = fn(q, args.coefficients)
        flags += list(pres.flags)
        text = "\n".join([str(pres.expression)] + [f"  {c}" for c in pres.certificate]
                         + [f"  [{f}]" for f in pres.flags])
        return pres.to_dict(), text, matrices, flags
    if verb == "localize":
        subset = _ids(args.subcat)
        report = k0_localization_sequence(q, subset)
        text = str(report)
        payload = report.to_dict()
        if args.ring:
            view = semiperfect_view(q, subset)
            text += "\n" + view
            payload["semiperfect_view"] = view.splitlines()
        return payload, text, matrices, flags
    if verb == "filtration":
        order = _ids(args.order) if args.order else None
        report = filtration_report(q, order, args.coefficients)
        return report.to_dict(), str(report), matrices, flags
    raise InputError(f"unknown verb {verb!r}")


def _dump(obj):
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _run_catalogue(args):
    if args.sweep is None and args.n is None:
        raise InputError("catalogue needs --n N or --sweep a..b")
    if args.sweep is None:
        return catalogue.dumps(catalogue.family_entry(args.family, args.n).quiver)
    quivers = [catalogue.quiver_to_dict(catalogue.family_entry(args.family, n).quiver)
               for n in args.sweep]
    return json.dumps(quivers, indent=2, ensure_ascii=False) + "\n"


def _run_verb(args, stdin, stderr):
    if args.sweep is not None:
        jobs = [(n, catalogue.a2n_quiver(n)) for n in args.sweep]
    else:
        jobs = [(None, _read_quiver(args.input, stdin))]

    payloads, texts = [], []
    for n, q in jobs:
        payload, text, matrices, flags = _evaluate(args, q)
        if args.envelope:
            payload = {"verb": args.verb, "quiver": q.name, "matrices": matrices,
                       "coefficients": str(getattr(args, "coefficients", "symbolic")),
                       "flags": flags, "result": payload}
        elif flags and args.format == "json":
            for f in flags:
                print(f"cmk: note: {f}", file=stderr)
        if n is not None and not args.envelope:
            payload = {"n": n, "result": payload}
        payloads.append(payload)
        texts.append(text if n is None else f"== {q.name} (n = {n})\n{text}")

    if args.format == "json":
        return _dump(payloads if args.sweep is not None else payloads[0]) + "\n"
    return "\n".join(texts) + "\n"


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        if argv is None:
            argv = sys.argv[1:]
        if not argv or argv[0] in ("-h", "--help"):
            parser.print_help(stdout)
            return 0
        args = parser.parse_args(argv)
        out = _run_catalogue(args) if args.verb == "catalogue" else _run_verb(args, stdin, stderr)
    except InputError as exc:
        print(f"cmk: error: {_one_line(exc)}", file=stderr)
        return 1
    except RefusalError as exc:
        print(f"cmk: refused: {_one_line(exc)}", file=stderr)
        return 2
    except SystemExit as exc:
        # --help inside a subcommand
        return 0 if not exc.code else 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        stdout.write(out)
    return 0


def _one_line(exc) -> str:
    return " ".join(str(exc).split())


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
