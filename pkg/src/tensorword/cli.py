"""Command-line entry point.

Exit codes: 0 all checks pass, 1 violation found, 2 usage or configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .campaign import (DEFAULT_BRIDGING_CASES, VERDICT_FAIL, VERDICT_NUMERICAL, CampaignConfig,
                       parse_range, run_bridging, run_corollaries, run_thm1_bounds, run_thm2,
                       run_thm3)
from .config import ENUM_CAP, ORACLE_TOL, PSD_TOL, ZERO_TOL, Tolerances
from .errors import NumericalFailure, TensorWordError
from .gmf import parse_functional
from .induced import induced_operator, symmetry_class
from .matcore import load_matrix, matrix_to_json
from .symgroup import parse_character, parse_group
from .words import enumerate_words, surjective_count

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling ``sys.exit``."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


class _UsageError(Exception):
    pass


def _campaign_args(p, n="2", k="3", m="3..5", trials=25):
    p.add_argument("--n", default=n, help="matrix dimension range, e.g. 1..3")
    p.add_argument("--k", default=k, help="number of matrices range")
    p.add_argument("--m", default=m, help="tensor power range")
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--psd-tol", type=float, default=PSD_TOL)
    p.add_argument("--oracle-tol", type=float, default=ORACLE_TOL)
    p.add_argument("--zero-tol", type=float, default=ZERO_TOL)
    p.add_argument("--max-dim", type=int, default=None,
                   help="n^m guard (default $TENSORWORD_MAXDIM or 4096)")
    p.add_argument("--enum-cap", type=int, default=ENUM_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tensorword", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tensorword {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="randomized campaigns")
    vsub = verify.add_subparsers(dest="claim", required=True, parser_class=_Parser)
    _campaign_args(vsub.add_parser("thm2", help="alternating subset sum is PSD and equals the surjective-word sum"))
    p = vsub.add_parser("thm1-bounds", help="k=3 eigenvalue bracket")
    _campaign_args(p, n="1..3", m="3..5")
    p.add_argument("--general-k", type=int, default=None,
                   help="also report (not assert) the surjective-count bracket for this k")
    p = vsub.add_parser("thm3", help="three-term superadditivity gap of matrix functionals")
    _campaign_args(p, m="2..4", trials=100)
    p.add_argument("--func", action="append", required=True,
                   help="det | per | gmf:GROUP:CHAR (repeatable)")
    p.add_argument("--allow-reducible", action="store_true",
                   help="accept reducible table characters; their gap sign is reported, not asserted")
    p.add_argument("--imag-tol", type=float, default=1e-9)
    p = vsub.add_parser("corollaries", help="det/per identity values and two-term superadditivity")
    _campaign_args(p, m="1..5", trials=200)
    p = vsub.add_parser("bridging", help="gmf versus induced-operator inner product")
    _campaign_args(p, trials=25)
    p.add_argument("--case", action="append", metavar="GROUP/CHAR",
                   help="e.g. sym:3/sign (repeatable; default: the standard seven cases)")
    p.add_argument("--tol", type=float, default=1e-8)

    words = sub.add_parser("words", help="tensor word combinatorics")
    wsub = words.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("count", "list"):
        p = wsub.add_parser(name)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--all", action="store_true", help="all words, not just surjective ones")
        p.add_argument("--enum-cap", type=int, default=ENUM_CAP)

    g = sub.add_parser("gmf", help="evaluate a matrix functional")
    gsub = g.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = gsub.add_parser("eval")
    p.add_argument("--matrix", required=True, help="matrix JSON file")
    p.add_argument("--func", required=True, help="det | per | gmf:GROUP:CHAR")
    p.add_argument("--naive", action="store_true", help="use the group sum even for det/per")
    p.add_argument("--allow-reducible", action="store_true")

    ind = sub.add_parser("induced", help="induced operator on a symmetry class")
    isub = ind.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = isub.add_parser("eval")
    p.add_argument("--matrix", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--char", required=True)
    p.add_argument("--max-dim", type=int, default=None)
    p.add_argument("--out")
    return parser


def _config(args) -> CampaignConfig:
    return CampaignConfig(
        n=parse_range(args.n), k=parse_range(args.k), m=parse_range(args.m),
        trials=args.trials, seed=args.seed,
        tol=Tolerances(args.psd_tol, args.oracle_tol, args.zero_tol),
        max_dim=args.max_dim, enum_cap=args.enum_cap, workers=args.workers, out=args.out,
    )


def _fmt(x):
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.3e}"
    return str(x)


def _print_report(report, out):
    print(f"{report['command']}  (schema {report['schema']})", file=out)
    for cell in report["cells"]:
        params = " ".join(f"{k}={v}" for k, v in cell["params"].items())
        if cell["status"] == "skipped":
            print(f"  [skip] {params}: {cell['notice']}", file=out)
            continue
        worst = {k: v for k, v in cell.items() if k.startswith("worst_")}
        detail = " ".join(f"{k[6:]}={_fmt(v)}" for k, v in worst.items())
        print(f"  [{cell['status']}] {params}: {cell['passed']}/{cell['trials']} passed {detail}", file=out)
    s = report["summary"]
    print(f"verdict: {report['verdict']} ({s['trials_passed']}/{s['trials']} trials, "
          f"{s['skipped']} cells skipped)", file=out)


def _finish(report, args, out) -> int:
    _print_report(report, out)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return {VERDICT_FAIL: EXIT_VIOLATION, VERDICT_NUMERICAL: EXIT_NUMERICAL}.get(report["verdict"], EXIT_OK)


def _complex_str(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}j"


def _dispatch(args, out) -> int:
    if args.cmd == "verify":
        cfg = _config(args)
        if args.claim == "thm2":
            report = run_thm2(cfg)
        elif args.claim == "thm1-bounds":
            report = run_thm1_bounds(cfg, args.general_k)
        elif args.claim == "thm3":
            report = run_thm3(cfg, args.func, args.allow_reducible, args.imag_tol)
        elif args.claim == "corollaries":
            report = run_corollaries(cfg)
        else:
            cases = DEFAULT_BRIDGING_CASES
            if args.case:
                cases = []
                for c in args.case:
                    grp, sep, chi = c.rpartition("/")
                    if not sep:
                        raise _UsageError(f"bad --case {c!r}; expected GROUP/CHAR")
                    cases.append((grp, chi))
            report = run_bridging(cfg, tuple(cases), args.tol)
        return _finish(report, args, out)

    if args.cmd == "words":
        if args.action == "count":
            print(surjective_count(args.k, args.m) if not args.all else args.k**args.m, file=out)
        else:
            for w in enumerate_words(args.k, args.m, "all" if args.all else "surjective", args.enum_cap):
                print(" ".join(map(str, w.letters)), file=out)
        return EXIT_OK

    if args.cmd == "gmf":
        f = parse_functional(args.func, args.allow_reducible)
        x = load_matrix(args.matrix)
        print(_complex_str(f.naive(x) if args.naive else f(x)), file=out)
        return EXIT_OK

    group = parse_group(args.group)
    chi = parse_character(group, args.char)
    a = load_matrix(args.matrix)
    v = symmetry_class(group, chi, a.shape[0], args.max_dim)
    k = induced_operator(a, v, args.max_dim) if v.dim else None
    print(f"symmetry class dimension: {v.dim}", file=out)
    for row in k if k is not None else ():
        print("  " + "  ".join(_complex_str(z) for z in row), file=out)
    if args.out:
        result = {"n": v.n, "m": v.m, "dim": v.dim,
                  "induced": matrix_to_json(k) if k is not None else None}
        with open(args.out, "w") as fh:
            json.dump(result, fh, indent=2)
            fh.write("\n")
    return EXIT_OK


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return _dispatch(args, out)
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (_UsageError, TensorWordError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
