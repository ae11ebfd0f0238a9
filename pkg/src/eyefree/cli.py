"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 sampling budget exhausted,
3 a checked identity or inequality failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .constructions import b_construction, blowup, distance_to_class, r_construction
from .errors import BudgetExhausted, TheoremCheckError
from .extremal import config_hash, exact_check, first_matching_n, kex_bruteforce, rb_region
from .igraph import as_rat, dumps, loads
from .pattern import Pattern, eye
from .randmodel import Sampler, structure_distances
from .typecalc import kappa_formula, kappa_search, lambda_p
from .typegraph import TypeGraph
from .verify import SUITES, frac, verify_suite

THREADS_ENV = "EYEFREE_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _eye(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected a,b") from exc
    return a, b


def _exact_p(text: str) -> Fraction:
    try:
        return as_rat(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _mc_p(text: str) -> Fraction:
    try:
        return as_rat(text, allow_float=True)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="eyefree", description="Eye-free igraphs: types, extremal search and sampling.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=False):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--threads", type=int, default=_default_threads(),
                        help=f"worker processes (default from {THREADS_ENV}, else 1)")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("kappa", help="kappa_p of an eye: formula, optionally by type search")
    sp.add_argument("--eye", type=_eye, required=True, metavar="A,B")
    sp.add_argument("--p", type=_exact_p, required=True, help="exact fraction num/den")
    sp.add_argument("--kmax", type=int, help="also search p-core types with up to KMAX vertices")
    common(sp)

    sp = sub.add_parser("lambda", help="exact p-value of a type")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--type", dest="type_file", help="file holding 'k=..; vcolors=..; ecolors=..'")
    g.add_argument("--type-text", help="the type text itself")
    sp.add_argument("--p", type=_exact_p, required=True)
    common(sp)

    sp = sub.add_parser("kex", help="maximum p-weight of an eye-free igraph on n vertices")
    sp.add_argument("--eye", type=_eye, required=True, metavar="A,B")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=_exact_p, required=True)
    sp.add_argument("--mode", choices=("exhaustive", "bnb"), default="exhaustive")
    common(sp)

    sp = sub.add_parser("exact-check", help="compare brute-force extremal igraphs with the constructions")
    sp.add_argument("--eye", type=_eye, required=True, metavar="A,B")
    sp.add_argument("--p", type=_exact_p, required=True)
    sp.add_argument("--n", type=int, nargs="+", required=True, help="one or more sizes")
    sp.add_argument("--mode", choices=("exhaustive", "bnb"), default="exhaustive")
    common(sp)

    sp = sub.add_parser("region", help="achievable (R, B) densities of eye-free igraphs")
    sp.add_argument("--eye", type=_eye, required=True, metavar="A,B")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--csv", help="write points as CSV here instead of stdout")
    common(sp)

    sp = sub.add_parser("construct", help="emit a construction in igraph text format")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--B", nargs=2, type=int, metavar=("A", "N"), help="A blue cliques on N vertices")
    g.add_argument("--R", nargs=2, type=int, metavar=("B", "N"), help="B-1 red cliques on N vertices")
    g.add_argument("--blowup", nargs=2, metavar=("TYPEFILE", "SIZES"), help="sizes as comma list")
    sp.add_argument("--p", type=_exact_p, help="record p in the header line")
    sp.add_argument("--out")

    sp = sub.add_parser("sample", help="conditioned samples with distances to the extremal structures")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=_mc_p, required=True, help="fraction or decimal")
    sp.add_argument("--eye", type=_eye, required=True, metavar="A,B")
    sp.add_argument("--samples", type=int, default=10)
    sp.add_argument("--budget", type=int, default=10**7, help="draws allowed per accepted sample")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--csv", help="write rows here instead of stdout")

    sp = sub.add_parser("distance", help="edit distance of an igraph to a construction class")
    sp.add_argument("--graph", required=True, help="igraph text file")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--B", type=int, metavar="A", help="A blue cliques joined by green")
    g.add_argument("--R", type=int, metavar="B", help="B-1 red cliques joined by green")
    sp.add_argument("--heuristic", action="store_true", help="force the local-search upper bound")
    common(sp, seed=True)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True, help=f"one of {', '.join(SUITES)}, or all")
    common(sp, seed=True)
    return ap


# output helpers ---------------------------------------------------------------

def _header(args, argv) -> dict:
    config = {k: v for k, v in vars(args).items() if k not in ("out", "threads", "csv")}
    config = json.loads(json.dumps(config, default=str))
    return {"version": __version__, "config": config, "config_hash": config_hash(config),
            "seed": getattr(args, "seed", None), "argv": list(argv)}


def _emit_json(obj: dict, path: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header: dict, columns: list[str], rows: list[list], path: str | None) -> None:
    buf = io.StringIO()
    buf.write(f"# version={header['version']} config_hash={header['config_hash']} seed={header['seed']}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    if path:
        Path(path).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


def _report(rep) -> dict:
    return {"optimum": frac(rep.optimum), "extremal": [dumps(G).splitlines()[1] if G.n > 1 else "" for G in rep.extremal],
            "extremal_count": len(rep.extremal), "nodes": rep.nodes, "pruned": rep.pruned,
            "timing": {"wall_time": rep.wall_time}}


# commands ------------------------------------------------------------------------

def cmd_kappa(args, head):
    a, b = args.eye
    f = kappa_formula(a, b, args.p)
    out = {**head, "value": frac(f.value), "regime": f.regime, "threshold": frac(f.threshold),
           "blue_branch": frac(f.blue_branch), "red_branch": frac(f.red_branch)}
    if args.kmax:
        r = kappa_search(eye(a, b), args.p, args.kmax)
        out["search"] = {"value": frac(r.value), "maximizers": [t.to_text() for t in r.maximizers],
                         "at_boundary": r.at_boundary, "agrees": r.value == f.value}
    if args.out:
        _emit_json(out, args.out)
    print(f"kappa = {f.value}  regime = {f.regime}  threshold = {f.threshold}")
    return 0


def cmd_lambda(args, head):
    text = Path(args.type_file).read_text() if args.type_file else args.type_text
    tau = TypeGraph.from_text(text)
    r = lambda_p(tau, args.p)
    _emit_json({**head, "type": tau.to_text(), "value": frac(r.value), "x": [frac(v) for v in r.x],
                "support": list(r.support), "certificate": [frac(v) for v in r.certificate]}, args.out)
    return 0


def cmd_kex(args, head):
    rep = kex_bruteforce(eye(*args.eye), args.n, args.p, args.mode, args.threads)
    _emit_json({**head, **_report(rep)}, args.out)
    return 0


def cmd_exact_check(args, head):
    a, b = args.eye
    verdicts = [exact_check(a, b, args.p, n, args.mode, args.threads) for n in args.n]
    rows = [{"n": v.n, "verdict": v.verdict, "optimum": frac(v.optimum), "construction": frac(v.predicted_weight),
             "extremal_count": v.extremal_count} for v in verdicts]
    _emit_json({**head, "verdicts": rows, "first_matching_n": first_matching_n(verdicts)}, args.out)
    return 0


def cmd_region(args, head):
    rep = rb_region(*args.eye, args.n, args.threads)
    rows = [[f"{pt.R.numerator}/{pt.R.denominator}", f"{pt.B.numerator}/{pt.B.denominator}",
             f"{float(pt.R):.6f}", f"{float(pt.B):.6f}", dumps(pt.witness).splitlines()[1]] for pt in rep.points]
    _emit_csv(head, ["R", "B", "R_decimal", "B_decimal", "witness"], rows, args.csv)
    sys.stderr.write(f"slack {rep.slack} (swapped orientation {rep.slack_swapped})\n")
    return 0


def cmd_construct(args, head):
    if args.B:
        G = b_construction(args.B[1], args.B[0])
    elif args.R:
        G = r_construction(args.R[1], args.R[0] - 1)
    else:
        tau = TypeGraph.from_text(Path(args.blowup[0]).read_text())
        G = blowup(tau, [int(s) for s in args.blowup[1].split(",")])
    text = dumps(G, args.p)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sample(args, head):
    a, b = args.eye
    H = eye(a, b)
    sampler = Sampler(args.n, args.p, args.seed, args.budget)
    rows = []
    for i in range(args.samples):
        G, trials = sampler.draw_conditioned(H)
        d = structure_distances(G, a, b)
        rows.append([i, trials, G.edge_count(), d["d_partite"], d["d_copartite"], d["d_min"]])
    _emit_csv(head, ["sample", "trials", "edges", "d_partite", "d_copartite", "d_min"], rows, args.csv)
    return 0


def cmd_distance(args, head):
    G, _ = loads(Path(args.graph).read_text())
    cls, t = ("B", args.B) if args.B is not None else ("R", args.R - 1)
    r = distance_to_class(G, cls, t, exact=False if args.heuristic else None, seed=args.seed)
    _emit_json({**head, "edits": r.edits, "exact": r.exact, "partition": [list(p) for p in r.partition]}, args.out)
    return 0


def cmd_verify(args, head):
    names = SUITES if args.suite == "all" else (args.suite,)
    if not args.suite or (args.suite != "all" and args.suite not in SUITES):
        raise UsageError(f"unknown suite {args.suite!r}")
    reports = [verify_suite(s, args.seed, args.threads) for s in names]
    out = reports[0] if len(reports) == 1 else {"version": __version__, "suites": reports,
                                                "passed": all(r["passed"] for r in reports)}
    _emit_json(out, args.out)
    for r in reports:
        for c in r["checks"]:
            sys.stderr.write(f"{'PASS' if c['passed'] else 'FAIL'} {r['config']['suite']}/{c['name']}\n")
    return 0 if all(r["passed"] for r in reports) else 3


COMMANDS = {
    "kappa": cmd_kappa, "lambda": cmd_lambda, "kex": cmd_kex, "exact-check": cmd_exact_check,
    "region": cmd_region, "construct": cmd_construct, "sample": cmd_sample, "distance": cmd_distance,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        head = _header(args, argv)
        return COMMANDS[args.command](args, head)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except BudgetExhausted as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return 2
    except TheoremCheckError as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
