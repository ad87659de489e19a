"""Command line entry point: ``locert <subcommand> ...``.

Exit codes: 0 success, 2 a scheme accepted a NO instance or rejected a YES
instance under its prover, 3 a capacity or budget limit was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from locert import adversary, schemes
from locert.errors import CapacityError, PreconditionError
from locert.experiment import (
    ATTACKS,
    FAMILIES,
    TABLE_PROPERTIES,
    ExperimentConfig,
    build_family,
    certificate_json,
    property_holds,
    prove,
    run_experiment,
)
from locert.graph import CertificateAssignment
from locert.io import dumps, parse_params, parse_symbols, read_graph, write_graph
from locert.words import de_bruijn_word, prefix

EXIT_OK, EXIT_VIOLATION, EXIT_CAPACITY = 0, 2, 3


def _emit(obj, out):
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _budget(args):
    if args.budget is not None:
        return args.budget
    return int(float(os.environ.get("LOCERT_BUDGET", adversary.DEFAULT_BUDGET)))


def _workers(args):
    if args.workers is not None:
        return args.workers
    return int(os.environ.get("LOCERT_WORKERS", "1"))


def cmd_gen(args):
    G, ids = build_family(args.family, parse_params(args.param))
    if args.out:
        write_graph(args.out, G, ids)
    else:
        from locert.io import graph_to_json

        _emit(graph_to_json(G, ids), None)
    return EXIT_OK


def cmd_certify(args):
    G, ids = read_graph(args.graph)
    params = parse_params(args.param)
    s = schemes.make_scheme(args.scheme, params)
    holds = property_holds(s, G)
    if args.certs:
        symbols = parse_symbols(args.certs)
        c = CertificateAssignment(s.alphabet_size, symbols)
    else:
        c = prove(s, G, params)
    out = certificate_json(s, G, c, ids, args.per_vertex)
    out["property"] = holds
    _emit(out, args.out)
    if args.certs:
        return EXIT_VIOLATION if out["accepted"] and not holds else EXIT_OK
    return EXIT_OK if out["accepted"] else EXIT_VIOLATION


def cmd_search(args):
    G, ids = read_graph(args.graph)
    s = schemes.make_scheme(args.scheme, parse_params(args.param))
    if args.samples:
        rep = adversary.sample_search(s, G, args.samples, args.alphabet, args.seed, ids)
    else:
        rep = adversary.exhaustive_search(s, G, args.alphabet, ids, _budget(args), _workers(args))
    holds = property_holds(s, G)
    out = rep.to_json(args.timings)
    out["property"] = holds
    _emit(out, args.out)
    return EXIT_VIOLATION if rep.accepting_assignment is not None and not holds else EXIT_OK


def cmd_attack(args):
    s = schemes.make_scheme(args.scheme, parse_params(args.scheme_param)) if args.scheme else None
    symbols = parse_symbols(args.certs)
    try:
        outcome = ATTACKS[args.kind](parse_params(args.param), symbols, s)
    except adversary.AttackInapplicable as exc:
        _emit({"attack": args.kind, "outcome": "inapplicable", "reason": str(exc)}, args.out)
        return EXIT_OK
    if outcome is None:
        _emit({"attack": args.kind, "outcome": "none"}, args.out)
        return EXIT_OK
    _emit({"attack": args.kind, "outcome": "built", **outcome.to_json()}, args.out)
    return EXIT_VIOLATION if outcome.details.get("target_accepted") else EXIT_OK


def cmd_table(args):
    out = args.out or f"{args.property}_table.csv"
    figure = args.figure or str(Path(out).with_suffix(".png"))
    cfg = ExperimentConfig(
        kind="table", table_property=args.property,
        table_values=[int(x) for x in args.values.split(",")],
        budget=_budget(args), workers=_workers(args),
        csv_out=out, figure_out=figure, include_timings=args.timings,
    )
    report = run_experiment(cfg)
    sys.stdout.write(Path(out).read_text())
    return report.exit_code


def cmd_words(args):
    w = de_bruijn_word(args.k, args.n)
    if args.prefix is not None:
        w = prefix(w, args.prefix)
    sys.stdout.write(" ".join(map(str, w.letters)) + "\n")
    return EXIT_OK


def cmd_run(args):
    data = json.loads(Path(args.config).read_text())
    cfg = ExperimentConfig.from_json(data)
    if args.workers is not None or "LOCERT_WORKERS" in os.environ:
        cfg.workers = _workers(args)
    if args.budget is not None or "LOCERT_BUDGET" in os.environ:
        cfg.budget = _budget(args)
    if args.out:
        cfg.json_out = args.out
    report = run_experiment(cfg)
    if not cfg.json_out:
        _emit(report.to_json(), None)
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="locert", description="Local certification laboratory.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True, scheme=True):
        if graph:
            sp.add_argument("--graph", required=True, help="graph JSON file")
        if scheme:
            sp.add_argument("--scheme", required=True, choices=sorted(schemes.SCHEME_FACTORIES))
        sp.add_argument("--param", default="", help="comma-separated key=value pairs")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--budget", type=int, help="verifier-call budget (env LOCERT_BUDGET)")
        sp.add_argument("--workers", type=int, help="worker processes (env LOCERT_WORKERS)")
        sp.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("gen", help="write a gadget graph as JSON")
    g.add_argument("family", choices=sorted(FAMILIES))
    common(g, graph=False, scheme=False)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("certify", help="run a scheme's prover (or given certificates) and verifier")
    common(c)
    c.add_argument("--certs", help="comma-separated symbols or a JSON file")
    c.add_argument("--per-vertex", action="store_true", help="include every vertex decision")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("search", help="search for an accepting assignment")
    common(s)
    s.add_argument("--alphabet", type=int, help="search symbols 0..C-1 (default: scheme alphabet)")
    s.add_argument("--samples", type=int, default=0, help="random sampling instead of enumeration")
    s.add_argument("--timings", action="store_true")
    s.set_defaults(func=cmd_search)

    a = sub.add_parser("attack", help="run a transfer attack on an assignment")
    a.add_argument("kind", choices=sorted(ATTACKS))
    common(a, graph=False, scheme=False)
    a.add_argument("--certs", required=True, help="comma-separated symbols or a JSON file")
    a.add_argument("--scheme", choices=sorted(schemes.SCHEME_FACTORIES),
                   help="require this scheme to accept the assignment first")
    a.add_argument("--scheme-param", default="")
    a.set_defaults(func=cmd_attack)

    t = sub.add_parser("table", help="scaling table as CSV plus a PNG figure")
    t.add_argument("property", choices=sorted(TABLE_PROPERTIES))
    t.add_argument("--values", required=True, help="comma-separated parameter values")
    t.add_argument("--figure", help="PNG path (default: next to the CSV)")
    t.add_argument("--timings", action="store_true")
    common(t, graph=False, scheme=False)
    t.set_defaults(func=cmd_table)

    w = sub.add_parser("words", help="print a de Bruijn word")
    w.add_argument("k", type=int)
    w.add_argument("n", type=int)
    w.add_argument("--prefix", type=int)
    w.set_defaults(func=cmd_words)

    r = sub.add_parser("run", help="run an experiment from a JSON config")
    r.add_argument("config")
    r.add_argument("--out")
    r.add_argument("--budget", type=int)
    r.add_argument("--workers", type=int)
    r.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
