"""Command-line surface: one subcommand per operation group, NDJSON/CSV output.

Exit status: 0 success, 1 a checked property fails, 2 usage or input error,
3 a resource cap or budget was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import CapExceeded, FamilyFormatError, GensetError
from . import bounds as bounds_mod
from . import families as fam_mod
from . import generate as gen_mod
from . import graphs as graph_mod
from . import search as search_mod

EXIT_OK = 0
EXIT_PROPERTY_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _jsonable(value):
    if isinstance(value, Fraction):
        return {"rational": f"{value.numerator}/{value.denominator}", "approx": float(value)}
    if isinstance(value, bounds_mod.BoundValue):
        out = _jsonable(value.value) if value.exact else {"approx": float(value.value)}
        out["exact"] = value.exact
        if value.precision_bits is not None:
            out["precision_bits"] = value.precision_bits
        return out
    if isinstance(value, float):
        return value
    return value


def _emit(record: dict, out=None) -> None:
    print(json.dumps(record, sort_keys=True), file=out or sys.stdout)


def _read_family(path: str) -> fam_mod.SetFamily:
    with open(path) as fh:
        return fam_mod.parse_family(fh.read())


def _read_graph(path: str) -> graph_mod.Graph:
    with open(path) as fh:
        return graph_mod.parse_graph(fh.read())


def _parse_set(text: str, n: int) -> int:
    if text == "-":
        return 0
    return fam_mod.mask_from_elements((int(tok) for tok in text.split(",")), n)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genset",
        description="Exact tools for disjoint-union generators of the power set of [n].",
    )
    parser.add_argument("--no-meta", action="store_true", help="omit the timestamped meta record")
    parser.add_argument("--config", help="key=value file overriding cap defaults")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker cap (GENSET_THREADS fallback); evaluation is deterministic either way")
    parser.add_argument("--dp-cap", type=int, default=gen_mod.DEFAULT_DP_CAP,
                        help="max n for the 2^n disjoint-union table")
    parser.add_argument("--base-cap", type=int, default=gen_mod.DEFAULT_BASE_CAP,
                        help="max n for the k-base check")
    parser.add_argument("--graph-cap", type=int, default=graph_mod.DEFAULT_GRAPH_CAP,
                        help="max vertices for graph construction")
    parser.add_argument("--node-budget", type=int, default=search_mod.DEFAULT_NODE_BUDGET)
    parser.add_argument("--time-budget", type=float, default=search_mod.DEFAULT_TIME_BUDGET)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="canonical generator as a family file")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-o", "--output", help="write the family file here instead of stdout")

    p = sub.add_parser("check", help="k-generator / k-base / decomposition checks")
    p.add_argument("--family", required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--base", action="store_true", help="check the k-base property instead")
    p.add_argument("--decompose", metavar="SET",
                   help="also decompose this set ('1,3,4' or '-')")

    p = sub.add_parser("search-min", help="exact minimum k-generator size")
    p.add_argument("-n", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--sweep", action="store_true", help="sweep all k <= k-max, k <= n <= n-max (CSV)")
    p.add_argument("--n-max", type=int)
    p.add_argument("--k-max", type=int)

    p = sub.add_parser("graph", help="disjointness graph, clique counts and densities")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="build the disjointness graph of this family")
    src.add_argument("--graph", help="read an edge-list graph instead")
    p.add_argument("--count-cliques", type=int, metavar="R")
    p.add_argument("--density", type=int, metavar="R")
    p.add_argument("--emit", help="write the graph in edge-list format here")

    p = sub.add_parser("turan", help="Turán densities, blow-up graphs, Erdős maximization check")
    tsub = p.add_subparsers(dest="action", required=True)
    q = tsub.add_parser("eta")
    q.add_argument("-r", type=int, required=True)
    q.add_argument("-s", type=int, required=True)
    q = tsub.add_parser("graph")
    q.add_argument("-s", type=int, required=True)
    q.add_argument("-T", type=int, required=True)
    q.add_argument("--emit", help="write the graph in edge-list format here")
    q = tsub.add_parser("closed-form")
    q.add_argument("-s", type=int, required=True)
    q.add_argument("-T", type=int, required=True)
    q.add_argument("-r", type=int, required=True)
    q = tsub.add_parser("erdos-max")
    q.add_argument("-l", type=int, required=True)
    q.add_argument("-s", type=int, required=True)
    q.add_argument("-r", type=int, required=True)

    p = sub.add_parser("blowup", help="exact complete multipartite blow-up finder")
    p.add_argument("--graph", required=True)
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-t", type=int, required=True)

    p = sub.add_parser("bounds", help="counting bounds and probability bounds")
    bsub = p.add_subparsers(dest="action", required=True)
    q = bsub.add_parser("trivial")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("-k", type=int, required=True)
    q = bsub.add_parser("lemma4")
    q.add_argument("-n", type=int, required=True)
    q.add_argument("-k", type=int, required=True)
    q.add_argument("-m", type=int, required=True)
    q.add_argument("-t", type=int, required=True)
    q.add_argument("--delta", type=_fraction)
    q = bsub.add_parser("union-check")
    q.add_argument("--family", required=True)
    q.add_argument("-k", type=int, required=True)
    q.add_argument("-t", type=int, required=True)
    q.add_argument("--delta", type=_fraction)
    q.add_argument("--trials", type=int)
    q.add_argument("--seed", type=int)
    q = bsub.add_parser("coverage")
    q.add_argument("--family", required=True)
    q.add_argument("-k", type=int, required=True)
    q = bsub.add_parser("table")
    q.add_argument("--n-min", type=int, default=1)
    q.add_argument("--n-max", type=int, required=True)
    q.add_argument("--k-min", type=int, default=1)
    q.add_argument("--k-max", type=int, required=True)

    p = sub.add_parser("experiment", help="dense-subset and union-probability experiments")
    esub = p.add_subparsers(dest="action", required=True)
    q = esub.add_parser("dense-subset")
    q.add_argument("--graph", required=True)
    q.add_argument("-l", type=int, required=True)
    q.add_argument("-r", type=int, required=True)
    q.add_argument("--threshold", type=_fraction, required=True)
    q.add_argument("--sample", type=int)
    q.add_argument("--seed", type=int)
    q = esub.add_parser("union-prob")
    q.add_argument("--family", required=True)
    q.add_argument("-t", type=int, required=True)
    q.add_argument("--threshold", type=int, required=True)
    q.add_argument("--sample", type=int)
    q.add_argument("--seed", type=int)

    return parser


def _apply_config(args) -> None:
    if not args.config:
        return
    with open(args.config) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in {"dp_cap", "base_cap", "graph_cap", "node_budget", "time_budget", "threads"}:
                raise GensetError(f"unknown config key {key!r}")
            setattr(args, key, float(val) if key == "time_budget" else int(val))


def _cmd_construct(args) -> int:
    fam = fam_mod.canonical_generator(args.n, args.k)
    text = fam_mod.format_family(fam)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
        _emit({"written": args.output, "n": args.n, "k": args.k, "size": fam.m})
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_check(args) -> int:
    fam = _read_family(args.family)
    status = EXIT_OK
    if args.base:
        verdict = gen_mod.is_k_base(fam, args.k, base_cap=args.base_cap)
        op = "is_k_base"
    else:
        verdict = gen_mod.is_k_generator(fam, args.k, dp_cap=args.dp_cap)
        op = "is_k_generator"
    record = {"op": op, "k": args.k, "holds": verdict.holds}
    if not verdict.holds:
        record["counterexample"] = fam_mod.format_mask(verdict.counterexample)
        status = EXIT_PROPERTY_FAIL
    _emit(record)
    if args.decompose is not None:
        target = _parse_set(args.decompose, fam.n)
        dec = gen_mod.decompose(fam, args.k, target, dp_cap=args.dp_cap)
        rec = {"op": "decompose", "target": fam_mod.format_mask(target), "found": dec is not None}
        if dec is not None:
            rec["parts"] = [fam_mod.format_mask(p) for p in dec.parts]
        else:
            status = EXIT_PROPERTY_FAIL
        _emit(rec)
    return status


def _sweep_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["n", "k", "trivial_bound", "canonical_size", "minimum", "conjecture_holds", "nodes", "seconds"]
    )
    for r in reports:
        writer.writerow([
            r.n, r.k,
            fam_mod.trivial_lower_bound(r.n, r.k),
            fam_mod.canonical_size(r.n, r.k),
            r.minimum if r.minimum is not None else "inconclusive",
            r.conjecture_holds if r.conjecture_holds is not None else "unknown",
            r.nodes_explored,
            f"{r.seconds:.3f}",
        ])
    return buf.getvalue()


def _cmd_search_min(args) -> int:
    if args.sweep:
        if args.n_max is None or args.k_max is None:
            raise GensetError("--sweep requires --n-max and --k-max")
        reports = search_mod.verify_conjecture_range(
            args.n_max, args.k_max, node_budget=args.node_budget, time_budget=args.time_budget
        )
        sys.stdout.write(_sweep_csv(reports))
        return EXIT_BUDGET if any(not r.conclusive for r in reports) else EXIT_OK
    if args.n is None or args.k is None:
        raise GensetError("single search requires -n and -k")
    report = search_mod.min_generator_size(
        args.n, args.k, node_budget=args.node_budget, time_budget=args.time_budget
    )
    record = {
        "n": report.n, "k": report.k, "minimum": report.minimum,
        "conjecture_holds": report.conjecture_holds, "conclusive": report.conclusive,
        "lower_bound": report.lower_bound, "upper_bound": report.upper_bound,
        "nodes": report.nodes_explored,
        "canonical_size": fam_mod.canonical_size(report.n, report.k),
    }
    if report.witness is not None:
        record["witness"] = [fam_mod.format_mask(g) for g in report.witness.members]
    _emit(record)
    return EXIT_OK if report.conclusive else EXIT_BUDGET


def _cmd_graph(args) -> int:
    if args.family:
        fam = _read_family(args.family)
        g = graph_mod.disjointness_graph(fam, graph_cap=args.graph_cap)
    else:
        g = _read_graph(args.graph)
    record = {"vertices": g.m, "edges": g.edge_count()}
    if args.count_cliques is not None:
        record[f"k{args.count_cliques}_count"] = graph_mod.count_cliques(g, args.count_cliques)
    if args.density is not None:
        record[f"k{args.density}_density"] = _jsonable(graph_mod.clique_density(g, args.density))
    if args.emit:
        with open(args.emit, "w") as fh:
            fh.write(graph_mod.format_graph(g))
        record["written"] = args.emit
    _emit(record)
    return EXIT_OK


def _cmd_turan(args) -> int:
    if args.action == "eta":
        _emit({"eta": _jsonable(graph_mod.turan_eta(args.r, args.s)), "r": args.r, "s": args.s})
        return EXIT_OK
    if args.action == "graph":
        g = graph_mod.turan_blowup_graph(args.s, args.T, graph_cap=args.graph_cap)
        record = {"vertices": g.m, "edges": g.edge_count(), "s": args.s, "T": args.T}
        if args.emit:
            with open(args.emit, "w") as fh:
                fh.write(graph_mod.format_graph(g))
            record["written"] = args.emit
        _emit(record)
        return EXIT_OK
    if args.action == "closed-form":
        _emit({
            "count": graph_mod.turan_clique_closed_form(args.s, args.T, args.r),
            "s": args.s, "T": args.T, "r": args.r,
        })
        return EXIT_OK
    report = graph_mod.erdos_max_check(args.l, args.s, args.r)
    _emit({
        "l": report.l, "s": report.s, "r": report.r,
        "max_count": report.max_count, "turan_count": report.turan_count,
        "attained_by_turan": report.attained_by_turan,
        "graphs_enumerated": report.graphs_enumerated,
    })
    return EXIT_OK if report.attained_by_turan else EXIT_PROPERTY_FAIL


def _cmd_blowup(args) -> int:
    g = _read_graph(args.graph)
    classes = graph_mod.find_blowup(g, args.a, args.t)
    record = {"a": args.a, "t": args.t, "found": classes is not None}
    if classes is not None:
        record["classes"] = [list(c) for c in classes]
    _emit(record)
    return EXIT_OK if classes is not None else EXIT_PROPERTY_FAIL


def _cmd_bounds(args) -> int:
    if args.action == "trivial":
        _emit({"n": args.n, "k": args.k, "trivial_bound": fam_mod.trivial_lower_bound(args.n, args.k)})
        return EXIT_OK
    if args.action == "lemma4":
        params = bounds_mod.BoundParams(n=args.n, k=args.k, m=args.m, t=args.t, delta=args.delta)
        value = bounds_mod.lemma4_bound(params)
        _emit({
            "n": args.n, "k": args.k, "m": args.m, "t": args.t,
            "delta": _jsonable(params.resolved_delta()),
            "bound": _jsonable(value),
        })
        return EXIT_OK
    if args.action == "union-check":
        fam = _read_family(args.family)
        report = bounds_mod.union_bound_check(
            fam, args.k, delta=args.delta, t=args.t, seed=args.seed, trials=args.trials
        )
        prob = report.probability
        _emit({
            "n": fam.n, "k": args.k, "m": fam.m, "t": args.t,
            "threshold": report.threshold,
            "probability": _jsonable(prob.value) if prob.exact else {
                "approx": prob.value, "trials": prob.trials, "std_error": prob.std_error,
            },
            "analytic_bound": _jsonable(report.analytic),
            "in_regime": report.in_regime,
            "bound_holds": report.bound_holds,
        })
        return EXIT_OK if report.bound_holds or not report.in_regime else EXIT_PROPERTY_FAIL
    if args.action == "coverage":
        fam = _read_family(args.family)
        verdict = gen_mod.is_k_generator(fam, args.k, dp_cap=args.dp_cap)
        report = bounds_mod.coverage_inequality_check(fam, args.k, verified_generator=verdict.holds)
        _emit({
            "k": args.k, "tuples": report.tuples, "two_to_n": report.two_to_n,
            "holds": report.holds, "verified_generator": report.verified_generator,
        })
        return EXIT_OK if report.holds or not verdict.holds else EXIT_PROPERTY_FAIL
    rows = bounds_mod.bound_table(
        range(args.n_min, args.n_max + 1), range(args.k_min, args.k_max + 1)
    )
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "k", "trivial_bound", "weak_constant_bound", "strong_constant_bound", "canonical_size"])
    for row in rows:
        writer.writerow([
            row.n, row.k, row.trivial_bound,
            f"{row.weak_constant_bound:.6g}", f"{row.strong_constant_bound:.6g}",
            row.canonical_size,
        ])
    sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _cmd_experiment(args) -> int:
    if args.action == "dense-subset":
        g = _read_graph(args.graph)
        result = graph_mod.dense_subset_fraction(
            g, args.l, args.r, args.threshold, sample=args.sample, seed=args.seed
        )
        _emit({
            "l": args.l, "r": args.r,
            "threshold": _jsonable(args.threshold),
            "fraction": _jsonable(result.fraction) if result.exact else result.fraction,
            "exact": result.exact,
            "subsets": result.total,
        })
        return EXIT_OK
    fam = _read_family(args.family)
    est = bounds_mod.small_union_probability(
        fam, args.t, args.threshold, seed=args.seed, trials=args.sample
    )
    record = {"t": args.t, "threshold": args.threshold, "exact": est.exact}
    if est.exact:
        record["probability"] = _jsonable(est.value)
    else:
        record.update({"probability": est.value, "trials": est.trials, "std_error": est.std_error})
    _emit(record)
    return EXIT_OK


_COMMANDS = {
    "construct": _cmd_construct,
    "check": _cmd_check,
    "search-min": _cmd_search_min,
    "graph": _cmd_graph,
    "turan": _cmd_turan,
    "blowup": _cmd_blowup,
    "bounds": _cmd_bounds,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        if args.threads is None:
            args.threads = int(os.environ.get("GENSET_THREADS", "1"))
        if not args.no_meta:
            _emit({"meta": {"tool": "genset", "version": __version__, "timestamp": time.time()}})
        return _COMMANDS[args.command](args)
    except FamilyFormatError as exc:
        print(f"genset: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"genset: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except GensetError as exc:
        print(f"genset: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"genset: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
