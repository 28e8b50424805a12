"""Command-line front end.

Exit codes: 0 success, 1 usage or input error, 2 validation failure (or no
certificate produced), 3 search budget exhausted.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

from .detectors import (CoherenceParams, branch_length, coherence_violation, find_antihole_of_length,
                        find_hole_of_length, is_eps_sparse, is_tau_expanding)
from .generators import (LevellingPairSpec, comparability_graph, engineered_levelling_pair, gnp,
                         pattern_library)
from .graph import GraphInputError, format_edge_list, parse_edge_list, read_graph
from .oracles import EXACT_CAP, asymmetric_feasible, fox_bound, max_pure_pair
from .search import Budget, BudgetError, Status
from .structures import check_structure, format_structure, parse_pattern, parse_structure, realize_pattern

CSV_COLUMNS = ("n", "trial", "seed", "objective", "fox_bound", "asym_feasible", "runtime_ms")


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _budget(args) -> Budget:
    return Budget(args.budget)


def _status_code(status: Status) -> int:
    return 3 if status is Status.UNKNOWN else 0


# --- gen ----------------------------------------------------------------------------

def cmd_gen(args) -> int:
    if args.family == "gnp":
        g = gnp(args.n, args.p, args.seed)
    elif args.family == "comparability":
        g = comparability_graph(args.n, args.k, args.seed)
    else:
        spec = LevellingPairSpec.from_text(Path(args.spec).read_text()) if args.spec else LevellingPairSpec()
        g, lv1, lv2 = engineered_levelling_pair(spec, args.seed)
        if args.levellings:
            Path(args.levellings + ".1").write_text(format_structure(lv1))
            Path(args.levellings + ".2").write_text(format_structure(lv2))
    _emit(format_edge_list(g), args.out)
    return 0


# --- check-structure ----------------------------------------------------------------

def cmd_check_structure(args) -> int:
    g = read_graph(args.graph)
    kind, obj, params = parse_structure(Path(args.structure).read_text())
    rep = check_structure(g, kind, obj, params)
    print(f"{kind}: {rep}")
    return 0 if rep else 2


# --- detect ---------------------------------------------------------------------------

def _print_outcome(label: str, out) -> int:
    if out.found:
        cert = out.certificate
        text = " ".join(map(str, sorted(cert) if isinstance(cert, frozenset) else cert))
        print(f"{label}: witness {text}")
    elif out.verified:
        print(f"{label}: verified none")
    else:
        print(f"{label}: unknown (budget exhausted after {out.nodes} nodes)", file=sys.stderr)
    return _status_code(out.status)


def cmd_detect(args) -> int:
    g = read_graph(args.graph)
    budget = _budget(args)
    if args.hole is not None:
        return _print_outcome(f"hole {args.hole}", find_hole_of_length(g, args.hole, args.mode, budget, args.seed))
    if args.antihole is not None:
        return _print_outcome(f"antihole {args.antihole}",
                              find_antihole_of_length(g, args.antihole, args.mode, budget, args.seed))
    if args.branch_length:
        bl = branch_length(g)
        print(f"branch-length: {'inf' if math.isinf(bl) else int(bl)}")
        return 0
    if args.sparse is not None:
        ok, top = is_eps_sparse(g, args.sparse)
        print(f"sparse: {str(ok).lower()}" + ("" if ok else f" (vertex {top})"))
        return 0
    if args.coherent is not None:
        alpha, beta = args.coherent
        out = coherence_violation(g, CoherenceParams(alpha, beta), args.mode, budget, seed=args.seed)
        if out.found:
            a, b = out.certificate
            print(f"coherent: false\nA: {' '.join(map(str, sorted(a)))}\nB: {' '.join(map(str, sorted(b)))}")
            return 0
        if out.verified:
            print("coherent: true")
            return 0
        print("coherent: unknown (budget exhausted)", file=sys.stderr)
        return 3
    if args.expanding is not None:
        return _print_outcome(f"expansion violation tau={args.expanding}",
                              is_tau_expanding(g, args.expanding, args.mode, budget, seed=args.seed))
    raise UsageError("detect needs one of --hole, --antihole, --branch-length, --sparse, --coherent, --expanding")


# --- find-pure-pair ----------------------------------------------------------------

def cmd_find_pure_pair(args) -> int:
    g = read_graph(args.graph)
    res = max_pure_pair(g, args.mode, _budget(args))
    n = g.n
    print(f"kind: {res.kind}")
    print(f"objective: {res.objective}")
    print(f"A: {' '.join(map(str, sorted(res.a)))}")
    print(f"B: {' '.join(map(str, sorted(res.b)))}")
    print(f"fox_bound: {fox_bound(n):.4f}")
    print(f"eps_n: {args.eps * n:.4f}")
    print(f"eps_n_1_minus_c: {args.eps * n ** (1 - args.c):.4f}")
    print(f"asym_feasible: {str(asymmetric_feasible(res, n, args.eps, args.c)).lower()}")
    return 0


# --- pipeline ------------------------------------------------------------------------

def load_pattern(spec: str, length: int = 5):
    lib = pattern_library(length)
    if spec in lib:
        return lib[spec]
    path = Path(spec)
    if not path.exists():
        raise GraphInputError(f"unknown pattern {spec!r}; library has {', '.join(sorted(lib))}")
    return parse_pattern(path.read_text())


def cmd_pipeline(args) -> int:
    from .constructions import find_pattern, reduce_and_find

    g = read_graph(args.graph)
    p1 = load_pattern(args.pattern, args.length)
    budget = _budget(args)
    if args.driver == "find":
        rep = find_pattern(g, p1, args.c, args.eps, args.mode, budget)
    else:
        p2 = load_pattern(args.pattern2, args.length) if args.pattern2 else p1
        rep = reduce_and_find(g, realize_pattern(p1), realize_pattern(p2), args.c, args.eps, args.mode, budget,
                              eta=args.eta)
    print(json.dumps(rep.to_dict(), indent=2, default=str))
    if rep.ok:
        return 0
    return 3 if rep.stage == "budget" else 2


# --- experiment ------------------------------------------------------------------------

def trial_seed(seed: int, n: int, trial: int) -> int:
    return seed * 1_000_003 + n * 1009 + trial


def pure_pair_with_fallback(g, budget_nodes: int | None = None):
    """Heuristic pair first; graphs within the exact cap get the exact
    optimum when the heuristic falls short of the comparability bound."""
    res = max_pure_pair(g, "heuristic", Budget(budget_nodes))
    if res.objective < fox_bound(g.n) and g.n <= EXACT_CAP:
        try:
            res = max_pure_pair(g, "exact", Budget(budget_nodes))
        except BudgetError:
            pass
    return res


def experiment_rows(family: str, sizes, trials: int, c: float, eps: float, seed: int,
                    k: int = 2, p: float = 0.5, budget_nodes: int | None = None) -> list[dict]:
    rows = []
    for n in sizes:
        for trial in range(trials):
            s = trial_seed(seed, n, trial)
            g = comparability_graph(n, k, s) if family == "comparability" else gnp(n, p, s)
            t0 = time.perf_counter()
            res = pure_pair_with_fallback(g, budget_nodes)
            ms = (time.perf_counter() - t0) * 1000
            rows.append({"n": n, "trial": trial, "seed": s, "objective": res.objective,
                         "fox_bound": round(fox_bound(n), 4),
                         "asym_feasible": asymmetric_feasible(res, n, eps, c),
                         "runtime_ms": round(ms, 2)})
    rows.sort(key=lambda r: (r["n"], r["trial"]))
    return rows


def cmd_experiment(args) -> int:
    try:
        sizes = [int(x) for x in args.sizes.split(",") if x]
    except ValueError:
        raise UsageError("--sizes must be a comma-separated list of integers")
    rows = experiment_rows(args.family, sizes, args.trials, args.c, args.eps, args.seed, args.k, args.p)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.out:
            fh.close()
    short = [r for r in rows if r["objective"] < r["fox_bound"]]
    if short:
        print(f"{len(short)} of {len(rows)} rows fall below n/(4 log2 n)", file=sys.stderr)
    return 0


# --- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="purepairs", description="Pure pairs and long-branch induced subgraphs")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph")
    g.add_argument("--family", choices=("gnp", "comparability", "fixture"), required=True)
    g.add_argument("--n", type=int, default=20)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--spec", help="key=value spec file for --family fixture")
    g.add_argument("--levellings", help="fixture only: write levellings to PREFIX.1 and PREFIX.2")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check-structure", help="validate a structure file against a graph")
    c.add_argument("graph")
    c.add_argument("structure")
    c.set_defaults(func=cmd_check_structure)

    d = sub.add_parser("detect", help="run one detector")
    d.add_argument("graph")
    what = d.add_mutually_exclusive_group(required=True)
    what.add_argument("--hole", type=int)
    what.add_argument("--antihole", type=int)
    what.add_argument("--branch-length", action="store_true")
    what.add_argument("--sparse", type=float, metavar="EPS")
    what.add_argument("--coherent", type=float, nargs=2, metavar=("ALPHA", "BETA"))
    what.add_argument("--expanding", type=float, metavar="TAU")
    d.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    d.add_argument("--budget", type=int)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_detect)

    f = sub.add_parser("find-pure-pair", help="largest pure pair")
    f.add_argument("graph")
    f.add_argument("--mode", choices=("exact", "heuristic"), default="exact")
    f.add_argument("--budget", type=int)
    f.add_argument("--eps", type=float, default=0.1)
    f.add_argument("--c", type=float, default=0.5)
    f.set_defaults(func=cmd_find_pure_pair)

    p = sub.add_parser("pipeline", help="sparse-side reduction and pattern embedding")
    p.add_argument("graph")
    p.add_argument("--pattern", required=True, help="library name or pattern file")
    p.add_argument("--pattern2", help="second pattern for the complement side (default: --pattern)")
    p.add_argument("--length", type=int, default=5, help="route length for library patterns")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=1e-12)
    p.add_argument("--eta", type=float, default=0.1, help="sparsity of the side searched by the reduce driver")
    p.add_argument("--mode", choices=("strict", "permissive"), default="permissive")
    p.add_argument("--driver", choices=("reduce", "find"), default="reduce")
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_pipeline)

    e = sub.add_parser("experiment", help="pure-pair sizes against n/(4 log2 n), as CSV")
    e.add_argument("--family", choices=("comparability", "gnp"), default="comparability")
    e.add_argument("--sizes", required=True)
    e.add_argument("--trials", type=int, default=20)
    e.add_argument("--c", type=float, default=0.5)
    e.add_argument("--eps", type=float, default=0.1)
    e.add_argument("--k", type=int, default=2)
    e.add_argument("--p", type=float, default=0.5)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GraphInputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
