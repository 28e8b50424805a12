"""Embedding a pattern graph: lobsters at the branch vertices, then one
induced path per route, each kept away from the earlier ones.

Three strategies are tried in order.  ``"troupe"`` runs the full chain
(multicoverings, spiders, minimal hearts, lobsters).  ``"local"`` builds
height-two lobsters directly around high-degree apexes; it is a desk-scale
shortcut, not part of the argument.  ``"search"`` is a budgeted exact
backtracking fallback.  Whatever succeeds is re-validated as an induced
embedding before it is returned.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..detectors import (EXACT_CAP, contains_induced, find_sparse_side, is_eps_sparse,
                         is_induced_embedding)
from ..graph import (Graph, GraphInputError, complement, induced_subgraph, is_anticomplete_pair,
                     is_complete_pair, iter_mask, mask_of, members, popcount)
from ..oracles import max_anticomplete_pair
from ..search import Budget, BudgetError, as_budget
from ..structures import (Levelling, Lobster, PatternGraph, Troupe, extract_pattern, realize_pattern,
                          route_vertices, validate_troupe)
from .params import (PERMISSIVE, STRICT, ConstructionFailure, ConstructionReport, ParamSet, check_mode,
                     greedy_minimal, need)
from .pathfinder import _coherence_check, get_path_relaxed
from .spiders import build_troupe, spiders_to_lobsters

STRATEGIES = ("troupe", "local", "search")


@dataclass(frozen=True)
class Embedding:
    """Host vertex of every branch vertex, and the host vertex sequence of
    every route from ``alpha`` to ``beta`` (cycles repeat the anchor)."""

    pattern: PatternGraph
    branch: tuple
    routes: tuple
    strategy: str

    def mapping(self) -> tuple:
        """Host vertex of each vertex of ``realize_pattern(pattern)``."""
        out = list(self.branch)
        for seq in self.routes:
            out.extend(seq[1:-1])
        return tuple(out)


def decompose_pattern(h: Graph, min_length: float | None = None) -> tuple[PatternGraph, tuple[int, ...]]:
    """Branch vertices, routes and anchored cycles of ``h``; rejects
    patterns with a route shorter than ``min_length``."""
    if h.n == 0:
        raise GraphInputError("empty pattern")
    p, order = extract_pattern(h)
    if min_length is not None and any(l < min_length for l in p.lengths):
        raise GraphInputError(f"a route is shorter than {min_length}")
    return p, order


def as_pattern(pattern) -> PatternGraph:
    if isinstance(pattern, PatternGraph):
        return pattern
    if isinstance(pattern, Graph):
        return decompose_pattern(pattern)[0]
    raise TypeError("pattern must be a PatternGraph or a Graph")


def _log2_d_inverse(m: int, n: int, c: float) -> float:
    """``log2`` of ``(2^(2^(2n)) + 3(m-1)n) (2+2/c)^(mn)``."""
    big = 2.0 ** (2 * n)
    head = big if big > 60 else math.log2(2 ** int(big) + 3 * (m - 1) * n)
    return head + m * n * math.log2(2 + 2 / c)


def regime_checks(g: Graph, p: PatternGraph, c: float, eps: float) -> dict:
    n_deg = max(p.degrees()) if p.num_branch else 1
    log_d = -_log2_d_inverse(p.num_branch, max(1, n_deg), c)
    size = p.size
    routes = len(p.routes())
    log_lhs = (math.log2(3) + size * size * math.log2(2 + 1 / c)
               + routes * math.log2(4 * max(routes, 1)) + math.log2(eps))
    out = {"branch_length": p.meets_regime(c), "eps_vs_d": log_lhs < log_d,
           "eps_sparse": is_eps_sparse(g, eps)[0] if g.n else True,
           "coherent": _coherence_check(g, eps * g.n ** (1 - c), eps * g.n) if g.n else True}
    return out


# --- route-to-member assignment ----------------------------------------------------

def _touch(g: Graph, a: frozenset, b: frozenset) -> bool:
    am, bm = mask_of(a), mask_of(b)
    return bool(am & bm) or bool(g.nbhd_mask(am) & bm)


def assign_members(g: Graph, p: PatternGraph, lobsters) -> list[tuple[Levelling, Levelling]]:
    """Distinct members for the two ends of every route; pairs whose bases
    meet or touch are preferred, lowest indices first."""
    used = [set() for _ in lobsters]
    out = []
    for alpha, beta, _ in p.routes():
        la, lb = lobsters[alpha].members, lobsters[beta].members
        pairs = [(i, j) for i in range(len(la)) if i not in used[alpha]
                 for j in range(len(lb)) if j not in used[beta] and not (alpha == beta and i == j)]
        if not pairs:
            raise ConstructionFailure("assignment", "a lobster is too short for its branch degree",
                                      branch=(alpha, beta))
        good = [(i, j) for i, j in pairs if _touch(g, la[i].base, lb[j].base)]
        i, j = (good or pairs)[0]
        used[alpha].add(i)
        used[beta].add(j)
        out.append((la[i], lb[j]))
    return out


# --- the route loop ------------------------------------------------------------------

def assemble(g: Graph, p: PatternGraph, lobsters, c: float, eps: float, mode: str = PERMISSIVE,
             budget=None, reserve: float | None = None, strategy: str = "troupe",
             max_branch: int = 6) -> Embedding:
    """Route loop over a lobster per branch vertex; raises
    :class:`ConstructionFailure` naming the route that failed.

    ``reserve`` (permissive only) keeps at least that fraction of every later
    base when the later penultimate sets are minimised; the exact minimal
    choice starves later routes once thresholds round down to one vertex.
    """
    budget = as_budget(budget)
    reserve = (0.0 if mode == STRICT else 1.0) if reserve is None else reserve
    n = g.n
    routes = p.routes()
    npaths = len(routes)
    pairs = assign_members(g, p, lobsters)
    lvs = [lv for pair in pairs for lv in pair]
    all_b = 0
    hearts = 0
    for lv in lvs:
        all_b |= mask_of(lv.base)
        hearts |= mask_of(lv.heart)
    all_b &= ~hearts
    Y = [mask_of(lv.penultimate) for lv in lvs]
    X = [all_b & g.nbhd_mask(y) for y in Y]
    n_deg = max(p.degrees())
    d = 2.0 ** -_log2_d_inverse(p.num_branch, max(1, n_deg), c)
    size = p.size
    found = []
    for h, (alpha, beta, length) in enumerate(routes):
        budget.spend()
        i1, i2 = 2 * h, 2 * h + 1
        w_h = (4 * npaths) ** (-(h + 1)) * d
        base_thr = need((w_h + eps * (size - 1)) * n, mode)
        newY, newX = {}, {}
        for i in range(2 * h + 2, 2 * npaths):
            thr = max(base_thr, 1, math.ceil(reserve * popcount(X[i]) - 1e-9))
            xi = X[i]
            yi = greedy_minimal(Y[i], lambda m, xi=xi: popcount(g.nbhd_mask(m) & xi), thr)
            if yi is None:
                if mode == STRICT:
                    raise ConstructionFailure("route", "later base below its reserve", route=h, member=i)
                yi = Y[i]
            newY[i], newX[i] = yi, g.nbhd_mask(yi) & xi
        z = 0
        for v in newX.values():
            z |= v
        b1, b2 = X[i1] & ~z, X[i2] & ~z
        if not b1 or not b2:
            raise ConstructionFailure("route", "base emptied by later reservations", route=h)
        l1 = Levelling(list(lvs[i1].layers[:-2]) + [members(Y[i1]), members(b1)])
        l2 = Levelling(list(lvs[i2].layers[:-2]) + [members(Y[i2]), members(b2)])
        ell = length - l1.height - l2.height
        if ell < 1:
            raise ConstructionFailure("route", "route shorter than the two heights allow", route=h,
                                      length=length, heights=(l1.height, l2.height))
        dd = w_h if mode == STRICT else 3 * popcount(b1) / n
        params = ParamSet(c, eps, n, dd)
        rep = get_path_relaxed(g, params, ell, l1, l2, mode, budget, max_branch)
        if not rep.ok:
            raise ConstructionFailure("route", f"{rep.stage}: {rep.reason}", route=h)
        seq = tuple(rep.certificate.vertices)
        closed = seq + (seq[0],) if rep.certificate.cycle else seq
        found.append(closed)
        inner = mask_of(closed[1:-1])
        near = inner | g.nbhd_mask(inner)
        for i in newY:
            Y[i] = newY[i]
            X[i] = newX[i] & ~near
    emb = Embedding(p, tuple(lob.apex for lob in lobsters), tuple(found), strategy)
    if not is_induced_embedding(g, realize_pattern(p), emb.mapping()):
        raise ConstructionFailure("validation", "assembled routes do not form an induced copy")
    return emb


# --- lobster sources --------------------------------------------------------------

def _dist_at_least(g: Graph, a: int, others, k: int) -> bool:
    """Every vertex of ``others`` is at distance at least ``k`` from ``a``."""
    ball = frontier = 1 << a
    for _ in range(k - 1):
        frontier = g.nbhd_mask(frontier) & ~ball
        ball |= frontier
    return not ball & mask_of(others)


def _apex_choices(g: Graph, degs: list[int], limit: int):
    """Greedy apex tuples at pairwise distance at least four; the ``k``-th
    tuple starts from the ``k``-th viable candidate for branch vertex 0."""
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    first = [v for v in order if g.degree(v) >= degs[0]]
    for start in first[:limit]:
        chosen = [start]
        for b in range(1, len(degs)):
            nxt = next((v for v in order if g.degree(v) >= degs[b] and v not in chosen
                        and _dist_at_least(g, v, chosen, 4)), None)
            if nxt is None:
                break
            chosen.append(nxt)
        if len(chosen) == len(degs):
            yield chosen


def local_lobsters(g: Graph, apexes, degs) -> list[Lobster]:
    """Height-two lobsters ``({a}, hubs, base)``: the neighbours of ``a``
    are grouped by which component of their outer neighbourhood they
    reach, so each member's base holds one connected region."""
    amask = mask_of(apexes)
    closed_a = amask | g.nbhd_mask(amask)
    groups_all = []
    for a, need_members in zip(apexes, degs):
        nb = g.adj_mask(a)
        outer = g.nbhd_mask(nb) & ~closed_a
        sub, order = induced_subgraph(g, iter_mask(outer))
        comp_of = {}
        seen = 0
        comps = []
        for v in range(sub.n):
            if (seen >> v) & 1:
                continue
            m = 1 << v
            frontier = m
            while frontier:
                frontier = sub.nbhd_mask(frontier) & ~m
                m |= frontier
            seen |= m
            host = mask_of(order[u] for u in iter_mask(m))
            comps.append(host)
        hub_groups = [0] * len(comps)
        for u in iter_mask(nb):
            hits = [popcount(g.adj_mask(u) & cm) for cm in comps]
            if hits and max(hits) > 0:
                k = max(range(len(comps)), key=lambda j: (hits[j], -j))
                hub_groups[k] |= 1 << u
                comp_of[u] = k
        ranked = sorted(range(len(comps)), key=lambda j: (-popcount(comps[j]), j))[:need_members]
        groups = [hub_groups[j] for j in ranked if hub_groups[j]]
        # too few regions (a cycle returns to its own apex): peel the
        # highest hub off the largest group
        while len(groups) < need_members:
            big = max(range(len(groups)), key=lambda j: popcount(groups[j]), default=None)
            if big is None or popcount(groups[big]) < 2:
                raise ConstructionFailure("local", "apex has too few separated regions", apex=a)
            top = 1 << (groups[big].bit_length() - 1)
            groups[big] &= ~top
            groups.append(top)
        # keep the groups pairwise anticomplete
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                groups[j] &= ~g.nbhd_mask(groups[i])
        if any(not gm for gm in groups):
            raise ConstructionFailure("local", "a hub group emptied", apex=a)
        groups_all.append(groups)
    hearts = amask
    for groups in groups_all:
        for gm in groups:
            hearts |= gm
    lobsters = []
    for a, groups in zip(apexes, groups_all):
        mems = []
        for gm in groups:
            base = g.nbhd_mask(gm) & ~closed_a & ~hearts
            if not base:
                raise ConstructionFailure("local", "a member has an empty base", apex=a)
            mems.append(Levelling([{a}, members(gm), members(base)]))
        lobsters.append(Lobster(a, mems))
    return lobsters


def _search_strategy(g: Graph, p: PatternGraph, budget) -> Embedding:
    h = realize_pattern(p)
    out = contains_induced(g, h, budget)
    if not out.found:
        raise ConstructionFailure("search", "no induced copy found" if out.verified else "search budget exhausted")
    emb = out.certificate
    routes = tuple(tuple(emb[v] for v in seq) for seq in route_vertices(p))
    return Embedding(p, tuple(emb[:p.num_branch]), routes, "search")


def find_pattern(g: Graph, pattern, c: float, eps: float, mode: str = PERMISSIVE, budget=None,
                 strategies=STRATEGIES, reserve: float | None = None, attempts: int = 4,
                 search_budget: int = 200_000) -> ConstructionReport:
    """Induced copy of a pattern graph; the certificate is an
    :class:`Embedding` whose mapping is re-checked against the pattern."""
    check_mode(mode)
    budget = as_budget(budget)
    p = as_pattern(pattern)
    for s in strategies:
        if s not in STRATEGIES:
            raise ValueError(f"unknown strategy {s!r}")
    checks: dict = {}
    if mode == STRICT:
        checks.update(regime_checks(g, p, c, eps))
        bad = [k for k, v in checks.items() if v is False]
        if bad:
            return ConstructionReport.failure(ConstructionFailure("hypotheses", "unmet: " + ", ".join(bad)), checks)
    else:
        checks["branch_length"] = p.meets_regime(c)
    degs = p.degrees()
    n_deg = max(1, max(degs))
    log = []
    for strategy in strategies:
        try:
            if strategy == "troupe":
                rep = build_troupe(g, c, p.num_branch, n_deg, eps, mode, budget)
                if not rep.ok:
                    raise ConstructionFailure("troupe", f"{rep.stage}: {rep.reason}")
                lob = spiders_to_lobsters(g, rep.certificate, c, eps, mode, budget)
                if not lob.ok:
                    raise ConstructionFailure("lobsters", f"{lob.stage}: {lob.reason}")
                emb = assemble(g, p, lob.certificate.members, c, eps, mode, budget, reserve, "troupe")
            elif strategy == "local":
                if mode == STRICT:
                    continue
                emb, last = None, None
                for apexes in _apex_choices(g, [max(1, d) for d in degs], attempts):
                    try:
                        lobsters = local_lobsters(g, apexes, [max(1, d) for d in degs])
                        if not validate_troupe(g, Troupe(lobsters, "lobster")):
                            raise ConstructionFailure("local", "lobster troupe invalid")
                        emb = assemble(g, p, lobsters, c, eps, mode, budget, reserve, "local")
                        break
                    except ConstructionFailure as exc:
                        last = exc
                if emb is None:
                    raise last or ConstructionFailure("local", "no apex choice")
            else:
                if mode == STRICT:
                    continue
                emb = _search_strategy(g, p, Budget(search_budget))
        except ConstructionFailure as exc:
            log.append((strategy, exc.stage, exc.reason))
            continue
        except BudgetError as exc:
            log.append((strategy, "budget", str(exc)))
            continue
        checks["embedding"] = is_induced_embedding(g, realize_pattern(p), emb.mapping())
        if not checks["embedding"]:
            log.append((strategy, "validation", "embedding failed re-check"))
            continue
        return ConstructionReport.success(emb, checks, strategy=strategy, attempts=log)
    return ConstructionReport.failure(ConstructionFailure("find_pattern", "every strategy failed", attempts=log), checks)


# --- the driver ---------------------------------------------------------------------

def reduce_and_find(g: Graph, h1: Graph, h2: Graph, c: float, eps: float, mode: str = PERMISSIVE,
                    budget=None, strategies=STRATEGIES, eta: float | None = None) -> ConstructionReport:
    """Best-effort driver: take an ``eta``-sparse side ``X`` (heuristic,
    ``eta`` defaults to ``eps``), then look for ``h1`` in ``G[X]`` or the
    complement of ``h2`` in ``G[X]``; failing that, report the largest pure
    pair found inside ``X``."""
    check_mode(mode)
    budget = as_budget(budget)
    if g.n == 0:
        raise GraphInputError("empty graph")
    x, side = find_sparse_side(g, eps if eta is None else eta, budget)
    order = tuple(sorted(x))
    sub, _ = induced_subgraph(g, order)
    work = sub if side == "graph" else complement(sub)
    target, target_name = (h1, "h1") if side == "graph" else (h2, "h2")
    host = g if side == "graph" else complement(g)
    checks = {"side": side, "size": len(order)}
    attempts = None
    try:
        pattern, _ = decompose_pattern(target)
        rep = find_pattern(work, pattern, c, eps, mode, budget, strategies)
        attempts = rep.summary.get("attempts")
    except GraphInputError as exc:
        rep = None
        attempts = [("pattern", "input", str(exc))]
    if rep is not None and rep.ok:
        real = realize_pattern(pattern)
        iso = contains_induced(real, target)
        if iso.found:
            emb_sub = rep.certificate.mapping()
            emb = tuple(order[emb_sub[iso.certificate[v]]] for v in range(target.n))
            checks["validated"] = is_induced_embedding(host, target, emb)
            if checks["validated"]:
                cert = {"kind": "embedding", "target": target_name, "side": side, "mapping": emb,
                        "strategy": rep.certificate.strategy}
                return ConstructionReport.success(cert, checks)
    exact = len(order) <= EXACT_CAP
    try:
        pair = max_anticomplete_pair(work, "exact" if exact else "heuristic", budget)
    except BudgetError:
        pair = max_anticomplete_pair(work, "heuristic")
    if pair.objective == 0:
        return ConstructionReport.failure(
            ConstructionFailure("reduce", "no embedding and no pure pair inside the sparse side",
                                attempts=attempts), checks)
    a = frozenset(order[v] for v in pair.a)
    b = frozenset(order[v] for v in pair.b)
    kind = "anticomplete" if side == "graph" else "complete"
    ok = is_anticomplete_pair(g, a, b) if kind == "anticomplete" else is_complete_pair(g, a, b)
    checks["validated"] = ok
    nx = len(order)
    big, small = sorted((len(a), len(b)), reverse=True)
    cert = {"kind": "pure_pair", "pair_kind": kind, "a": a, "b": b,
            "linear_threshold": eps * nx, "sublinear_threshold": eps * nx ** (1 - c),
            "meets_thresholds": big >= eps * nx and small >= eps * nx ** (1 - c)}
    if not ok:
        return ConstructionReport.failure(ConstructionFailure("validation", "pair failed re-check"), checks)
    return ConstructionReport.success(cert, checks, attempts=attempts)
