"""Deleting a few vertices to make a graph expanding, and finding a vertex
whose distance classes reach a quarter of the graph quickly."""
from __future__ import annotations

from dataclasses import dataclass

from ..detectors import EXACT_CAP, CoherenceParams, coherence_violation, is_tau_expanding
from ..graph import Graph, bfs_layers_mask, induced_subgraph, iter_mask, members, popcount
from ..search import BudgetError, as_budget
from ..structures import Levelling
from .params import PERMISSIVE, STRICT, ConstructionFailure, ConstructionReport, check_mode


def expansion_params(n: int, c: float) -> tuple[float, float]:
    """``(tau, alpha) = (n^c, n^(1-c)/4)``."""
    return n ** c, n ** (1 - c) / 4


def _coherence_hypothesis(g: Graph, c: float, cap: int):
    """``(n^(1-c)/4, n/4)``-coherence, decided exactly when ``n <= cap``."""
    if g.n > cap:
        return "unchecked"
    n = g.n
    return coherence_violation(g, CoherenceParams(n ** (1 - c) / 4, n / 4), "exact", cap=cap).verified


def _expansion_probe(g: Graph, w: int, tau: float, exact: bool, budget, seed: int):
    """A violating set of ``G[W]`` as a mask of ``G``, or ``None``; the flag
    says whether ``None`` is a proof."""
    sub, order = induced_subgraph(g, iter_mask(w))
    if sub.n == 0:
        return None, True
    out = is_tau_expanding(sub, tau, "exact" if exact else "heuristic", budget, cap=EXACT_CAP, seed=seed)
    if out.found:
        m = 0
        for v in out.certificate:
            m |= 1 << order[v]
        return m, True
    return None, out.verified


def make_expanding(g: Graph, c: float, mode: str = PERMISSIVE, budget=None, seed: int = 0) -> ConstructionReport:
    """Grow ``Y`` by adjoining violating sets of ``G - Y`` while ``|Y|``
    stays within ``n^(1-c)/4``.  Success certifies ``Y`` with ``G - Y``
    ``n^c``-expanding (exactly checked when ``|G - Y|`` fits the cap)."""
    check_mode(mode)
    budget = as_budget(budget)
    n = g.n
    tau, alpha = expansion_params(n, c) if n else (1.0, 0.0)
    checks: dict = {}
    if mode == STRICT:
        checks["coherent"] = _coherence_hypothesis(g, c, EXACT_CAP)
        if checks["coherent"] is not True:
            return ConstructionReport.failure(
                ConstructionFailure("hypotheses", "strict mode needs exactly verified coherence"), checks)
    y = 0
    rounds = 0
    try:
        while True:
            w = g.full_mask & ~y
            exact = popcount(w) <= EXACT_CAP
            if mode == STRICT and not exact:
                raise ConstructionFailure("expansion", "G - Y exceeds the exact cap")
            x, proved = _expansion_probe(g, w, tau, exact, budget, seed + rounds)
            if x is None:
                checks["expanding"] = True if proved else "unverified"
                break
            rounds += 1
            if popcount(x | y) > alpha:
                rest = g.full_mask & ~(g.nbhd_mask(x | y) | x | y)
                raise ConstructionFailure("Y budget exhausted", "violating set would push |Y| past n^(1-c)/4",
                                          Y=members(y), X=members(x),
                                          anticomplete_pair=(members(x | y), members(rest)))
            y |= x
    except ConstructionFailure as exc:
        return ConstructionReport.failure(exc, checks)
    except BudgetError as exc:
        return ConstructionReport.failure(ConstructionFailure("budget", str(exc)), checks)
    checks["size_ok"] = popcount(y) <= alpha
    checks["closed_growth_ok"] = popcount(g.nbhd_mask(y) | y) <= tau * popcount(y)
    return ConstructionReport.success(members(y), checks, rounds=rounds, tau=tau, alpha=alpha)


@dataclass(frozen=True)
class SmallRadius:
    u: int
    k: int
    levelling: Levelling


def radius_bullets(g: Graph, u: int, k: int) -> tuple[bool, bool]:
    """``(|{v : d(u,v) < k}| <= n/2, |{v : d(u,v) = k}| >= n/4)``."""
    layers, _ = bfs_layers_mask(g, u)
    inner = sum(popcount(m) for m in layers[:k])
    at_k = popcount(layers[k]) if k < len(layers) else 0
    return 2 * inner <= g.n, 4 * at_k >= g.n


def small_rad(g: Graph, c: float, mode: str = PERMISSIVE, budget=None, seed: int = 0) -> ConstructionReport:
    """Vertex ``u`` and ``k < 1 + 1/c`` (``k >= 1``) with at most ``n/2``
    vertices closer than ``k`` and at least ``n/4`` at distance exactly
    ``k``.  Vertices outside the expanding set's complement ``Y`` are tried
    first; permissive mode falls back to the rest."""
    check_mode(mode)
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    exp = make_expanding(g, c, mode, budget, seed)
    checks = {"make_expanding": exp.ok}
    if not exp.ok:
        if mode == STRICT:
            return ConstructionReport.failure(ConstructionFailure(exp.stage, exp.reason, **exp.summary), checks)
        y = frozenset()
    else:
        y = exp.certificate
    order = [v for v in range(n) if v not in y]
    if mode == PERMISSIVE:
        order += sorted(y)
    kmax = 1 / c + 1
    for u in order:
        layers, _ = bfs_layers_mask(g, u)
        inner = 1
        for k in range(1, len(layers)):
            if 4 * popcount(layers[k]) >= n:
                break
            inner += popcount(layers[k])
        else:
            continue
        if k < kmax - 1e-9 and 2 * inner <= n:
            lv = Levelling([members(m) for m in layers[: k + 1]])
            checks["outside_Y"] = u not in y
            return ConstructionReport.success(SmallRadius(u, k, lv), checks, tried=order.index(u) + 1)
        if mode == STRICT:
            return ConstructionReport.failure(
                ConstructionFailure("radius", "first vertex outside Y misses the bullets", u=u, k=k), checks)
    return ConstructionReport.failure(ConstructionFailure("radius", "no vertex meets both bullets"), checks)
