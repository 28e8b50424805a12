"""Deciders and witness finders for sparsity, coherence, expansion, holes,
branch-length and induced containment.

Exact modes are exhaustive and refuse graphs above ``cap`` vertices with
:class:`BudgetError`; running out of node budget yields ``Status.UNKNOWN``.
Heuristic modes never report ``Status.VERIFIED``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass

import numpy as np

from .graph import Graph, complement, induced_subgraph, iter_mask, mask_of, members, popcount
from .oracles import (_greedy_anticomplete, find_anticomplete_pair, is_induced_cycle)
from .search import Budget, BudgetError, SearchOutcome, Status, as_budget

EXACT_CAP = 20


def ceil_threshold(x: float) -> int:
    """Smallest integer cardinality meeting a real threshold ``x``."""
    return max(0, math.ceil(x - 1e-9))


def is_eps_sparse(g: Graph, eps: float) -> tuple[bool, int | None]:
    """``(max degree < eps * n, a maximum-degree vertex)``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if g.n == 0:
        return True, None
    degs = g.degrees()
    top = max(range(g.n), key=lambda v: (degs[v], -v))
    return degs[top] < eps * g.n, top


@dataclass(frozen=True)
class CoherenceParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("alpha and beta must be non-negative")


def _check_mode(mode: str) -> None:
    if mode not in ("exact", "heuristic"):
        raise ValueError(f"mode must be 'exact' or 'heuristic', got {mode!r}")


def coherence_violation(g: Graph, p: CoherenceParams, mode: str = "exact", budget=None,
                        cap: int = EXACT_CAP, seed: int = 0) -> SearchOutcome:
    """Search for disjoint anticomplete ``A, B`` with ``|A| >= alpha`` and
    ``|B| >= beta``.  A found pair is ``(A, B)`` as frozensets."""
    _check_mode(mode)
    budget = as_budget(budget)
    need_a, need_b = ceil_threshold(p.alpha), ceil_threshold(p.beta)
    if mode == "exact":
        if g.n > cap:
            raise BudgetError(f"exact coherence search capped at n <= {cap} (n = {g.n})")
        try:
            pair = find_anticomplete_pair(g, need_a, need_b, budget)
        except BudgetError:
            return SearchOutcome(Status.UNKNOWN, nodes=budget.used)
        if pair is None:
            return SearchOutcome(Status.VERIFIED, nodes=budget.used)
        return SearchOutcome.witness((members(pair[0]), members(pair[1])), budget.used)
    pair = _peel_anticomplete(g, need_a, need_b, budget, seed)
    if pair is None:
        return SearchOutcome(Status.UNKNOWN, nodes=budget.used)
    return SearchOutcome.witness(pair, budget.used)


def _peel_anticomplete(g: Graph, need_a: int, need_b: int, budget: Budget, seed: int):
    """Greedy bilateral peeling with restarts.

    Start from a random split of the vertices into candidate sides and
    repeatedly delete the vertex with most neighbours across; stop once the
    sides are anticomplete and check the sizes.
    """
    n = g.n
    if need_a + need_b > n:
        return None
    if need_a == 0 or need_b == 0:
        side = members(g.full_mask)
        return (frozenset(), side) if need_a == 0 else (side, frozenset())
    rng = random.Random(seed)
    adj = g.masks
    # the greedy closed-neighbourhood grower is a strong first restart
    obj, am, bm = _greedy_anticomplete(g, Budget(min(budget.limit or 4 * n, 4 * n)))
    if popcount(am) >= need_a and popcount(bm) >= need_b:
        return members(am), members(bm)
    if popcount(bm) >= need_a and popcount(am) >= need_b:
        return members(bm), members(am)
    try:
        while True:
            budget.spend()
            order = list(range(n))
            rng.shuffle(order)
            cut = rng.randint(need_a, n - need_b)
            a_mask = mask_of(order[:cut])
            b_mask = mask_of(order[cut:])
            while True:
                budget.spend()
                worst, worst_deg = -1, 0
                for v in iter_mask(a_mask):
                    d = popcount(adj[v] & b_mask)
                    if d > worst_deg:
                        worst, worst_deg = v, d
                for v in iter_mask(b_mask):
                    d = popcount(adj[v] & a_mask)
                    if d > worst_deg:
                        worst, worst_deg = v, d
                if worst < 0:
                    break
                a_mask &= ~(1 << worst)
                b_mask &= ~(1 << worst)
                if popcount(a_mask) < need_a or popcount(b_mask) < need_b:
                    break
            if worst < 0 and popcount(a_mask) >= need_a and popcount(b_mask) >= need_b:
                return members(a_mask), members(b_mask)
    except BudgetError:
        return None


# --- expansion ----------------------------------------------------------------

def closed_nbhd_sizes(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """For every subset mask ``X`` of ``V(G)`` return ``|X|`` and ``|N[X]|``.

    Built by doubling: the table for masks below ``2^(i+1)`` is the table
    below ``2^i`` OR-ed with the closed neighbourhood of vertex ``i``.
    """
    n = g.n
    nb = np.zeros(1 << n, dtype=np.uint32)
    size = np.zeros(1 << n, dtype=np.uint8)
    for i in range(n):
        lo, hi = 1 << i, 1 << (i + 1)
        nb[lo:hi] = nb[:lo] | np.uint32(g.adj_mask(i) | (1 << i))
        size[lo:hi] = size[:lo] + 1
    counts = np.zeros(1 << n, dtype=np.uint8)
    x = nb.copy()
    while True:
        nz = x != 0
        if not nz.any():
            break
        counts += nz.astype(np.uint8)
        x &= x - np.uint32(1)
    return size, counts


def _violates(nsize: int, xsize: int, tau: float, n: int) -> bool:
    return nsize < min(tau * xsize, n / 2)


def expansion_violation_plain(g: Graph, tau: float, budget=None) -> frozenset | None:
    """Reference enumeration of subsets in (size, lexicographic) order."""
    budget = as_budget(budget)
    n = g.n
    for k in range(1, n + 1):
        if k >= n / 2:
            break  # |N[X]| >= |X| >= n/2 can never violate
        for combo in itertools.combinations(range(n), k):
            budget.spend()
            m = mask_of(combo)
            if _violates(popcount(g.nbhd_mask(m) | m), k, tau, n):
                return frozenset(combo)
    return None


def expansion_violation_table(g: Graph, tau: float) -> frozenset | None:
    """Same answer as :func:`expansion_violation_plain`, vectorised over the
    full subset lattice; the first violator by (size, lexicographic order)."""
    n = g.n
    if n == 0:
        return None
    size, counts = closed_nbhd_sizes(g)
    bound = np.minimum(tau * size.astype(np.float64), n / 2)
    bad = np.nonzero((counts.astype(np.float64) < bound) & (size > 0))[0]
    if bad.size == 0:
        return None
    k = int(size[bad].min())
    cands = [tuple(sorted(iter_mask(int(m)))) for m in bad[size[bad] == k]]
    return frozenset(min(cands))


def is_tau_expanding(g: Graph, tau: float, mode: str = "exact", budget=None,
                     cap: int = EXACT_CAP, seed: int = 0) -> SearchOutcome:
    """Check ``|N[X]| >= min(tau |X|, n/2)`` for every ``X``; a witness is a
    violating ``X``."""
    _check_mode(mode)
    if tau < 1:
        raise ValueError("tau must be >= 1")
    budget = as_budget(budget)
    if mode == "exact":
        if g.n > cap:
            raise BudgetError(f"exact expansion check capped at n <= {cap} (n = {g.n})")
        try:
            budget.spend(1 << g.n)
        except BudgetError:
            return SearchOutcome(Status.UNKNOWN, nodes=budget.used)
        x = expansion_violation_table(g, tau)
        if x is None:
            return SearchOutcome(Status.VERIFIED, nodes=budget.used)
        return SearchOutcome.witness(x, budget.used)
    x = _expansion_heuristic(g, tau, budget, seed)
    if x is None:
        return SearchOutcome(Status.UNKNOWN, nodes=budget.used)
    return SearchOutcome.witness(x, budget.used)


def _expansion_heuristic(g: Graph, tau: float, budget: Budget, seed: int):
    """Probe singletons, BFS balls and greedily grown low-boundary sets."""
    n = g.n
    rng = random.Random(seed)
    adj = g.masks
    try:
        for v in range(n):
            budget.spend()
            if _violates(popcount(adj[v] | (1 << v)), 1, tau, n):
                return frozenset([v])
        starts = list(range(n))
        rng.shuffle(starts)
        for v in starts:
            x = 1 << v
            cl = adj[v] | x
            while popcount(x) < n / 2:
                budget.spend()
                if _violates(popcount(cl), popcount(x), tau, n):
                    return members(x)
                # add the boundary vertex that grows N[X] least
                best, best_size = -1, n + 1
                for u in iter_mask(cl & ~x):
                    s = popcount(cl | adj[u])
                    if s < best_size:
                        best, best_size = u, s
                if best < 0:
                    break
                x |= 1 << best
                cl |= adj[best]
    except BudgetError:
        return None
    return None


# --- holes and antiholes ------------------------------------------------------

def _hole_search(g: Graph, ell: int, budget: Budget, order: list[int]):
    """Induced cycle of length ``ell`` whose first vertex is its minimum in
    ``order``-rank; extension keeps the path chordless."""
    adj = g.masks
    rank = {v: i for i, v in enumerate(order)}
    for start in order:
        above = mask_of(u for u in order if rank[u] > rank[start])
        path = [start]

        def dfs(near: int) -> bool:
            budget.spend()
            d = len(path) - 1
            last = path[-1]
            if d == ell - 1:
                return True
            cand = adj[last] & above & ~near
            nxt_near = near | (1 << last) | (adj[last] if d > 0 else 0)
            closes = d + 1 == ell - 1
            for w in iter_mask(cand):
                if d >= 1 and bool(adj[w] >> start & 1) != closes:
                    continue
                path.append(w)
                if dfs(nxt_near):
                    return True
                path.pop()
            return False

        if dfs(1 << start):
            return tuple(path)
    return None


def find_hole_of_length(g: Graph, ell: int, mode: str = "exact", budget=None, seed: int = 0) -> SearchOutcome:
    """Induced cycle with exactly ``ell`` vertices (``ell >= 4``)."""
    _check_mode(mode)
    if ell < 4:
        raise ValueError("holes have length at least 4")
    budget = as_budget(budget)
    order = list(range(g.n))
    if mode == "heuristic":
        random.Random(seed).shuffle(order)
    try:
        cyc = _hole_search(g, ell, budget, order)
    except BudgetError:
        return SearchOutcome(Status.UNKNOWN, nodes=budget.used)
    if cyc is not None:
        assert is_induced_cycle(g, cyc)
        return SearchOutcome.witness(cyc, budget.used)
    if mode == "heuristic":
        return SearchOutcome(Status.UNKNOWN, nodes=budget.used)
    return SearchOutcome(Status.VERIFIED, nodes=budget.used)


def find_antihole_of_length(g: Graph, ell: int, mode: str = "exact", budget=None, seed: int = 0) -> SearchOutcome:
    """Hole of length ``ell`` in the complement; the witness is listed in
    complement-cycle order."""
    return find_hole_of_length(complement(g), ell, mode, budget, seed)


# --- branch-length ------------------------------------------------------------

def _girth(h: Graph) -> float:
    best = math.inf
    adj = h.masks
    for s in range(h.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = [s]
        for u in queue:
            if 2 * dist[u] + 1 >= best:
                break
            for w in iter_mask(adj[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def branch_length(h: Graph) -> float:
    """Largest ``ell`` with every cycle of length >= ell and every two
    vertices of degree >= 3 at distance >= ell; ``math.inf`` when neither
    constraint bites."""
    best = _girth(h)
    branch = [v for v in range(h.n) if h.degree(v) >= 3]
    for i, u in enumerate(branch):
        dist = {u: 0}
        queue = [u]
        for x in queue:
            for w in iter_mask(h.adj_mask(x)):
                if w not in dist:
                    dist[w] = dist[x] + 1
                    queue.append(w)
        for v in branch[i + 1:]:
            if v in dist:
                best = min(best, dist[v])
    return best


# --- induced containment --------------------------------------------------------

def contains_induced(g: Graph, h: Graph, budget=None) -> SearchOutcome:
    """Backtracking search for an induced copy of ``h``; the witness maps
    ``h``-vertex ``i`` to ``witness[i]``."""
    budget = as_budget(budget)
    if h.n > g.n:
        return SearchOutcome(Status.VERIFIED)
    if h.n == 0:
        return SearchOutcome.witness(())
    # place h-vertices so that each (after the first of its component) has an
    # already placed neighbour
    order = []
    placed = 0
    hdeg = h.degrees()
    remaining = set(range(h.n))
    while remaining:
        frontier = [v for v in remaining if h.adj_mask(v) & placed]
        pool = frontier or list(remaining)
        v = max(pool, key=lambda u: (popcount(h.adj_mask(u) & placed), hdeg[u], -u))
        order.append(v)
        placed |= 1 << v
        remaining.discard(v)
    pos = {v: i for i, v in enumerate(order)}
    prev_adj = [[pos[u] for u in iter_mask(h.adj_mask(v)) if pos[u] < pos[v]] for v in order]
    prev_non = [[pos[u] for u in range(h.n) if u != v and pos[u] < pos[v] and not h.has_edge(u, v)]
                for v in order]
    gdeg = g.degrees()
    need = [hdeg[v] for v in order]
    image = [0] * h.n
    gadj = g.masks
    full = g.full_mask

    def place(i: int, used: int) -> bool:
        budget.spend()
        if i == h.n:
            return True
        cand = full & ~used
        for j in prev_adj[i]:
            cand &= gadj[image[j]]
        for j in prev_non[i]:
            cand &= ~gadj[image[j]]
        for w in iter_mask(cand):
            if gdeg[w] < need[i]:
                continue
            image[i] = w
            if place(i + 1, used | (1 << w)):
                return True
        return False

    try:
        ok = place(0, 0)
    except BudgetError:
        return SearchOutcome(Status.UNKNOWN, nodes=budget.used)
    if not ok:
        return SearchOutcome(Status.VERIFIED, nodes=budget.used)
    emb = [0] * h.n
    for v in order:
        emb[v] = image[pos[v]]
    emb = tuple(emb)
    assert is_induced_embedding(g, h, emb)
    return SearchOutcome.witness(emb, budget.used)


def is_induced_embedding(g: Graph, h: Graph, emb) -> bool:
    """Injective, and adjacency in ``h`` matches adjacency of images in ``g``."""
    emb = list(emb)
    if len(emb) != h.n or len(set(emb)) != len(emb):
        return False
    if any(not 0 <= w < g.n for w in emb):
        return False
    return all(g.has_edge(emb[u], emb[v]) == h.has_edge(u, v)
               for u in range(h.n) for v in range(u + 1, h.n))


# --- sparse side ------------------------------------------------------------------

def find_sparse_side(g: Graph, eta: float, budget=None) -> tuple[frozenset, str]:
    """Heuristic stand-in for the Rodl-type extraction: some nonempty ``X``
    such that ``G[X]`` (side ``"graph"``) or its complement (side
    ``"complement"``) is ``eta``-sparse.  No size guarantee."""
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    budget = as_budget(budget)
    if g.n == 0:
        raise ValueError("graph has no vertices")
    total_pairs = g.n * (g.n - 1) // 2
    side = "graph" if g.m <= total_pairs - g.m else "complement"
    work = g if side == "graph" else complement(g)
    adj = work.masks
    x = work.full_mask
    while True:
        size = popcount(x)
        degs = {v: popcount(adj[v] & x) for v in iter_mask(x)}
        top = max(degs, key=lambda v: (degs[v], -v))
        if degs[top] < eta * size:
            break
        try:
            budget.spend()
        except BudgetError:
            x = 1 << top
            break
        x &= ~(1 << top)
    sub, _ = induced_subgraph(work, members(x))
    assert is_eps_sparse(sub, eta)[0]
    return members(x), side
