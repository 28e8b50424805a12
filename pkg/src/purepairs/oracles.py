"""Brute-force gold standards: pure pairs, induced paths, induced cycles."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .graph import Graph, complement, iter_mask, mask_of, members, popcount
from .search import Budget, BudgetError, as_budget

EXACT_CAP = 24


@dataclass(frozen=True)
class PurePairResult:
    """``objective = min(|A|, |B|)``; an objective of 0 means no pair exists."""

    a: frozenset
    b: frozenset
    kind: str | None
    objective: int

    @property
    def total(self) -> int:
        return len(self.a) + len(self.b)

    @classmethod
    def none(cls, kind=None) -> "PurePairResult":
        return cls(frozenset(), frozenset(), kind, 0)


def _closed(g: Graph, mask: int) -> int:
    return g.nbhd_mask(mask) | mask


def find_anticomplete_pair(g: Graph, a: int, b: int, budget=None) -> tuple[int, int] | None:
    """Exhaustively look for disjoint anticomplete ``A, B`` with ``|A| >= a``
    and ``|B| >= b``; returns masks or ``None``.

    Anticompleteness is hereditary, so it suffices to enumerate sets of size
    exactly ``min(a, b)`` on one side and take everything outside its closed
    neighbourhood on the other.
    """
    budget = as_budget(budget)
    a, b = max(a, 0), max(b, 0)
    n = g.n
    if a + b > n:
        return None
    swap = a > b
    small, large = (b, a) if swap else (a, b)
    full = g.full_mask
    if small == 0:
        if large == 0:
            return (0, 0)
        pair = (0, full) if popcount(full) >= large else None
        return None if pair is None else ((pair[1], pair[0]) if swap else pair)
    closed = [_closed(g, 1 << v) for v in range(n)]
    usable = [v for v in range(n) if n - popcount(closed[v]) >= large]
    found = None

    def extend(start: int, depth: int, chosen: int, cl: int) -> bool:
        nonlocal found
        budget.spend()
        if depth == small:
            rest = full & ~cl
            if popcount(rest) >= large:
                found = (chosen, rest)
                return True
            return False
        need = small - depth
        for idx in range(start, len(usable) - need + 1):
            v = usable[idx]
            ncl = cl | closed[v]
            if n - popcount(ncl) < large:
                continue
            if extend(idx + 1, depth + 1, chosen | (1 << v), ncl):
                return True
        return False

    extend(0, 0, 0, 0)
    if found is None:
        return None
    return (found[1], found[0]) if swap else found


def _greedy_anticomplete(g: Graph, budget: Budget, starts: int | None = None) -> tuple[int, int, int]:
    """Greedy growth of one side while keeping its closed neighbourhood small."""
    n = g.n
    full = g.full_mask
    closed = [_closed(g, 1 << v) for v in range(n)]
    order = sorted(range(n), key=lambda v: (popcount(closed[v]), v))
    if starts is not None:
        order = order[:starts]
    best = (0, 0, 0)
    try:
        for s in order:
            a_mask, ncl = 1 << s, closed[s]
            while True:
                budget.spend()
                rest = full & ~ncl
                obj = min(popcount(a_mask), popcount(rest))
                if obj > best[0]:
                    best = (obj, a_mask, rest)
                if popcount(rest) <= best[0]:
                    break
                pick, pick_size = -1, n + 1
                for u in range(n):
                    if (a_mask >> u) & 1:
                        continue
                    size = popcount(ncl | closed[u])
                    if size < pick_size:
                        pick, pick_size = u, size
                if pick < 0:
                    break
                a_mask |= 1 << pick
                ncl |= closed[pick]
    except BudgetError:
        pass
    return best


def _saturate(g: Graph, a_mask: int, b_mask: int) -> tuple[int, int]:
    """Grow an anticomplete pair to the Galois closure ``B = V - N[A]``,
    ``A = V - N[B]``."""
    full = g.full_mask
    b_mask = full & ~_closed(g, a_mask)
    a_mask = full & ~_closed(g, b_mask)
    return a_mask, b_mask


def _orient(a_mask: int, b_mask: int) -> tuple[int, int]:
    if a_mask and b_mask and (b_mask & -b_mask) < (a_mask & -a_mask):
        return b_mask, a_mask
    return a_mask, b_mask


def _max_anticomplete_masks(g: Graph, mode: str, budget: Budget, cap: int) -> tuple[int, int, int]:
    if mode == "exact":
        if g.n > cap:
            raise BudgetError(f"exact pure-pair search capped at n <= {cap} (n = {g.n})")
        best = (0, 0, 0)
        # seed with the heuristic so the exact loop starts at a good level
        h = _greedy_anticomplete(g, Budget(None), starts=None if g.n <= 16 else 8)
        if h[0] > 0:
            best = h
        k = best[0] + 1
        while k <= g.n // 2:
            pair = find_anticomplete_pair(g, k, k, budget)
            if pair is None:
                break
            best = (k, pair[0], pair[1])
            k += 1
        return best
    if mode == "heuristic":
        return _greedy_anticomplete(g, budget)
    raise ValueError(f"unknown mode {mode!r}")


def max_anticomplete_pair(g: Graph, mode: str = "exact", budget=None, cap: int = EXACT_CAP) -> PurePairResult:
    """Maximise ``min(|A|, |B|)`` over anticomplete pairs.

    Exact mode raises :class:`BudgetError` above ``cap`` vertices or when the
    node budget runs out; heuristic mode returns a validated lower bound.
    """
    budget = as_budget(budget)
    obj, a_mask, b_mask = _max_anticomplete_masks(g, mode, budget, cap)
    if obj == 0:
        return PurePairResult.none("anticomplete")
    a_mask, b_mask = _orient(*_saturate(g, a_mask, b_mask))
    assert g.nbhd_mask(a_mask) & b_mask == 0 and not a_mask & b_mask
    return PurePairResult(members(a_mask), members(b_mask), "anticomplete",
                          min(popcount(a_mask), popcount(b_mask)))


def max_pure_pair(g: Graph, mode: str = "exact", budget=None, cap: int = EXACT_CAP) -> PurePairResult:
    """Best pure pair of either kind; anticomplete wins ties."""
    budget = as_budget(budget)
    anti = max_anticomplete_pair(g, mode, budget, cap)
    comp = max_anticomplete_pair(complement(g), mode, budget, cap)
    comp = PurePairResult(comp.a, comp.b, "complete" if comp.objective else None, comp.objective)
    if comp.objective > anti.objective:
        return comp
    if anti.objective == 0:
        return PurePairResult.none()
    return anti


def fox_bound(n: int) -> float:
    """``n / (4 log2 n)``, the comparability-graph pure-pair guarantee."""
    return n / (4 * math.log2(n)) if n > 1 else 0.0


def asymmetric_feasible(pair: PurePairResult, n: int, eps: float, c: float) -> bool:
    """Whether the pair meets ``|A| >= eps*n`` and ``|B| >= eps*n^(1-c)`` in
    some orientation."""
    big, small = sorted((len(pair.a), len(pair.b)), reverse=True)
    return pair.objective > 0 and big >= eps * n and small >= eps * n ** (1 - c)


# --- induced paths and cycles ---------------------------------------------

def _bfs_dist(g: Graph, src: int) -> list[float]:
    dist = [math.inf] * g.n
    dist[src] = 0
    frontier, seen, d = 1 << src, 1 << src, 0
    while frontier:
        d += 1
        frontier = g.nbhd_mask(frontier) & ~seen
        seen |= frontier
        for v in iter_mask(frontier):
            dist[v] = d
    return dist


def induced_path_oracle(g: Graph, a: int, b: int, ell: int, budget=None) -> tuple[bool, tuple[int, ...] | None]:
    """Exact search for an induced path of length ``ell`` from ``a`` to ``b``;
    with ``a == b`` it looks for an induced cycle of length ``ell`` through
    ``a`` (witness lists the cycle once, starting at ``a``)."""
    budget = as_budget(budget)
    cycle = a == b
    if ell < 1 or (cycle and ell < 3):
        return False, None
    dist = _bfs_dist(g, b)
    adj = g.masks
    a_bit = 1 << a
    path = [a]

    # ``near`` holds every vertex equal or adjacent to p_0..p_{d-1}; in cycle
    # mode adjacency to the apex is handled separately.
    def dfs(near: int) -> bool:
        budget.spend()
        d = len(path) - 1
        last = path[-1]
        if cycle and d == ell - 1:
            return True
        if not cycle and d == ell:
            return last == b
        cand = adj[last] & ~near & ~(1 << last) & ~a_bit
        nxt_near = near | (1 << last) | (adj[last] if (d > 0 or not cycle) else 0)
        for w in iter_mask(cand):
            if cycle:
                closes = d + 1 == ell - 1
                if d >= 1 and bool(adj[w] & a_bit) != closes:
                    continue
            else:
                if w == b and d + 1 != ell:
                    continue
                if dist[w] > ell - d - 1:
                    continue
            path.append(w)
            if dfs(nxt_near):
                return True
            path.pop()
        return False

    if dfs(a_bit):
        return True, tuple(path)
    return False, None


def is_induced_path(g: Graph, seq) -> bool:
    """Distinct vertices, consecutive ones adjacent, no other adjacencies."""
    seq = list(seq)
    if len(set(seq)) != len(seq) or not seq:
        return False
    for i, u in enumerate(seq):
        for j in range(i + 1, len(seq)):
            if g.has_edge(u, seq[j]) != (j == i + 1):
                return False
    return True


def is_induced_cycle(g: Graph, seq) -> bool:
    seq = list(seq)
    k = len(seq)
    if k < 3 or len(set(seq)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            consecutive = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(seq[i], seq[j]) != consecutive:
                return False
    return True


def _cycle_order(g: Graph, vs: tuple[int, ...]) -> tuple[int, ...]:
    start = min(vs)
    inside = mask_of(vs)
    nbrs = sorted(iter_mask(g.adj_mask(start) & inside))
    order = [start, nbrs[0]]
    while len(order) < len(vs):
        nxt = [u for u in iter_mask(g.adj_mask(order[-1]) & inside) if u != order[-2]]
        order.append(nxt[0])
    return tuple(order)


def enumerate_induced_cycles(g: Graph, ell: int, budget=None) -> tuple[int, list[tuple[int, ...]]]:
    """All induced cycles of length ``ell``, by testing every ``ell``-subset
    for inducing a connected 2-regular graph.  Witnesses start at their least
    vertex and continue towards its smaller neighbour."""
    budget = as_budget(budget)
    if ell < 3 or ell > g.n:
        return 0, []
    found = []
    for combo in itertools.combinations(range(g.n), ell):
        budget.spend()
        inside = mask_of(combo)
        if any(popcount(g.adj_mask(v) & inside) != 2 for v in combo):
            continue
        # 2-regular: connected iff one cycle covers everything
        reached = 1 << combo[0]
        frontier = reached
        while frontier:
            frontier = g.nbhd_mask(frontier) & inside & ~reached
            reached |= frontier
        if reached == inside:
            found.append(_cycle_order(g, combo))
    return len(found), found
