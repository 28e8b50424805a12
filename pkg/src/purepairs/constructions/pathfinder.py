"""Induced paths of prescribed length through ordered blocks, and between
the apexes of two levellings.

``find_path`` follows the induction on the path length: every vertex of
``B_0`` gets a type chosen by :func:`repeat_index`, the first type whose
claimed neighbourhood grows too large seeds a recursive call one level
down, and if no type ever grows the types themselves form the partition
outcome.  ``get_path`` builds a chain of disjoint pieces of the first base,
repeatedly shrinks a sub-levelling of the second levelling until
``find_path`` returns a path, and splices that path between two vertical
paths.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from ..detectors import EXACT_CAP, CoherenceParams, coherence_violation, is_eps_sparse
from ..graph import Graph, GraphInputError, as_mask, iter_mask, members, popcount
from ..oracles import is_induced_cycle, is_induced_path
from ..search import Budget, BudgetError, as_budget
from ..structures import Levelling, levelling_vertical_path, validate_levelling
from .params import (PERMISSIVE, STRICT, ConstructionFailure, ConstructionReport, ParamSet,
                     check_mode, greedy_minimal, need)

# --- repeat lemma ------------------------------------------------------------------


def _repeat_sparse(rho: float, k: int, K: int, values: dict[int, int]) -> int | None:
    """Least ``i`` in ``[1, K-k]`` with ``rho * n_i >= n_j`` for ``i < j <=
    i+k``; ``values`` lists only the nonzero entries.

    A zero entry is valid exactly when its window holds no nonzero entry, so
    the least valid zero entry sits at 1 or just after a nonzero entry; only
    those positions and the nonzero ones need checking.
    """
    nz = sorted(j for j, v in values.items() if v > 0)
    cands = {1} | set(nz) | {j + 1 for j in nz}
    for i in sorted(c for c in cands if 1 <= c <= K - k):
        ni = values.get(i, 0)
        lo = bisect.bisect_right(nz, i)
        hi = bisect.bisect_right(nz, i + k)
        if all(rho * ni >= values[j] for j in nz[lo:hi]):
            return i
    return None


def repeat_index(rho: float, k: int, values) -> int | None:
    """1-based index promised by the repeat lemma, or ``None`` when no index
    works (only possible if some entry reaches ``rho^(K/k - 2 - 1/k)``)."""
    values = list(values)
    K = len(values)
    if not (K > k > 0):
        raise ValueError(f"need K > k > 0 (K={K}, k={k})")
    if rho < 1:
        raise ValueError("rho must be at least 1")
    if any(v < 0 for v in values):
        raise ValueError("values must be non-negative")
    return _repeat_sparse(rho, k, K, {j + 1: v for j, v in enumerate(values) if v})


def repeat_bound(rho: float, K: int, k: int) -> float:
    return rho ** (K / k - 2 - 1 / k)


# --- outcomes --------------------------------------------------------------------

@dataclass(frozen=True)
class InducedPathOutcome:
    path: tuple
    indices: tuple

    @property
    def length(self) -> int:
        return len(self.path) - 1


@dataclass(frozen=True)
class PartitionOutcome:
    """Sets ``C_1 .. C_{K-k}``; only nonempty ones are stored."""

    parts: dict = field(hash=False)
    K: int = 0
    k: int = 0

    def part(self, i: int) -> frozenset:
        return self.parts.get(i, frozenset())


@dataclass(frozen=True)
class PathCertificate:
    vertices: tuple
    cycle: bool

    @property
    def length(self) -> int:
        return len(self.vertices) if self.cycle else len(self.vertices) - 1


@dataclass
class _Ctx:
    r: int
    rho: float
    eps: float
    n: int
    strict: bool
    budget: Budget
    max_branch: int = 6
    calls: int = 0


def _block_masks(g: Graph, blocks, K: int) -> dict[int, int]:
    if isinstance(blocks, dict):
        items = blocks.items()
    else:
        blocks = list(blocks)
        if len(blocks) != K:
            raise GraphInputError(f"expected {K} blocks, got {len(blocks)}")
        items = enumerate(blocks, 1)
    out = {}
    for j, b in items:
        if not 1 <= j <= K:
            raise GraphInputError(f"block index {j} outside 1..{K}")
        m = as_mask(g, b)
        if m:
            out[j] = m
    return out


# --- find_path core -----------------------------------------------------------------

def _find_path(g: Graph, ell: int, b0: int, blocks: dict[int, int], ctx: _Ctx):
    """Returns ``("path", [p_0..p_ell], [t_1..t_ell])`` or ``("partition",
    {i: C_i})``; raises :class:`ConstructionFailure` in strict mode when the
    proof's guarantees break."""
    ctx.calls += 1
    ctx.budget.spend()
    adj = g.masks
    r = ctx.r
    K = r ** ell - 1
    if ell == 1:
        for v in iter_mask(b0):
            nb = adj[v]
            for j in sorted(blocks):
                hit = nb & blocks[j]
                if hit:
                    return "path", [v, (hit & -hit).bit_length() - 1], [j]
        return "partition", {i: b0 for i in range(1, K - (r ** 0 - 1) + 1)}

    k = r ** (ell - 1) - 1
    thr = k * ctx.eps * ctx.n
    A: dict[tuple[int, int], int] = {}
    claimed = 0
    C: dict[int, int] = {}
    first_hit = None
    snapshots = []
    for h, v in enumerate(iter_mask(b0), 1):
        ctx.budget.spend()
        nb = adj[v] & ~claimed
        X = {}
        for j, m in blocks.items():
            x = nb & m
            if x:
                X[j] = x
        t = _repeat_sparse(ctx.rho, k, K, {j: popcount(x) for j, x in X.items()})
        if t is None:
            if ctx.strict:
                raise ConstructionFailure("type assignment", "repeat lemma found no index",
                                          depth=ell, vertex=v)
            t = max(range(1, K - k + 1), key=lambda i: (popcount(X.get(i, 0)), -i))
        C[t] = C.get(t, 0) | (1 << v)
        big = False
        for j in range(t, t + k + 1):
            x = X.get(j)
            if x:
                A[(t, j)] = A.get((t, j), 0) | x
                claimed |= x
            if popcount(A.get((t, j), 0)) > thr:
                big = True
        aii = A.get((t, t), 0)
        if big and first_hit is None:
            first_hit = (h, t, C[t], aii)
            if ctx.strict:
                break
        if not ctx.strict and aii:
            snapshots.append((h, t, C[t], aii))

    if first_hit is None and ctx.strict:
        return "partition", C
    cands = []
    if first_hit is not None and first_hit[3]:
        cands.append(first_hit)
    seen = {(first_hit[0], first_hit[1])} if first_hit else set()
    tried_types: dict[int, int] = {}
    for snap in reversed(snapshots):
        if (snap[0], snap[1]) in seen:
            continue
        # a few of the largest snapshots per type are enough in practice
        if tried_types.get(snap[1], 0) >= 2:
            continue
        tried_types[snap[1]] = tried_types.get(snap[1], 0) + 1
        cands.append(snap)
    for h, i, dmask, aii in cands[: ctx.max_branch]:
        nd = g.nbhd_mask(dmask)
        sub = {}
        for j in range(i + 1, i + k + 1):
            m = blocks.get(j, 0) & ~nd
            if m:
                sub[j - i] = m
        out = _find_path(g, ell - 1, aii, sub, ctx)
        if out[0] == "path":
            _, tail, idx = out
            p0_mask = dmask & adj[tail[0]]
            p0 = (p0_mask & -p0_mask).bit_length() - 1
            return "path", [p0] + tail, [i] + [i + t for t in idx]
        if ctx.strict:
            raise ConstructionFailure("recursion", "inner call returned a partition", depth=ell, h=h, type=i)
    return "partition", C


def _path_outcome_ok(g: Graph, b0: int, blocks: dict[int, int], K: int, path, idx) -> bool:
    if not (b0 >> path[0]) & 1 or len(idx) != len(path) - 1:
        return False
    if any(not 1 <= t <= K for t in idx) or any(a >= b for a, b in zip(idx, idx[1:])):
        return False
    if any(not (blocks.get(t, 0) >> p) & 1 for p, t in zip(path[1:], idx)):
        return False
    return is_induced_path(g, path)


def partition_bound_ok(g: Graph, blocks: dict[int, int], parts: dict[int, int], K: int, k: int, thr: int) -> bool:
    """For every ``i`` and ``j`` in ``[i, i+k]``, at least ``thr`` vertices
    of ``B_j`` have no neighbour in ``C_i``."""
    for i in range(1, K - k + 1):
        nci = g.nbhd_mask(parts.get(i, 0))
        for j in range(i, i + k + 1):
            if popcount(blocks.get(j, 0) & ~nci) < thr:
                return False
    return True


def _coherence_check(g: Graph, alpha: float, beta: float, cap: int = EXACT_CAP):
    if g.n > cap:
        return "unchecked"
    out = coherence_violation(g, CoherenceParams(alpha, beta), "exact", cap=cap)
    return out.verified


def graph_hypotheses(g: Graph, params: ParamSet) -> dict:
    """Sparsity and coherence at ``(eps n^(1-c), eps n)``; coherence is only
    decided exactly up to the detector cap."""
    n = g.n
    sparse = is_eps_sparse(g, params.eps)[0] if n else True
    coherent = _coherence_check(g, params.eps * n ** (1 - params.c), params.eps * n)
    return {"eps_sparse": sparse, "coherent": coherent}


def _strict_gate(checks: dict) -> None:
    bad = [k for k, v in checks.items() if v is False]
    if bad:
        raise ConstructionFailure("hypotheses", "unmet: " + ", ".join(bad))


def find_path(g: Graph, params: ParamSet, ell: int, b0, blocks, mode: str = PERMISSIVE,
              budget=None, max_branch: int = 6) -> ConstructionReport:
    """Induced path ``p_0 .. p_ell`` with ``p_0`` in ``b0`` and ``p_i`` in
    block ``t_i`` for increasing ``t_i``, or a partition of ``b0``.

    ``blocks`` is a list of exactly ``K = r^ell - 1`` vertex sets (index 1
    first) or a dict from index to set.
    """
    check_mode(mode)
    if ell < 1:
        raise GraphInputError("ell must be at least 1")
    P = params.with_n(g.n)
    K = P.K(ell)
    k = P.k(ell)
    b0m = as_mask(g, b0)
    bm = _block_masks(g, blocks, K)
    if not b0m:
        raise GraphInputError("B_0 must be nonempty")
    seen = b0m
    for j in sorted(bm):
        if bm[j] & seen:
            raise GraphInputError(f"block {j} meets an earlier block or B_0")
        seen |= bm[j]
    checks: dict = {}
    budget = as_budget(budget)
    try:
        if mode == STRICT:
            floor = need(P.r ** (2 * ell) * P.eps * g.n, STRICT)
            checks["block_sizes"] = all(popcount(bm.get(j, 0)) >= floor for j in range(1, K + 1))
            checks.update(graph_hypotheses(g, P))
            _strict_gate(checks)
        ctx = _Ctx(P.r, P.rho, P.eps, g.n, mode == STRICT, budget, max_branch)
        out = _find_path(g, ell, b0m, bm, ctx)
    except ConstructionFailure as exc:
        return ConstructionReport.failure(exc, checks)
    except BudgetError as exc:
        return ConstructionReport.failure(ConstructionFailure("budget", str(exc)), checks)
    if out[0] == "path":
        _, path, idx = out
        checks["validated"] = _path_outcome_ok(g, b0m, bm, K, path, idx)
        if not checks["validated"]:
            return ConstructionReport.failure(ConstructionFailure("validation", "path failed re-check"), checks)
        return ConstructionReport.success(InducedPathOutcome(tuple(path), tuple(idx)), checks, calls=ctx.calls)
    parts = out[1]
    union = 0
    for m in parts.values():
        union |= m
    checks["union_is_b0"] = union == b0m
    thr = need(P.r ** (2 * ell - 2) * P.eps * g.n, STRICT)
    checks["bound_ok"] = partition_bound_ok(g, bm, parts, K, k, thr)
    if mode == STRICT and not checks["bound_ok"]:
        return ConstructionReport.failure(ConstructionFailure("partition", "counting bound fails"), checks)
    cert = PartitionOutcome({i: members(m) for i, m in parts.items() if m}, K, k)
    return ConstructionReport.success(cert, checks, calls=ctx.calls)


# --- get_path --------------------------------------------------------------------

def _masks(g: Graph, lv: Levelling) -> list[int]:
    return [as_mask(g, layer) for layer in lv.layers]


def getpath_structure(g: Graph, lv1: Levelling, lv2: Levelling) -> str | None:
    """First unmet structural bullet for two levellings with disjoint
    vertex sets (edges at a shared apex are ignored), or None."""
    for name, lv in (("first", lv1), ("second", lv2)):
        rep = validate_levelling(g, lv)
        if not rep:
            return f"{name} levelling invalid: {rep.rule}"
    a1, a2 = lv1.apex, lv2.apex
    shared = {a1} & {a2}
    if (lv1.vertices & lv2.vertices) != shared:
        return "vertex sets meet outside the shared apex"
    strip = as_mask(g, shared)
    h1 = as_mask(g, lv1.heart) & ~strip
    v2 = as_mask(g, lv2.vertices) & ~strip & ~(1 << a2)
    if g.nbhd_mask(h1) & v2:
        return "second levelling touches the first heart"
    if a1 != a2 and g.adj_mask(a2) & as_mask(g, lv1.heart):
        return "second apex touches the first heart"
    return None


def getpath2_structure(g: Graph, lv1: Levelling, lv2: Levelling) -> str | None:
    for name, lv in (("first", lv1), ("second", lv2)):
        rep = validate_levelling(g, lv)
        if not rep:
            return f"{name} levelling invalid: {rep.rule}"
    a1, a2 = lv1.apex, lv2.apex
    shared = {a1} & {a2}
    if (lv1.vertices & lv2.vertices) != (shared | (lv1.base & lv2.base)):
        return "vertex sets meet outside the apex and the bases"
    strip = as_mask(g, shared)
    h1 = as_mask(g, lv1.heart) & ~strip
    pen1 = as_mask(g, lv1.penultimate)
    b2 = as_mask(g, lv2.base)
    v2 = as_mask(g, lv2.vertices) & ~strip
    for u in iter_mask(h1):
        for v in iter_mask(g.adj_mask(u) & v2):
            if not (((pen1 >> u) & 1 and (b2 >> v) & 1) or ((pen1 >> v) & 1 and (b2 >> u) & 1)):
                return f"heart edge {u}-{v} is not penultimate-to-base"
    return None


def _prod_k(P: ParamSet, lo: int, hi: int) -> float:
    out = 1.0
    for i in range(lo, hi + 1):
        out *= P.k_i(i)
    return out


def _get_path(g: Graph, P: ParamSet, ell: int, lv1: Levelling, lv2: Levelling, mode: str,
              budget: Budget, max_branch: int) -> PathCertificate:
    strict = mode == STRICT
    s, t = lv1.height, lv2.height
    L1, M = _masks(g, lv1), _masks(g, lv2)
    a1, a2 = lv1.apex, lv2.apex
    n = g.n
    Ls, Lpen = L1[-1], L1[-2]
    thr = need(P.d_i(ell + t) * n, mode)
    KT = P.k_i(ell + t)

    Zs, Ds = [0], []
    covered = 0
    for i in range(1, KT + 1):
        budget.spend()
        remaining = Ls & ~covered
        S = None
        if popcount(remaining) >= thr:
            S = greedy_minimal(Lpen & ~Zs[-1], lambda m: popcount(g.nbhd_mask(m) & remaining), thr)
        if S is None:
            if strict or not Ds:
                raise ConstructionFailure("D_i exhaustion", "base too small for the next D-set",
                                          index=i, built=len(Ds))
            break
        D = g.nbhd_mask(S) & remaining
        covered |= D
        Zs.append(Zs[-1] | S)
        Ds.append(D)
    m = len(Ds)
    # E_j = D_{m+1-j}: the path then leaves through its lowest-index D-set,
    # whose Z-set sees none of the later D-sets
    E = {j: Ds[m - j] for j in range(1, m + 1)}
    ctx = _Ctx(P.r, P.rho, P.eps, n, strict, budget, max_branch)
    lv1_up = Levelling(lv1.layers[:s])
    last_error: list[ConstructionFailure] = []

    def splice(h, Q, g0, path, idx) -> PathCertificate:
        j_last = g0 - 1 + idx[-1]
        zi = Zs[m + 1 - j_last]
        vs = g.adj_mask(path[-1]) & zi
        if not vs:
            raise ConstructionFailure("splice", "no exit vertex in the Z-set")
        v = (vs & -vs).bit_length() - 1
        qpath = levelling_vertical_path(g, Levelling([members(q) for q in Q[: h + 1]]), path[0])
        rpath = levelling_vertical_path(g, lv1_up, v)
        seq = list(qpath) + list(path[1:]) + list(reversed(rpath))
        seq.reverse()
        cycle = a1 == a2
        if cycle:
            seq.pop()
        cert = PathCertificate(tuple(seq), cycle)
        good = is_induced_cycle(g, seq) if cycle else is_induced_path(g, seq)
        if not good or cert.length != ell + s + t:
            raise ConstructionFailure("validation", "spliced path is not induced of the right length",
                                      h=h, vertices=tuple(seq))
        return cert

    def search(h: int, Q: list[int], g0: int, F: dict[int, int]) -> PathCertificate:
        budget.spend()
        L = ell + t - h
        Kh = P.k_i(L)
        blocks = {j - g0 + 1: F[j] for j in F if g0 <= j < g0 + Kh and F[j]}
        out = _find_path(g, L, Q[h], blocks, ctx)
        if out[0] == "path":
            return splice(h, Q, g0, out[1], out[2])
        if h >= t:
            raise ConstructionFailure("goodness escalation", "partition returned at h = t", h=h)
        k = P.k_i(L - 1)
        options = []
        for i, ci in sorted(out[1].items()):
            if not ci:
                continue
            chain = Q[:h] + [ci]
            for hp in range(h + 1, t + 1):
                chain.append(g.nbhd_mask(chain[-1]) & Q[hp])
            if chain[-1]:
                options.append((-popcount(chain[-1]), i, ci, chain))
        options.sort(key=lambda o: (o[0], o[1]))
        if strict:
            options = options[:1]
        if not options:
            raise ConstructionFailure("goodness escalation", "no part reaches the base", h=h)
        for _, i, ci, chain in options[:max_branch]:
            abs_i = g0 - 1 + i
            nci = g.nbhd_mask(ci)
            Fn = {j: F.get(j, 0) & ~nci for j in range(abs_i, abs_i + k)}
            if strict:
                floor = need(P.d_i(L - 1) * n, STRICT)
                need_qt = _prod_k(P, ell, ell + t - h - 1) * P.eps * n ** (1 - P.c)
                if popcount(chain[-1]) <= need_qt or any(popcount(x) < floor for x in Fn.values()):
                    raise ConstructionFailure("goodness escalation", "sub-levelling is not good", h=h + 1)
            try:
                return search(h + 1, chain, abs_i, Fn)
            except ConstructionFailure as exc:
                if strict:
                    raise
                last_error.append(exc)
        raise last_error[-1] if last_error else ConstructionFailure("goodness escalation", "no option", h=h)

    return search(0, list(M), 1, dict(E))


def _run_get_path(g, params, ell, lv1, lv2, mode, budget, max_branch, relaxed: bool) -> ConstructionReport:
    check_mode(mode)
    if ell < 1:
        raise GraphInputError("ell must be at least 1")
    P = params.with_n(g.n)
    checks: dict = {}
    budget = as_budget(budget)
    allowed = lv1.heart | lv1.base | lv2.heart | lv2.base
    try:
        problem = (getpath2_structure if relaxed else getpath_structure)(g, lv1, lv2)
        checks["structure"] = problem is None
        if problem:
            raise ConstructionFailure("input", problem)
        dd = P.d / 3 if relaxed else P.d
        if mode == STRICT:
            s, t = lv1.height, lv2.height
            checks["eps_vs_d"] = P.r ** ((t + 1) * (ell + t)) * P.eps < dd
            floor = need(P.d * g.n, STRICT)
            checks["base_sizes"] = len(lv1.base) >= floor and len(lv2.base) >= floor
            checks.update(graph_hypotheses(g, P))
            _strict_gate(checks)
        if relaxed:
            lv1, lv2 = _shrink_bases(g, P, lv1, lv2, mode)
        Pd = ParamSet(P.c, P.eps, g.n, dd, P.p)
        cert = _get_path(g, Pd, ell, lv1, lv2, mode, budget, max_branch)
    except ConstructionFailure as exc:
        return ConstructionReport.failure(exc, checks)
    except BudgetError as exc:
        return ConstructionReport.failure(ConstructionFailure("budget", str(exc)), checks)
    checks["inside_levellings"] = set(cert.vertices) <= allowed
    if not checks["inside_levellings"]:
        return ConstructionReport.failure(ConstructionFailure("validation", "path leaves the levellings"), checks)
    return ConstructionReport.success(cert, checks, length=cert.length)


def _shrink_bases(g: Graph, P: ParamSet, lv1: Levelling, lv2: Levelling, mode: str):
    """Minimal part of the first penultimate level seeing ``d/3`` of the two
    bases; its neighbours there become the first base and leave the second."""
    s = lv1.height
    pen = as_mask(g, lv1.penultimate)
    target = as_mask(g, lv1.base | lv2.base)
    thr = need(P.d / 3 * g.n, mode)
    S = greedy_minimal(pen, lambda m: popcount(g.nbhd_mask(m) & target), thr)
    if S is None:
        raise ConstructionFailure("base shrink", "penultimate level sees too little of the bases")
    new_base = g.nbhd_mask(S) & target
    rest2 = as_mask(g, lv2.base) & ~new_base
    if not rest2:
        raise ConstructionFailure("base shrink", "second base emptied")
    lv1n = Levelling(list(lv1.layers[: s - 1]) + [members(S), members(new_base)])
    return lv1n, lv2.with_base(members(rest2))


def get_path(g: Graph, params: ParamSet, ell: int, lv1: Levelling, lv2: Levelling,
             mode: str = PERMISSIVE, budget=None, max_branch: int = 6) -> ConstructionReport:
    """Induced path (cycle when the apexes coincide) of length ``ell + s +
    t`` between the apexes of two levellings of heights ``s`` and ``t``."""
    return _run_get_path(g, params, ell, lv1, lv2, mode, budget, max_branch, relaxed=False)


def get_path_relaxed(g: Graph, params: ParamSet, ell: int, lv1: Levelling, lv2: Levelling,
                     mode: str = PERMISSIVE, budget=None, max_branch: int = 6) -> ConstructionReport:
    """As :func:`get_path` for levellings whose bases may overlap and whose
    cross edges run from the first penultimate level to the second base."""
    return _run_get_path(g, params, ell, lv1, lv2, mode, budget, max_branch, relaxed=True)
