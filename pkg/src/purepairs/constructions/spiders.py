"""Spiders from multicoverings, troupes of spiders with minimal hearts, and
their conversion into troupes of lobsters."""
from __future__ import annotations

from ..graph import Graph, as_mask, bfs_layers_mask, induced_subgraph, iter_mask, mask_of, members, popcount
from ..search import BudgetError, as_budget
from ..structures import (Covering, CoveringSequence, Levelling, Lobster, Spider, Troupe,
                          validate_spider, validate_troupe)
from .coverings import build_multicovering
from .params import PERMISSIVE, STRICT, ConstructionFailure, ConstructionReport, check_mode, need


def spider_height_bound(c: float) -> float:
    return 2 + 2 / c


def spider_from_multicovering(g: Graph, mc: CoveringSequence) -> Spider:
    """Fold the lowest base vertex into every heart; the mass drops by one."""
    base = mc.base
    if len(base) < 2:
        raise ConstructionFailure("spider", "base needs at least two vertices", base=len(base))
    a = min(base)
    rest = base - {a}
    return Spider(a, [Covering(a, t.heart | {a}, rest) for t in mc.terms])


def _lift_spider(sp: Spider, order) -> Spider:
    def up(xs):
        return frozenset(order[v] for v in xs)
    return Spider(order[sp.apex], [Covering(order[m.apex], up(m.heart), up(m.base)) for m in sp.members])


def build_spider(g: Graph, c: float, n_target: int, eps: float, mode: str = PERMISSIVE,
                 budget=None) -> ConstructionReport:
    """Spider of length ``n_target`` and height at most ``2 + 2/c``."""
    check_mode(mode)
    if n_target < 1:
        raise ValueError("n_target must be at least 1")
    rep = build_multicovering(g, c, n_target, eps, mode, budget)
    checks = {"multicovering": rep.ok}
    if not rep.ok:
        return ConstructionReport.failure(ConstructionFailure(rep.stage, rep.reason, **rep.summary), checks)
    try:
        sp = spider_from_multicovering(g, rep.certificate)
    except ConstructionFailure as exc:
        return ConstructionReport.failure(exc, checks)
    checks["valid"] = bool(validate_spider(g, sp, spider_height_bound(c)))
    checks["mass"] = sp.mass >= eps * g.n
    if not checks["valid"] or (mode == STRICT and not checks["mass"]):
        return ConstructionReport.failure(ConstructionFailure("validation", "spider failed re-check"), checks)
    return ConstructionReport.success(sp, checks, mass=sp.mass)


# --- troupes -----------------------------------------------------------------------

def _radius_ok(g: Graph, a: int, heart: int, radius: float) -> bool:
    layers, rest = bfs_layers_mask(g, a, heart)
    return rest == 0 and len(layers) - 1 <= radius


def _attached(g: Graph, heart: int, within: int) -> int:
    return popcount(g.nbhd_mask(heart) & within & ~heart)


def minimize_heart(g: Graph, a: int, heart: int, within: int, radius: float, thr: int) -> int:
    """Drop heart vertices (highest index first, repeated until stable) while
    the apex still reaches everything within ``radius`` and at least ``thr``
    vertices of ``within`` stay attached."""
    changed = True
    while changed:
        changed = False
        for v in sorted(iter_mask(heart & ~(1 << a)), reverse=True):
            trial = heart & ~(1 << v)
            if _radius_ok(g, a, trial, radius) and _attached(g, trial, within) >= thr:
                heart = trial
                changed = True
    return heart


def heart_is_minimal(g: Graph, a: int, heart, within, radius: float, thr: int) -> bool:
    """Removing any single non-apex vertex breaks the radius or the
    attachment count."""
    hm, wm = as_mask(g, heart), as_mask(g, within)
    for v in iter_mask(hm & ~(1 << a)):
        trial = hm & ~(1 << v)
        if _radius_ok(g, a, trial, radius) and _attached(g, trial, wm) >= thr:
            return False
    return True


def build_troupe(g: Graph, c: float, m: int, n_target: int, eps: float, mode: str = PERMISSIVE,
                 budget=None) -> ConstructionReport:
    """``m`` spiders with pairwise disjoint, anticomplete hearts.  After
    each spider its hearts are minimised, bases reset to the heart
    neighbourhoods, and everything within distance one of the hearts is
    removed before the next spider is built."""
    check_mode(mode)
    budget = as_budget(budget)
    if m < 1:
        raise ValueError("m must be at least 1")
    radius = 1 + 2 / c
    x = g.full_mask
    e = eps
    spiders, checks, minimal = [], {}, []
    try:
        for idx in range(m):
            sub, order = induced_subgraph(g, iter_mask(x))
            rep = build_spider(sub, c, n_target, e, mode, budget)
            if not rep.ok:
                raise ConstructionFailure("troupe", f"spider {idx}: {rep.stage}: {rep.reason}", index=idx)
            sp = _lift_spider(rep.certificate, order)
            a = sp.apex
            thr = need(e * popcount(x), mode)
            hearts = [minimize_heart(g, a, mask_of(mb.heart), x, radius, thr) for mb in sp.members]
            minimal.append(all(heart_is_minimal(g, a, h, x, radius, thr) for h in hearts))
            union = 0
            for h in hearts:
                union |= h
            mems = []
            for i, h in enumerate(hearts):
                others = union & ~h
                base = g.nbhd_mask(h) & x & ~h & ~others
                if not base:
                    raise ConstructionFailure("troupe", "a minimised heart lost its base", index=idx, member=i)
                mems.append(Covering(a, members(h), members(base)))
            spiders.append(Spider(a, mems))
            x &= ~(union | g.nbhd_mask(union))
            inv = 1 / e - 3 * n_target
            e = 1 / inv if inv > 0 else e
            if idx + 1 < m and not x:
                raise ConstructionFailure("troupe", "graph exhausted", index=idx + 1)
    except ConstructionFailure as exc:
        return ConstructionReport.failure(exc, checks)
    except BudgetError as exc:
        return ConstructionReport.failure(ConstructionFailure("budget", str(exc)), checks)
    troupe = Troupe(spiders, "spider")
    checks["valid"] = bool(validate_troupe(g, troupe, spider_height_bound(c)))
    checks["hearts_minimal"] = all(minimal)
    checks["mass"] = all(sp.mass >= eps * g.n for sp in spiders)
    if not checks["valid"]:
        return ConstructionReport.failure(ConstructionFailure("validation", "troupe failed re-check"), checks)
    return ConstructionReport.success(troupe, checks, size=m)


# --- lobsters ----------------------------------------------------------------------

def spiders_to_lobsters(g: Graph, troupe: Troupe, c: float, eps: float, mode: str = PERMISSIVE,
                        budget=None) -> ConstructionReport:
    """Convert each spider member, in order, into a levelling whose base is
    the class of attached vertices of the least type with enough mass;
    lower-type vertices leave every other base."""
    check_mode(mode)
    budget = as_budget(budget)
    if troupe.kind != "spider":
        raise ValueError("expected a troupe of spiders")
    f = 2 + 2 / c
    flat = [(s, mb) for s, sp in enumerate(troupe.members) for mb in sp.members]
    mn = len(flat)
    n = g.n
    xs0 = 0
    for _, mb in flat:
        xs0 |= mask_of(mb.base)
    xs = [xs0 & g.nbhd_mask(mask_of(mb.heart)) for _, mb in flat]
    levels: list[list[int]] = []
    ledger = []
    checks: dict = {}
    try:
        for h, (_, mb) in enumerate(flat, 1):
            budget.spend()
            layers, _ = bfs_layers_mask(g, mb.apex, mask_of(mb.heart))
            todo = xs[h - 1]
            by_type = []
            for layer in layers:
                hit = todo & g.nbhd_mask(layer)
                by_type.append(hit)
                todo &= ~hit
            thr = need(f ** (mn - h) * eps * n, mode)
            k = next((j for j, t in enumerate(by_type) if popcount(t) >= thr), None)
            if k is None:
                if mode == STRICT or not any(by_type):
                    raise ConstructionFailure("lobster", "no type class has enough mass", member=h,
                                              need=thr, sizes=[popcount(t) for t in by_type])
                k = max(range(len(by_type)), key=lambda j: (popcount(by_type[j]), -j))
            z = 0
            for t in by_type[:k]:
                z |= t
            xs[h - 1] = by_type[k]
            for i in range(mn):
                if i != h - 1:
                    xs[i] &= ~z
            levels.append(layers[: k + 1])
            sizes = [popcount(v) for v in xs]
            ledger.append(min(sizes))
            if mode == STRICT and min(sizes) < f ** (mn - h) * eps * n - 1e-9:
                raise ConstructionFailure("lobster", "mass ledger violated", member=h, sizes=sizes)
    except ConstructionFailure as exc:
        return ConstructionReport.failure(exc, checks)
    except BudgetError as exc:
        return ConstructionReport.failure(ConstructionFailure("budget", str(exc)), checks)
    lobsters, pos = [], 0
    for sp in troupe.members:
        mems = []
        for _ in sp.members:
            if not xs[pos]:
                return ConstructionReport.failure(ConstructionFailure("lobster", "a base emptied", member=pos + 1), checks)
            mems.append(Levelling([members(m) for m in levels[pos]] + [members(xs[pos])]))
            pos += 1
        lobsters.append(Lobster(sp.apex, mems))
    out = Troupe(lobsters, "lobster")
    checks["valid"] = bool(validate_troupe(g, out))
    checks["height"] = all(lb.height <= f + 1e-9 for lb in lobsters)
    if not checks["valid"]:
        return ConstructionReport.failure(ConstructionFailure("validation", "lobster troupe failed re-check"), checks)
    return ConstructionReport.success(out, checks, ledger=ledger)
